#include "ruthkit/model_io.hpp"

#include "ruthkit/examples.hpp"

#include <openssl/evp.h>

#include <cstdio>

namespace ruthkit {

namespace {

[[noreturn]] void fail(const std::string& what) { throw ModelParseError(what); }

const ojson& require(const ojson& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) fail(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

int as_int(const ojson& j, const std::string& what) {
  if (!j.is_number_integer()) fail(what + " must be an integer");
  return j.get<int>();
}

int index_in(const ojson& j, int bound, const std::string& what) {
  const int i = as_int(j, what);
  if (i < 0 || i >= bound) fail(what + " out of range: " + std::to_string(i));
  return i;
}

const ojson& array_of(const ojson& j, std::size_t n, const std::string& what) {
  if (!j.is_array() || j.size() != n) fail(what + " must be an array of length " + std::to_string(n));
  return j;
}

unsigned mask_from_json(const ojson& j, int rank, int arity_expected, const std::string& what) {
  if (!j.is_array() || static_cast<int>(j.size()) != arity_expected) fail(what + ": wrong number of indices");
  unsigned mask = 0;
  int prev = -1;
  for (const auto& x : j) {
    const int i = index_in(x, rank, what + " index");
    if (i <= prev) fail(what + ": indices must be strictly increasing");
    prev = i;
    mask |= 1u << i;
  }
  return mask;
}

ojson mask_to_json(unsigned mask) {
  ojson a = ojson::array();
  for (int i : mask_indices(mask)) a.push_back(i);
  return a;
}

CoeffAlgebra algebra_from_json(const ojson& j) {
  if (j.is_null()) return point_algebra();
  const std::string type = require(j, "type").is_string() ? j.at("type").get<std::string>() : "";
  if (type == "point") return point_algebra();
  if (type == "jet") {
    const int n = as_int(require(j, "n"), "algebra.n");
    const int order = as_int(require(j, "order"), "algebra.order");
    if (n < 1 || n > 4 || order < 0 || order > 6) fail("jet algebra parameters out of range");
    return jet_algebra(n, order);
  }
  fail("algebra.type must be \"point\" or \"jet\"");
}

ojson algebra_to_json(const CoeffAlgebra& a) {
  if (a.is_point()) return ojson{{"type", "point"}};
  return ojson{{"type", "jet"}, {"n", a.n_vars}, {"order", a.order}};
}

GradedBundle bundle_from_json(const ojson& j) {
  if (!j.is_array()) fail("bundle must be an array");
  std::vector<std::pair<int, int>> dr;
  std::map<int, std::vector<std::string>> names;
  for (const auto& c : j) {
    const int d = as_int(require(c, "degree"), "bundle.degree");
    const int r = as_int(require(c, "rank"), "bundle.rank");
    if (r < 0 || r > 12) fail("bundle rank out of range");
    dr.emplace_back(d, r);
    if (c.contains("names")) {
      if (!c.at("names").is_array() || static_cast<int>(c.at("names").size()) != r)
        fail("bundle names must list one name per basis element");
      for (const auto& s : c.at("names")) {
        if (!s.is_string()) fail("bundle names must be strings");
        names[d].push_back(s.get<std::string>());
      }
    }
  }
  GradedBundle E;
  try {
    E = make_bundle(dr);
  } catch (const std::invalid_argument& e) {
    fail(e.what());
  }
  for (auto& c : E.components)
    if (names.count(c.degree)) c.names = names.at(c.degree);
  return E;
}

ojson bundle_to_json(const GradedBundle& E) {
  ojson a = ojson::array();
  for (const auto& c : E.components) {
    ojson x{{"degree", c.degree}, {"rank", c.rank}};
    if (!c.names.empty()) x["names"] = c.names;
    a.push_back(x);
  }
  return a;
}

/// [[a, row, col, coeff], ...] into one matrix per frame element.
std::vector<CMat> frame_matrices(const ojson& j, const CoeffAlgebra& alg, int frames, int rows, int cols,
                                 const std::string& what) {
  std::vector<CMat> out(frames, cmat_zero(alg.dim(), rows, cols));
  if (j.is_null()) return out;
  if (!j.is_array()) fail(what + " must be an array");
  for (const auto& e : j) {
    array_of(e, 4, what + " entry");
    const int a = index_in(e[0], frames, what + " frame");
    const int r = index_in(e[1], rows, what + " row");
    const int c = index_in(e[2], cols, what + " column");
    cmat_set_entry(out[a], r, c, element_from_json(alg, e[3]));
  }
  return out;
}

ojson frame_matrices_to_json(const CoeffAlgebra& a, const std::vector<CMat>& ms) {
  ojson out = ojson::array();
  for (std::size_t f = 0; f < ms.size(); ++f)
    for (int i = 0; i < ms[f].rows(); ++i)
      for (int k = 0; k < ms[f].cols(); ++k) {
        VecQ v = cmat_entry(ms[f], i, k);
        if (!is_zero(v)) out.push_back({static_cast<int>(f), i, k, element_to_json(a, v)});
      }
  return out;
}

LieAlgebroid ambient_from_json(const ojson& j, AlgebraPtr alg) {
  const int rank = as_int(require(j, "rank"), "ambient.rank");
  if (rank < 1 || rank > 8) fail("ambient.rank out of range");
  LieAlgebroid L = make_algebroid(alg, rank);
  if (j.contains("names")) {
    const auto& n = j.at("names");
    if (!n.is_array() || static_cast<int>(n.size()) != rank) fail("ambient.names must have one name per frame element");
    for (int i = 0; i < rank; ++i) {
      if (!n[i].is_string()) fail("ambient.names must be strings");
      L.names[i] = n[i].get<std::string>();
    }
  }
  if (j.contains("bracket")) {
    if (!j.at("bracket").is_array()) fail("ambient.bracket must be an array");
    for (const auto& e : j.at("bracket")) {
      array_of(e, 4, "bracket entry");
      const int a = index_in(e[0], rank, "bracket index");
      const int b = index_in(e[1], rank, "bracket index");
      const int c = index_in(e[2], rank, "bracket index");
      if (a == b) fail("bracket entry with repeated index");
      set_bracket(L, a, b, c, element_from_json(*alg, e[3]));
    }
  }
  if (j.contains("anchor")) {
    if (!j.at("anchor").is_array()) fail("ambient.anchor must be an array");
    for (const auto& e : j.at("anchor")) {
      array_of(e, 3, "anchor entry");
      const int a = index_in(e[0], rank, "anchor frame");
      const int v = index_in(e[1], alg->n_vars, "anchor variable");
      L.anchor[a][v] = element_from_json(*alg, e[2]);
    }
  }
  finalize(L);
  return L;
}

ojson ambient_to_json(const LieAlgebroid& L) {
  const CoeffAlgebra& a = *L.alg;
  ojson br = ojson::array(), an = ojson::array();
  for (int i = 0; i < L.rank; ++i)
    for (int j = i + 1; j < L.rank; ++j)
      for (int k = 0; k < L.rank; ++k)
        if (!is_zero(L.bracket(i, j, k))) br.push_back({i, j, k, element_to_json(a, L.bracket(i, j, k))});
  for (int i = 0; i < L.rank; ++i)
    for (int v = 0; v < a.n_vars; ++v)
      if (!is_zero(L.anchor[i][v])) an.push_back({i, v, element_to_json(a, L.anchor[i][v])});
  return ojson{{"rank", L.rank}, {"names", L.names}, {"bracket", br}, {"anchor", an}};
}

LiePair pair_from(LieAlgebroid L, int sub_rank) {
  if (sub_rank < 0 || sub_rank > L.rank) fail("sub_rank out of range");
  return make_pair(std::move(L), sub_rank);
}

}  // namespace

// ---- scalars ----

Q rational_from_json(const ojson& j) {
  try {
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number_integer()) return Q(j.get<long>());
  } catch (const std::invalid_argument& e) {
    fail(e.what());
  }
  fail("rational must be a \"p/q\" string");
}

VecQ element_from_json(const CoeffAlgebra& a, const ojson& j) {
  if (j.is_string() || j.is_number_integer()) return constant(a, rational_from_json(j));
  if (!j.is_object()) fail("coefficient must be a rational or an object of monomials");
  VecQ v = VecQ::Zero(a.dim());
  for (const auto& [label, val] : j.items()) {
    int idx = -1;
    for (int i = 0; i < a.dim(); ++i)
      if (a.basis[i] == label) idx = i;
    if (idx < 0) fail("unknown monomial \"" + label + "\"");
    v(idx) += rational_from_json(val);
  }
  return v;
}

ojson element_to_json(const CoeffAlgebra& a, const VecQ& v) {
  bool constant_only = true;
  for (int i = 0; i < a.dim(); ++i)
    if (i != a.unit_index && sgn(v(i)) != 0) constant_only = false;
  if (constant_only) return format_rational(v(a.unit_index));
  ojson o = ojson::object();
  for (int i = 0; i < a.dim(); ++i)
    if (sgn(v(i)) != 0) o[a.basis[i]] = format_rational(v(i));
  return o;
}

ojson cmat_to_json(const CoeffAlgebra& a, const CMat& m) {
  ojson out = ojson::array();
  for (int i = 0; i < m.rows(); ++i)
    for (int k = 0; k < m.cols(); ++k) {
      VecQ v = cmat_entry(m, i, k);
      if (!is_zero(v)) out.push_back({i, k, element_to_json(a, v)});
    }
  return out;
}

ojson form_to_json(const Form& f) {
  ojson out = ojson::array();
  for (const auto& [mask, c] : f.terms) {
    ojson e = cmat_to_json(*f.alg, c);
    if (e.empty()) continue;
    out.push_back({{"indices", mask_to_json(mask)}, {"entries", e}});
  }
  return out;
}

ojson failures_to_json(const std::vector<AxiomFailure>& fs) {
  ojson out = ojson::array();
  for (const auto& f : fs) out.push_back({{"axiom", f.axiom}, {"witness", f.witness}});
  return out;
}

ojson dims_to_json(const std::map<int, int>& dims) {
  ojson out = ojson::object();
  for (const auto& [p, d] : dims) out[std::to_string(p)] = d;
  return out;
}

// ---- superconnections ----

SuperConnection superconnection_from_json(const ojson& j, AlgebroidPtr base, const GradedBundle& E) {
  if (!j.is_object()) fail("superconnection must be an object");
  const CoeffAlgebra& a = *base->alg;
  const int n = E.total_rank(), r = base->rank;
  SuperConnection D = make_superconnection(base, E);
  if (j.contains("del")) {
    CMat del = cmat_zero(a.dim(), n, n);
    if (!j.at("del").is_array()) fail("del must be an array");
    for (const auto& e : j.at("del")) {
      array_of(e, 3, "del entry");
      cmat_set_entry(del, index_in(e[0], n, "del row"), index_in(e[1], n, "del column"),
                     element_from_json(a, e[2]));
    }
    set_del(D, del);
  }
  if (j.contains("nabla")) set_connection(D, frame_matrices(j.at("nabla"), a, r, n, n, "nabla"));
  if (j.contains("forms")) {
    const auto& fs = j.at("forms");
    if (!fs.is_object()) fail("forms must be an object keyed by arity");
    for (const auto& [key, entries] : fs.items()) {
      int k = -1;
      try {
        k = std::stoi(key);
      } catch (const std::exception&) {
        fail("forms key must be an arity");
      }
      if (k < 2 || k > r) fail("forms arity out of range: " + key);
      if (!entries.is_array()) fail("forms entries must be an array");
      for (const auto& e : entries) {
        array_of(e, 4, "form entry");
        const unsigned mask = mask_from_json(e[0], r, k, "form entry");
        const int row = index_in(e[1], n, "form row"), col = index_in(e[2], n, "form column");
        add_entry(D.omega[k], mask, row, col, element_from_json(a, e[3]));
      }
      compact(D.omega[k]);
    }
  }
  return D;
}

ojson superconnection_to_json(const SuperConnection& D) {
  const CoeffAlgebra& a = *D.alg();
  ojson out = ojson::object();
  out["del"] = cmat_to_json(a, get_del(D));
  out["nabla"] = frame_matrices_to_json(a, get_connection(D));
  ojson forms = ojson::object();
  for (int k = 2; k < static_cast<int>(D.omega.size()); ++k) {
    ojson entries = ojson::array();
    for (const auto& [mask, c] : D.omega[k].terms)
      for (int i = 0; i < c.rows(); ++i)
        for (int m = 0; m < c.cols(); ++m) {
          VecQ v = cmat_entry(c, i, m);
          if (!is_zero(v)) entries.push_back({mask_to_json(mask), i, m, element_to_json(a, v)});
        }
    if (!entries.empty()) forms[std::to_string(k)] = entries;
  }
  out["forms"] = forms;
  return out;
}

SuperConnection seed_from_text(const std::string& text, const Model& m) {
  ojson j;
  try {
    j = ojson::parse(text);
  } catch (const ojson::parse_error& e) {
    fail(std::string("extension seed: ") + e.what());
  }
  if (j.is_object() && j.contains("extension_seed")) j = j.at("extension_seed");
  else if (j.is_object() && j.contains("superconnection")) j = j.at("superconnection");
  return superconnection_from_json(j, m.pair.L, m.DA.bundle);
}

// ---- models ----

Model parse_model(const ojson& j) {
  if (!j.is_object()) fail("model must be a JSON object");
  auto alg = std::make_shared<const CoeffAlgebra>(algebra_from_json(j.contains("algebra") ? j.at("algebra") : ojson()));
  LieAlgebroid L = ambient_from_json(require(j, "ambient"), alg);
  const int sub = as_int(require(j, "sub_rank"), "sub_rank");
  LiePair pair = pair_from(std::move(L), sub);
  Model m;
  if (j.contains("preset")) {
    const auto& p = j.at("preset");
    if (!p.is_object() || !p.contains("name") || !p.at("name").is_string()) fail("preset must name a builder");
    if (j.contains("superconnection") || j.contains("bundle"))
      fail("a preset model may not also give bundle or superconnection");
    m = apply_preset(p.at("name").get<std::string>(), pair, p);
  } else {
    m.pair = pair;
    const GradedBundle E = bundle_from_json(require(j, "bundle"));
    m.DA = superconnection_from_json(require(j, "superconnection"), pair.A, E);
  }
  if (j.contains("extension_seed")) m.seed = superconnection_from_json(j.at("extension_seed"), pair.L, m.DA.bundle);
  return m;
}

Model parse_model_text(const std::string& text) {
  ojson j;
  try {
    j = ojson::parse(text);
  } catch (const ojson::parse_error& e) {
    fail(e.what());
  }
  return parse_model(j);
}

ojson serialize_model(const Model& m) {
  ojson out = ojson::object();
  out["algebra"] = algebra_to_json(*m.pair.L->alg);
  out["ambient"] = ambient_to_json(*m.pair.L);
  out["sub_rank"] = m.pair.sub_rank;
  out["bundle"] = bundle_to_json(m.DA.bundle);
  out["superconnection"] = superconnection_to_json(m.DA);
  if (m.seed) out["extension_seed"] = superconnection_to_json(*m.seed);
  return out;
}

bool models_equal(const Model& a, const Model& b) {
  const auto& La = *a.pair.L;
  const auto& Lb = *b.pair.L;
  if (La.alg->n_vars != Lb.alg->n_vars || La.alg->order != Lb.alg->order || La.rank != Lb.rank) return false;
  if (La.names != Lb.names || La.c != Lb.c || La.anchor != Lb.anchor || a.pair.sub_rank != b.pair.sub_rank)
    return false;
  if (a.DA.grading() != b.DA.grading() || a.DA.bundle.names() != b.DA.bundle.names()) return false;
  auto same = [](const SuperConnection& x, const SuperConnection& y) {
    if (x.omega.size() != y.omega.size()) return false;
    for (std::size_t k = 0; k < x.omega.size(); ++k)
      if (!(x.omega[k] == y.omega[k])) return false;
    return true;
  };
  if (!same(a.DA, b.DA)) return false;
  if (a.seed.has_value() != b.seed.has_value()) return false;
  return !a.seed || same(*a.seed, *b.seed);
}

// ---- presets ----

Model apply_preset(const std::string& name, const LiePair& pair, const ojson& params) {
  const CoeffAlgebra& alg = *pair.L->alg;
  const int rL = pair.rank_L(), rA = pair.rank_A();
  Model m;
  m.pair = pair;
  m.preset = name;
  if (name == "abelian") {
    const int k = params.contains("rank") ? as_int(params.at("rank"), "preset.rank") : 1;
    if (k < 0 || k > 12) fail("preset.rank out of range");
    m.DA = make_superconnection(pair.A, make_bundle({{0, k}}));
    return m;
  }
  if (name == "double") {
    const int k = params.contains("rank") ? as_int(params.at("rank"), "preset.rank") : 1;
    const int top = params.contains("top") ? as_int(params.at("top"), "preset.top") : 0;
    if (k < 0 || k > 6) fail("preset.rank out of range");
    auto gamma = frame_matrices(params.contains("gamma") ? params.at("gamma") : ojson(), alg, rL, k, k, "gamma");
    DoubleResult d = build_double(pair, gamma, top);
    m.DA = d.DA;
    m.seed = d.ext.DL;
    return m;
  }
  if (name == "normal") {
    auto seed = frame_matrices(params.contains("seed") ? params.at("seed") : ojson(), alg, rL, rA, rA, "seed");
    NormalResult r = build_normal(pair, seed);
    m.DA = r.DA;
    m.seed = r.ext.DL;
    return m;
  }
  if (name == "adjoint") {
    auto seed =
        frame_matrices(params.contains("seed") ? params.at("seed") : ojson(), alg, alg.n_vars, rA, rA, "seed");
    AdjointResult r = build_adjoint(pair, seed);
    if (!r.regular) throw std::domain_error("adjoint preset refused: ker(rho|_A) is not a free summand");
    m.DA = r.DA;
    m.seed = r.ext.DL;
    return m;
  }
  fail("unknown preset \"" + name + "\"");
}

Model preset_model(const std::string& name) {
  if (name == "abelian") return apply_preset(name, abelian_pair(2, 1));
  if (name == "double") {
    // rank-1 K on sl(2) with a non-flat connection, so omega^(2) is nonzero
    ojson p{{"gamma", ojson::array({ojson::array({1, 0, 0, "1"}), ojson::array({2, 0, 0, "1/2"})})}};
    return apply_preset(name, sl2_borel_pair(), p);
  }
  if (name == "normal") return apply_preset(name, sl2_borel_pair());
  if (name == "adjoint") return apply_preset(name, jet_line_pair(2, Q(1)));
  fail("unknown preset \"" + name + "\"");
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr);
  std::string out;
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", md[i]);
    out += buf;
  }
  return out;
}

}  // namespace ruthkit
