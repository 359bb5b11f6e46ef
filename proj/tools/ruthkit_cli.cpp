#include "ruthkit/hpt.hpp"
#include "ruthkit/model_io.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using namespace ruthkit;

namespace {

struct Options {
  std::string path;
  std::string preset;
  std::string seed_path;
  std::string output;
  bool witness = false;
};

struct Loaded {
  Model model;
  std::string input_hash;
  std::string seed_hash;
  std::optional<SuperConnection> flag_seed;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ModelParseError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Loaded load(const Options& o) {
  Loaded l;
  if (o.path.empty() && o.preset.empty()) throw ModelParseError("no model file or preset given");
  if (!o.path.empty()) {
    const std::string text = slurp(o.path);
    l.input_hash = sha256_hex(text);
    l.model = parse_model_text(text);
    if (!o.preset.empty()) l.model = apply_preset(o.preset, l.model.pair);
  } else {
    l.model = preset_model(o.preset);
    l.input_hash = sha256_hex(serialize_model(l.model).dump());
  }
  if (!o.seed_path.empty()) {
    const std::string text = slurp(o.seed_path);
    l.seed_hash = sha256_hex(text);
    l.flag_seed = seed_from_text(text, l.model);
  }
  return l;
}

ojson header(const std::string& command, const Options& o, const Loaded* l) {
  ojson h{{"artifact", kArtifactName}, {"version", kArtifactVersion}, {"command", command}};
  if (l) {
    h["input_sha256"] = l->input_hash;
    if (!l->seed_hash.empty()) h["extension_seed_sha256"] = l->seed_hash;
  }
  if (!o.preset.empty()) h["preset"] = o.preset;
  return h;
}

ojson arity_blocks(const Form& f, int shift) {
  ojson out = ojson::object();
  for (int k = 0; k <= f.rank; ++k) {
    Form part = arity_part(f, k);
    if (!is_zero(part)) out[std::to_string(k + shift)] = form_to_json(part);
  }
  return out;
}

/// Axioms and flatness; returns false when the model is unusable.
bool validate_section(const Loaded& l, ojson& rep) {
  const Model& m = l.model;
  auto pair_f = validate_lie_pair(*m.pair.L, m.pair.sub_rank);
  auto structure = validate_structure(m.DA);
  FlatnessCertificate cert = validate_flat(m.DA);
  ojson flat{{"flat", cert.flat}, {"failing_arities", cert.failing_arities}};
  ojson residuals = ojson::object();
  for (int k : cert.failing_arities) residuals[std::to_string(k)] = form_to_json(cert.residuals[k]);
  flat["residuals"] = residuals;
  rep["algebroid"] = {{"valid", pair_f.empty()}, {"failures", failures_to_json(pair_f)}};
  rep["structure"] = {{"valid", structure.empty()}, {"failures", failures_to_json(structure)}};
  rep["flatness"] = flat;
  bool ok = pair_f.empty() && structure.empty() && cert.flat;
  for (const auto& [label, seed] : {std::pair{"file", m.seed}, std::pair{"flag", l.flag_seed}}) {
    if (!seed) continue;
    ojson s{{"source", label}};
    auto sf = validate_structure(*seed);
    s["structure_failures"] = failures_to_json(sf);
    try {
      extend(m.pair, m.DA, *seed);
      s["restricts_to_DA"] = true;
    } catch (const ExtensionMismatch& e) {
      s["restricts_to_DA"] = false;
      s["mismatch"] = {{"arity", e.arity}, {"indices", mask_indices(e.mask)}};
      ok = false;
    }
    if (!sf.empty()) ok = false;
    rep["extension_seeds"].push_back(s);
  }
  rep["valid"] = ok;
  return ok;
}

/// Extensions in priority order: flag seed, file seed, canonical.
std::vector<std::pair<std::string, Extension>> extensions(const Loaded& l) {
  const Model& m = l.model;
  std::vector<std::pair<std::string, Extension>> out;
  if (l.flag_seed) out.emplace_back("flag", extend(m.pair, m.DA, *l.flag_seed));
  if (m.seed) out.emplace_back(m.preset.empty() ? "file" : "preset", extend(m.pair, m.DA, *m.seed));
  if (out.size() < 2) out.emplace_back("canonical", extend(m.pair, m.DA));
  return out;
}

int cmd_validate(const Loaded& l, ojson& rep) { return validate_section(l, rep) ? 0 : 2; }

int cmd_atiyah(const Loaded& l, const Options& o, ojson& rep) {
  if (!validate_section(l, rep)) return 2;
  const Model& m = l.model;
  auto exts = extensions(l);
  const Extension& ext = exts.front().second;
  SOperator op = build_s(m.pair, m.DA);
  bool ok = op.squares_to_zero;
  rep["s_operator"] = {{"degrees", {op.pmin, op.pmax}},
                       {"squares_to_zero", op.squares_to_zero},
                       {"failing_square", op.failing_square}};
  rep["cohomology"] = dims_to_json(cohomology_dims(op));
  const Form alpha = atiyah_cocycle(ext);
  ExactnessResult ex = solve_exactness(op, alpha);
  ok = ok && ex.closed;
  rep["extension"] = {{"source", exts.front().first}};
  rep["cocycle"] = {{"closed", ex.closed}, {"arity", arity_blocks(alpha, -1)}};
  rep["class"] = {{"vanishes", ex.exact ? "yes" : "no"},
                  {"rank_s0", ex.rank_s},
                  {"rank_augmented", ex.rank_augmented},
                  {"h1", ex.h1}};
  if (o.witness) {
    if (ex.exact) {
      Extension compat = compatible_extension(ext, op, *ex.witness);
      const bool zero = is_zero(atiyah_cocycle(compat));
      ok = ok && zero;
      rep["witness"] = {{"phi", form_to_json(*ex.witness)}, {"compatible_cocycle_zero", zero}};
    } else {
      rep["witness"] = nullptr;
    }
  }
  if (exts.size() >= 2) {
    const Extension& other = exts[1].second;
    const Form diff = alpha - atiyah_cocycle(other);
    ExactnessResult d = solve_exactness(op, diff);
    const bool verified = d.exact && apply_s(op, *d.witness) == diff;
    const bool same = d.exact && ex.exact == solve_exactness(op, atiyah_cocycle(other)).exact;
    ok = ok && verified && same;
    rep["extension_independence"] = {{"sources", {exts[0].first, exts[1].first}},
                                     {"difference_exact", d.exact},
                                     {"phi", d.exact ? form_to_json(*d.witness) : ojson()},
                                     {"phi_verified", verified},
                                     {"verdicts_equal", same}};
  }
  return ok ? 0 : 2;
}

std::optional<ResolutionData> resolution_section(const Loaded& l, ojson& rep, bool full) {
  try {
    ResolutionData r = build_resolution(l.model.DA);
    auto side = validate_resolution(r);
    ojson res{{"K_rank", r.k}, {"del_rank", dims_to_json(r.del_rank)}, {"side_conditions", failures_to_json(side)}};
    if (full) {
      const CoeffAlgebra& a = *r.alg;
      res["sigma"] = cmat_to_json(a, r.sigma);
      res["phi"] = cmat_to_json(a, r.phi);
      res["theta"] = cmat_to_json(a, r.theta);
    }
    rep["resolution"] = res;
    if (!side.empty()) return std::nullopt;
    return r;
  } catch (const ResolutionRefused& e) {
    rep["resolution"] = {{"refused", true}, {"degree", e.degree}, {"reason", e.what()}};
    return std::nullopt;
  }
}

int cmd_resolve(const Loaded& l, ojson& rep) {
  if (!validate_section(l, rep)) return 2;
  auto r = resolution_section(l, rep, true);
  if (!r) return 2;
  EndCohomology ec = end_cohomology(*r);
  rep["end_cohomology"] = {
      {"dims", dims_to_json(ec.dims)}, {"end_K_dim", ec.end_K_dim}, {"projection_iso", ec.projection_iso}};
  auto exts = extensions(l);
  const Extension& ext = exts.front().second;
  SOperator op = build_s(l.model.pair, l.model.DA);
  BRSTComparison c = compare_brst(ext, op, *r);
  const CoeffAlgebra& a = *r->alg;
  ojson conn = ojson::array();
  for (const auto& g : get_connection(c.classical.nablaK_A)) conn.push_back(cmat_to_json(a, g));
  rep["extension"] = {{"source", exts.front().first}};
  rep["quotient_connection"] = {{"matrices", conn}, {"flat", c.classical.flat}};
  rep["classical_atiyah"] = {{"at_K", form_to_json(c.classical.at)}, {"closed", c.classical.closed}};
  rep["comparison"] = {{"dims_hat", dims_to_json(c.dims_hat)},
                       {"dims_classical", dims_to_json(c.dims_classical)},
                       {"dims_equal", c.dims_equal},
                       {"projection", form_to_json(c.projected)},
                       {"projection_matches", c.projection_matches},
                       {"alpha_vanishes", c.alpha_exact ? "yes" : "no"},
                       {"at_K_vanishes", c.at_exact ? "yes" : "no"},
                       {"verdicts_agree", c.verdicts_agree}};
  const bool ok = ec.projection_iso && c.classical.flat && c.classical.closed && c.dims_equal &&
                  c.projection_matches && c.verdicts_agree;
  return ok ? 0 : 2;
}

int cmd_hpt(const Loaded& l, ojson& rep) {
  if (!validate_section(l, rep)) return 2;
  auto r = resolution_section(l, rep, false);
  if (!r) return 2;
  auto exts = extensions(l);
  HptAnalysis h = analyze_hpt(exts.front().second, *r);
  ojson dims = ojson::object();
  for (const auto& [p, d] : h.dims_V) dims[std::to_string(p)] = {d, h.dims_W.count(p) ? h.dims_W.at(p) : 0};
  const CoeffAlgebra& a = *r->alg;
  const bool identity = r->bundle.amplitude() <= 1 && is_zero(r->theta) && r->sigma == cmat_identity(a, r->k) &&
                        r->phi == cmat_identity(a, r->k);
  rep["extension"] = {{"source", exts.front().first}};
  rep["contraction"] = {{"identity", identity},
                        {"base_failures", failures_to_json(h.base_failures)},
                        {"perturbed_failures", failures_to_json(h.perturbed_failures)},
                        {"series_length", h.pc.series_length},
                        {"filtration_length", h.pc.bound},
                        {"delta_matches_quotient", h.delta_matches},
                        {"dims", dims}};
  rep["hom_transfer"] = {{"method", h.hom.method},
                         {"failures", failures_to_json(h.hom.failures)},
                         {"dims_hat", dims_to_json(h.hom.dims_V)},
                         {"dims_classical", dims_to_json(h.hom.dims_W)},
                         {"dims_preserved", h.hom.dims_preserved},
                         {"differential_matches", h.hom.differential_matches},
                         {"class_matches", h.hom.class_matches},
                         {"transferred", form_to_json(h.hom.transferred)}};
  bool ok = h.base_failures.empty() && h.perturbed_failures.empty() && h.delta_matches &&
            h.pc.series_length <= std::max(r->bundle.amplitude(), 1) && h.hom.failures.empty() &&
            h.hom.dims_preserved && h.hom.differential_matches && h.hom.class_matches;
  for (const auto& [p, d] : h.dims_V)
    if (d != (h.dims_W.count(p) ? h.dims_W.at(p) : 0)) ok = false;
  return ok ? 0 : 2;
}

void emit(const ojson& rep, const Options& o) {
  const std::string text = rep.dump(2) + "\n";
  if (o.output.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(o.output, std::ios::binary);
  out << text;
}

int run(const std::string& command, const Options& o) {
  std::optional<Loaded> l;
  ojson rep;
  try {
    l = load(o);
  } catch (const ModelParseError& e) {
    rep = {{"header", header(command, o, nullptr)}, {"error", e.what()}};
    emit(rep, o);
    std::cerr << "ruthkit: " << e.what() << "\n";
    return 1;
  } catch (const std::domain_error& e) {
    rep = {{"header", header(command, o, nullptr)}, {"refused", e.what()}};
    emit(rep, o);
    std::cerr << "ruthkit: " << e.what() << "\n";
    return 2;
  }
  rep["header"] = header(command, o, &*l);
  int code = 0;
  try {
    if (command == "validate") code = cmd_validate(*l, rep);
    if (command == "atiyah") code = cmd_atiyah(*l, o, rep);
    if (command == "resolve") code = cmd_resolve(*l, rep);
    if (command == "hpt") code = cmd_hpt(*l, rep);
  } catch (const std::exception& e) {
    rep["error"] = e.what();
    code = 2;
  }
  emit(rep, o);
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Atiyah classes of representations up to homotopy"};
  app.require_subcommand(1);
  Options o;
  std::string chosen;
  const std::pair<const char*, const char*> commands[] = {
      {"validate", "check the algebroid, the superconnection and D_A^2 = 0"},
      {"atiyah", "cocycle, s-complex cohomology and the vanishing verdict"},
      {"resolve", "resolve E -> K and compare with the classical complex"},
      {"hpt", "perturbed contraction onto Omega(A, K) and hom-transfer"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("model", o.path, "model JSON file");
    sub->add_option("--preset", o.preset, "built-in model: abelian, double, normal, adjoint");
    sub->add_option("--output", o.output, "write the report here instead of stdout");
    sub->add_option("--extension-seed", o.seed_path, "L-superconnection seed JSON");
    sub->add_flag("--witness", o.witness, "include the witness and the compatible extension check");
    sub->callback([&chosen, name] { chosen = name; });
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  return run(chosen, o);
}
