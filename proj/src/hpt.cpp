#include "ruthkit/hpt.hpp"

#include "ruthkit/parallel.hpp"

#include <algorithm>
#include <set>

namespace ruthkit {

namespace {

SpMat mul(const SpMat& a, const SpMat& b) {
  SpMat r = a * b;
  prune(r);
  return r;
}

SpMat add(const SpMat& a, const SpMat& b, const Q& s = Q(1)) {
  SpMat r = a + s * b;
  prune(r);
  return r;
}

std::vector<int> first_nonzero(const SpMat& m) {
  for (int j = 0; j < m.outerSize(); ++j)
    for (SpMat::InnerIterator it(m, j); it; ++it)
      if (it.value() != 0) return {static_cast<int>(it.row()), static_cast<int>(it.col())};
  return {};
}

/// sum_k x^k until the next power vanishes; throws past `cap` terms.
std::pair<SpMat, int> nilpotent_series(const SpMat& x, int cap) {
  SpMat sum = identity_sparse(static_cast<int>(x.rows()));
  SpMat term = sum;
  int terms = 1;
  while (true) {
    term = mul(term, x);
    if (is_zero(term)) break;
    if (terms >= cap) throw std::logic_error("perturbation series did not terminate within the filtration length");
    sum = add(sum, term);
    ++terms;
  }
  return {sum, terms};
}

SpMat select_columns(const SpMat& m, const std::vector<int>& cols) {
  std::vector<SpVec> cs;
  for (int j : cols) cs.push_back(column(m, j));
  return from_columns(static_cast<int>(m.rows()), cs);
}

std::vector<int> space_degrees(const FormSpace& s, int shift) {
  std::vector<int> deg;
  for (const auto& c : s.coords) deg.push_back(arity(c.mask) + s.rows[c.row] - s.cols[c.col] + shift);
  return deg;
}

Form frame_image(const FormSpace& dom, const FormSpace& cod, const SpMat& m, int row) {
  const int j = dom.find(0u, row, 0, dom.alg->unit_index);
  return unflatten(cod, j < 0 ? SpVec{} : column(m, j));
}

/// Form whose column `col` is the single-column form v, for each frame element.
void set_column(Form& out, const Form& v, int col) {
  for (const auto& [mask, c] : v.terms) {
    CMat m = cmat_zero(out.N(), static_cast<int>(out.rows.size()), static_cast<int>(out.cols.size()));
    for (int k = 0; k < out.N(); ++k) m.c[k].col(col) = c.c[k].col(0);
    add_term(out, mask, m);
  }
}

Form hom_form(const FormSpace& dom, const FormSpace& cod, const SpMat& m, std::vector<int> rows,
              std::vector<int> cols) {
  Form out = make_form(dom.alg, dom.rank, std::move(rows), std::move(cols));
  for (int i = 0; i < static_cast<int>(out.cols.size()); ++i) set_column(out, frame_image(dom, cod, m, i), i);
  compact(out);
  return out;
}

void check_linear(const FormSpace& dom, const FormSpace& cod, const SpMat& m, const Form& f, const char* name) {
  for (int j = 0; j < dom.dim(); ++j)
    if (flatten(cod, wedge(f, basis_form(dom, j))) != column(m, j))
      throw std::logic_error(std::string("perturbed ") + name + " is not Omega(A)-linear");
}

Q parity(int d) { return (d & 1) ? Q(-1) : Q(1); }

}  // namespace

Contraction identity_contraction(const SpMat& d, const std::vector<int>& deg) {
  const int n = static_cast<int>(deg.size());
  return Contraction{d, d, identity_sparse(n), identity_sparse(n), SpMat(n, n), deg, deg};
}

std::vector<AxiomFailure> validate_contraction(const Contraction& c) {
  std::vector<AxiomFailure> out;
  const int nV = static_cast<int>(c.degV.size()), nW = static_cast<int>(c.degW.size());
  auto check = [&](const std::string& name, const SpMat& m) {
    if (!is_zero(m)) out.push_back({name, first_nonzero(m)});
  };
  check("phi_sigma", add(mul(c.phi, c.sigma), identity_sparse(nW), Q(-1)));
  SpMat hom = add(mul(c.dV, c.theta), mul(c.theta, c.dV));
  hom = add(hom, mul(c.sigma, c.phi));
  check("homotopy", add(hom, identity_sparse(nV), Q(-1)));
  check("theta_squared", mul(c.theta, c.theta));
  check("theta_sigma", mul(c.theta, c.sigma));
  check("phi_theta", mul(c.phi, c.theta));
  check("dV_squared", mul(c.dV, c.dV));
  check("dW_squared", mul(c.dW, c.dW));
  check("sigma_chain", add(mul(c.dV, c.sigma), mul(c.sigma, c.dW), Q(-1)));
  check("phi_chain", add(mul(c.dW, c.phi), mul(c.phi, c.dV), Q(-1)));
  return out;
}

PerturbedContraction perturb(const Contraction& c, const Perturbation& p) {
  SpMat dt = mul(p.d, c.theta);
  for (int j = 0; j < dt.outerSize(); ++j)
    for (SpMat::InnerIterator it(dt, j); it; ++it)
      if (p.level[it.row()] < p.level[it.col()] + 1)
        throw PerturbationRefused("d theta does not raise the filtration", static_cast<int>(it.row()),
                                  static_cast<int>(it.col()));
  SpMat total = add(c.dV, p.d);
  auto sq = first_nonzero(mul(total, total));
  if (!sq.empty()) throw PerturbationRefused("perturbed differential does not square to zero", sq[0], sq[1]);

  int bound = 0;
  if (!p.level.empty()) {
    auto [lo, hi] = std::minmax_element(p.level.begin(), p.level.end());
    bound = *hi - *lo + 1;
  }
  auto [S, len] = nilpotent_series(-dt, std::max(bound, 1));
  auto [S2, len2] = nilpotent_series(-mul(c.theta, p.d), std::max(bound, 1) + 1);
  (void)len2;
  PerturbedContraction out;
  out.bound = bound;
  out.series_length = len;
  out.c.degV = c.degV;
  out.c.degW = c.degW;
  out.c.dV = total;
  out.c.sigma = mul(S2, c.sigma);
  out.c.phi = mul(c.phi, S);
  out.c.theta = mul(c.theta, S);
  out.c.dW = add(c.dW, mul(mul(c.phi, p.d), out.c.sigma));
  return out;
}

std::map<int, int> graded_cohomology(const SpMat& d, const std::vector<int>& deg) {
  std::map<int, std::vector<int>> by_deg;
  for (int i = 0; i < static_cast<int>(deg.size()); ++i) by_deg[deg[i]].push_back(i);
  std::vector<int> ds;
  for (const auto& [p, idx] : by_deg) ds.push_back(p);
  std::vector<int> rk(ds.size());
  parallel_for(static_cast<int>(ds.size()), [&](int i) { rk[i] = rank(select_columns(d, by_deg.at(ds[i]))); });
  std::map<int, int> ranks, out;
  for (std::size_t i = 0; i < ds.size(); ++i) ranks[ds[i]] = rk[i];
  for (const auto& [p, idx] : by_deg)
    out[p] = static_cast<int>(idx.size()) - ranks[p] - (ranks.count(p - 1) ? ranks[p - 1] : 0);
  return out;
}

ResolutionContraction resolution_contraction(const SuperConnection& DA, const ResolutionData& r) {
  ResolutionContraction rc{quotient_superconnection(DA, r, true), section_space(DA), {}, {}, {}};
  rc.W = section_space(rc.DK);
  const auto gE = DA.grading(), gK = rc.DK.grading();
  const int rank = DA.rank();
  const Form del = DA.omega[0];
  const Form sig = constant_form(DA.alg(), rank, gE, gK, r.sigma);
  const Form ph = constant_form(DA.alg(), rank, gK, gE, r.phi);
  const Form th = constant_form(DA.alg(), rank, gE, gE, r.theta);
  Contraction& c = rc.c;
  c.degV = space_degrees(rc.V, 0);
  c.degW = space_degrees(rc.W, 0);
  c.dV = operator_matrix(rc.V, rc.V, [&](const Form& u) { return wedge(del, u); });
  c.dW = SpMat(rc.W.dim(), rc.W.dim());
  c.sigma = operator_matrix(rc.W, rc.V, [&](const Form& u) { return wedge(sig, u); });
  c.phi = operator_matrix(rc.V, rc.W, [&](const Form& u) { return wedge(ph, u); });
  c.theta = operator_matrix(rc.V, rc.V, [&](const Form& u) { return wedge(th, u); });
  rc.p.d = add(operator_matrix(DA), c.dV, Q(-1));
  for (const auto& co : rc.V.coords) rc.p.level.push_back(-rc.V.rows[co.row]);
  return rc;
}

TransferForms transfer_forms(const ResolutionContraction& rc, const PerturbedContraction& pc) {
  const auto gE = rc.V.rows, gK = rc.W.rows;
  TransferForms tf{hom_form(rc.V, rc.V, pc.c.theta, gE, gE), hom_form(rc.W, rc.V, pc.c.sigma, gE, gK),
                   hom_form(rc.V, rc.W, pc.c.phi, gK, gE)};
  check_linear(rc.V, rc.V, pc.c.theta, tf.vartheta, "theta");
  check_linear(rc.W, rc.V, pc.c.sigma, tf.varsigma, "sigma");
  check_linear(rc.V, rc.W, pc.c.phi, tf.phi_d, "phi");
  return tf;
}

bool delta_matches_quotient(const ResolutionContraction& rc, const PerturbedContraction& pc) {
  return equal(pc.c.dW, operator_matrix(rc.DK));
}

HomTransfer hom_transfer(const Extension& ext, const ResolutionData& r, const TransferForms& tf, bool perturbed_only) {
  const LiePair& pair = ext.pair;
  const int rL = pair.rank_L();
  const auto gE = r.grading;
  const std::vector<int> gK(r.k, 0);
  auto hat = [&pair](unsigned m, int, int) { return is_hat_mask(pair, m); };
  HomTransfer h;
  h.V = make_space(r.alg, rL, gE, gE, hat);
  h.W = make_space(r.alg, rL, gK, gK, hat);
  Contraction& c = h.c;
  c.degV = space_degrees(h.V, -1);
  c.degW = space_degrees(h.W, -1);
  const std::vector<CMat> gammaK = quotient_connection(ext.DA, r, true);
  const SpMat s = operator_matrix(h.V, h.V, [&](const Form& w) { return s_direct(pair, ext.DA, w); });
  const SpMat dK = operator_matrix(h.W, h.W, [&](const Form& w) { return classical_d(pair, gammaK, w); });

  const Form vt = embed(tf.vartheta, rL), vs = embed(tf.varsigma, rL), pd = embed(tf.phi_d, rL);
  const Form vspd = wedge(vs, pd);
  c.dV = s;
  c.dW = dK;
  c.sigma = operator_matrix(h.W, h.V, [&](const Form& g) { return wedge(wedge(vs, g), pd); });
  c.phi = operator_matrix(h.V, h.W, [&](const Form& f) { return wedge(wedge(pd, f), vs); });
  h.failures.push_back({"skipped", {}});
  for (const Q& eps : {Q(1), Q(-1)}) {
    if (perturbed_only) break;
    c.theta = operator_matrix(h.V, h.V, [&](const Form& f) {
      const int deg = *total_degree(f);
      return wedge(vt, f) + (eps * parity(deg)) * wedge(wedge(vspd, f), vt);
    });
    h.failures = validate_contraction(c);
    if (h.failures.empty()) break;
  }
  h.method = "direct";

  if (!h.failures.empty()) {
    // End contraction on (hat forms, s^(0)), perturbed by the rest of s along the A-arity filtration
    const unsigned am = pair.a_mask();
    std::vector<int> lvl;
    for (const auto& co : h.V.coords) lvl.push_back(arity(co.mask & am));
    std::vector<Eigen::Triplet<Q>> t0, t1;
    for (int j = 0; j < s.outerSize(); ++j)
      for (SpMat::InnerIterator it(s, j); it; ++it)
        (lvl[it.row()] == lvl[it.col()] ? t0 : t1).emplace_back(it.row(), it.col(), it.value());
    SpMat s0(s.rows(), s.cols()), s1(s.rows(), s.cols());
    s0.setFromTriplets(t0.begin(), t0.end());
    s1.setFromTriplets(t1.begin(), t1.end());
    const Form sg = constant_form(r.alg, rL, gE, gK, r.sigma);
    const Form ph = constant_form(r.alg, rL, gK, gE, r.phi);
    const Form th = constant_form(r.alg, rL, gE, gE, r.theta);
    const Form sp = wedge(sg, ph);
    Contraction base;
    base.degV = c.degV;
    base.degW = c.degW;
    base.dV = s0;
    base.dW = SpMat(h.W.dim(), h.W.dim());
    base.sigma = operator_matrix(h.W, h.V, [&](const Form& g) { return wedge(wedge(sg, g), ph); });
    base.phi = operator_matrix(h.V, h.W, [&](const Form& f) { return wedge(wedge(ph, f), sg); });
    std::vector<AxiomFailure> bf;
    for (const Q& sign : {Q(1), Q(-1)}) {
      for (const Q& eps : {Q(1), Q(-1)}) {
        base.theta = operator_matrix(h.V, h.V, [&](const Form& f) {
          const int deg = *total_degree(f);
          return sign * (wedge(th, f) + (eps * parity(deg)) * wedge(wedge(sp, f), th));
        });
        bf = validate_contraction(base);
        if (bf.empty()) break;
      }
      if (bf.empty()) break;
    }
    if (bf.empty()) {
      PerturbedContraction pc = perturb(base, Perturbation{s1, lvl});
      c = pc.c;
      h.failures = validate_contraction(c);
    } else {
      h.failures = bf;
    }
    h.method = "perturbed";
  }

  h.differential_matches = equal(c.dW, dK);
  h.dims_V = graded_cohomology(c.dV, c.degV);
  h.dims_W = graded_cohomology(c.dW, c.degW);
  h.dims_preserved = true;
  std::set<int> ps;
  for (const auto& [p, d] : h.dims_V) ps.insert(p);
  for (const auto& [p, d] : h.dims_W) ps.insert(p);
  for (int p : ps) {
    const int a = h.dims_V.count(p) ? h.dims_V.at(p) : 0;
    const int b = h.dims_W.count(p) ? h.dims_W.at(p) : 0;
    if (a != b) h.dims_preserved = false;
  }

  const Form alpha = atiyah_cocycle(ext);
  h.transferred = unflatten(h.W, ruthkit::apply(c.phi, flatten(h.V, alpha)));
  const SuperConnection KL = quotient_superconnection(ext.DL, r, false);
  const Form at = hat_part(pair, curvature(KL));
  const Form diff = h.transferred - at;
  h.class_matches = is_zero(diff) || solve(c.dW, flatten(h.W, diff)).solvable;
  return h;
}

HptAnalysis analyze_hpt(const Extension& ext, const ResolutionData& r) {
  HptAnalysis a{resolution_contraction(ext.DA, r), {}, {}, {}, false, {}, {}, {}};
  a.base_failures = validate_contraction(a.rc.c);
  a.pc = perturb(a.rc.c, a.rc.p);
  a.perturbed_failures = validate_contraction(a.pc.c);
  a.delta_matches = delta_matches_quotient(a.rc, a.pc);
  a.dims_V = graded_cohomology(a.pc.c.dV, a.pc.c.degV);
  a.dims_W = graded_cohomology(a.pc.c.dW, a.pc.c.degW);
  a.hom = hom_transfer(ext, r, transfer_forms(a.rc, a.pc));
  return a;
}

}  // namespace ruthkit
