#include "ruthkit/resolution.hpp"

#include "ruthkit/parallel.hpp"

#include <algorithm>
#include <random>

namespace ruthkit {

namespace {

using Grid = std::vector<std::vector<VecQ>>;

Grid to_grid(const CMat& m, int N) {
  Grid g(m.rows(), std::vector<VecQ>(m.cols(), VecQ::Zero(N)));
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) g[i][j] = cmat_entry(m, i, j);
  return g;
}

CMat from_grid(const Grid& g, int N, int rows, int cols) {
  CMat m = cmat_zero(N, rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) cmat_set_entry(m, i, j, g[i][j]);
  return m;
}

CMat hcat(int N, int rows, const std::vector<CMat>& parts) {
  int cols = 0;
  for (const auto& p : parts) cols += p.cols();
  CMat out = cmat_zero(N, rows, cols);
  int c0 = 0;
  for (const auto& p : parts) {
    if (p.cols() == 0) continue;
    for (int k = 0; k < N; ++k) out.c[k].block(0, c0, rows, p.cols()) = p.c[k];
    c0 += p.cols();
  }
  return out;
}

void place(CMat& dst, const CMat& blk, int r0, int c0) {
  if (blk.rows() == 0 || blk.cols() == 0) return;
  for (std::size_t k = 0; k < dst.c.size(); ++k) dst.c[k].block(r0, c0, blk.rows(), blk.cols()) = blk.c[k];
}

CMat random_constant(const CoeffAlgebra& a, int rows, int cols, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> d(-2, 2);
  MatQ m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = d(rng);
  return cmat_constant(a, m);
}

CMat sub(const CMat& x, const CMat& y) {
  CMat r = x;
  cmat_add(r, y, Q(-1));
  return r;
}

}  // namespace

UnitPivotForm unit_pivot_form(const CoeffAlgebra& a, const CMat& m) {
  const int N = a.dim(), rows = m.rows(), cols = m.cols();
  Grid M = to_grid(m, N);
  Grid P = to_grid(cmat_identity(a, rows), N);
  Grid Qg = to_grid(cmat_identity(a, cols), N);
  int t = 0;
  for (; t < std::min(rows, cols); ++t) {
    int pi = -1, pj = -1;
    std::optional<VecQ> inv;
    for (int j = t; j < cols && pi < 0; ++j)
      for (int i = t; i < rows; ++i) {
        if (is_zero(M[i][j])) continue;
        inv = inverse(a, M[i][j]);
        if (inv) {
          pi = i;
          pj = j;
          break;
        }
      }
    if (pi < 0) break;
    std::swap(M[t], M[pi]);
    std::swap(P[t], P[pi]);
    for (int i = 0; i < rows; ++i) std::swap(M[i][t], M[i][pj]);
    for (int i = 0; i < cols; ++i) std::swap(Qg[i][t], Qg[i][pj]);
    for (int j = 0; j < cols; ++j) M[t][j] = multiply(a, *inv, M[t][j]);
    for (int j = 0; j < rows; ++j) P[t][j] = multiply(a, *inv, P[t][j]);
    for (int i = 0; i < rows; ++i) {
      if (i == t || is_zero(M[i][t])) continue;
      const VecQ f = M[i][t];
      for (int j = 0; j < cols; ++j) M[i][j] -= multiply(a, f, M[t][j]);
      for (int j = 0; j < rows; ++j) P[i][j] -= multiply(a, f, P[t][j]);
    }
    for (int j = 0; j < cols; ++j) {
      if (j == t || is_zero(M[t][j])) continue;
      const VecQ f = M[t][j];
      for (int i = 0; i < rows; ++i) M[i][j] -= multiply(a, M[i][t], f);
      for (int i = 0; i < cols; ++i) Qg[i][j] -= multiply(a, Qg[i][t], f);
    }
  }
  UnitPivotForm out;
  out.rank = t;
  out.P = from_grid(P, N, rows, rows);
  out.Q = from_grid(Qg, N, cols, cols);
  for (int i = t; i < rows && out.remainder_zero; ++i)
    for (int j = t; j < cols; ++j)
      if (!is_zero(M[i][j])) {
        out.remainder_zero = false;
        break;
      }
  return out;
}

ResolutionData build_resolution(AlgebraPtr alg, const GradedBundle& E, const CMat& del,
                                std::optional<std::uint64_t> random_seed) {
  const CoeffAlgebra& a = *alg;
  const int N = a.dim(), n = E.total_rank();
  if (E.max_degree() > 0) throw ResolutionRefused(E.max_degree(), "bundle has positive degrees");
  std::mt19937_64 rng(random_seed.value_or(0));
  const int lo = E.min_degree();
  auto rk = [&](int i) { return E.rank_at(i); };
  auto del_block = [&](int i) { return cmat_block(del, E.offset(i + 1), E.offset(i), rk(i + 1), rk(i)); };

  ResolutionData r;
  r.alg = alg;
  r.bundle = E;
  r.grading = E.grading();
  r.del = del;
  std::map<int, CMat> C, B, H, Tinv;
  for (int i = lo; i <= 0; ++i) {
    if (i == 0 || rk(i) == 0) {
      C[i] = cmat_zero(N, rk(i), 0);
      r.del_rank[i] = 0;
      continue;
    }
    UnitPivotForm f = unit_pivot_form(a, del_block(i));
    if (!f.remainder_zero) throw ResolutionRefused(i, "differential does not have constant rank");
    r.del_rank[i] = f.rank;
    C[i] = cmat_block(f.Q, 0, 0, rk(i), f.rank);
    if (random_seed && f.rank < rk(i)) {
      CMat kern = cmat_block(f.Q, 0, f.rank, rk(i), rk(i) - f.rank);
      cmat_add(C[i], cmat_mul(a, kern, random_constant(a, rk(i) - f.rank, f.rank, rng)));
    }
  }
  for (int i = lo; i <= 0; ++i) {
    B[i] = i > lo ? cmat_mul(a, del_block(i - 1), C[i - 1]) : cmat_zero(N, rk(i), 0);
    CMat T0 = hcat(N, rk(i), {B[i], C[i]});
    UnitPivotForm f = unit_pivot_form(a, T0);
    if (!f.remainder_zero || f.rank != T0.cols())
      throw ResolutionRefused(i, "image is not a direct summand of the kernel");
    auto pinv = cmat_inverse(a, f.P);
    if (!pinv) throw std::logic_error("unit pivot transform is not invertible");
    H[i] = cmat_block(*pinv, 0, f.rank, rk(i), rk(i) - f.rank);
    if (i < 0 && H[i].cols() > 0) throw ResolutionRefused(i, "cohomology in negative degree");
    if (random_seed && B[i].cols() > 0 && H[i].cols() > 0)
      cmat_add(H[i], cmat_mul(a, B[i], random_constant(a, B[i].cols(), H[i].cols(), rng)));
    auto ti = cmat_inverse(a, hcat(N, rk(i), {B[i], C[i], H[i]}));
    if (!ti) throw ResolutionRefused(i, "splitting is not invertible");
    Tinv[i] = *ti;
  }

  r.k = H[0].cols();
  r.theta = cmat_zero(N, n, n);
  for (int i = lo + 1; i <= 0; ++i) {
    if (rk(i) == 0 || rk(i - 1) == 0) continue;
    CMat lift = hcat(N, rk(i - 1), {C[i - 1], cmat_zero(N, rk(i - 1), rk(i) - C[i - 1].cols())});
    place(r.theta, cmat_mul(a, lift, Tinv[i]), E.offset(i - 1), E.offset(i));
  }
  r.sigma = cmat_zero(N, n, r.k);
  place(r.sigma, H[0], E.offset(0), 0);
  r.phi = cmat_zero(N, r.k, n);
  place(r.phi, cmat_block(Tinv[0], rk(0) - r.k, 0, r.k, rk(0)), 0, E.offset(0));
  return r;
}

ResolutionData build_resolution(const SuperConnection& DA, std::optional<std::uint64_t> random_seed) {
  return build_resolution(DA.alg(), DA.bundle, get_del(DA), random_seed);
}

std::vector<AxiomFailure> validate_resolution(const ResolutionData& r) {
  const CoeffAlgebra& a = *r.alg;
  const int n = r.bundle.total_rank();
  std::vector<AxiomFailure> out;
  auto check = [&](const std::string& name, const CMat& m) {
    if (!is_zero(m)) out.push_back({name, {}});
  };
  check("del_squared", cmat_mul(a, r.del, r.del));
  CMat hom = cmat_mul(a, r.del, r.theta);
  cmat_add(hom, cmat_mul(a, r.theta, r.del));
  cmat_add(hom, cmat_mul(a, r.sigma, r.phi));
  check("homotopy", sub(hom, cmat_identity(a, n)));
  check("phi_sigma", sub(cmat_mul(a, r.phi, r.sigma), cmat_identity(a, r.k)));
  check("theta_squared", cmat_mul(a, r.theta, r.theta));
  check("theta_sigma", cmat_mul(a, r.theta, r.sigma));
  check("phi_theta", cmat_mul(a, r.phi, r.theta));
  check("del_sigma", cmat_mul(a, r.del, r.sigma));
  check("phi_del", cmat_mul(a, r.phi, r.del));
  return out;
}

CMat project_end(const ResolutionData& r, const CMat& f) {
  return cmat_mul(*r.alg, cmat_mul(*r.alg, r.phi, f), r.sigma);
}

EndCohomology end_cohomology(const ResolutionData& r) {
  const CoeffAlgebra& a = *r.alg;
  const int N = a.dim();
  const auto& g = r.grading;
  const int M = r.bundle.amplitude();
  const int jmin = -std::max(M - 1, 0), jmax = std::max(M - 1, 0);
  std::map<int, FormSpace> spaces;
  for (int j = jmin - 1; j <= jmax + 1; ++j)
    spaces.emplace(j, make_space(r.alg, 0, g, g, [&](unsigned, int i, int k) { return g[i] - g[k] == j; }));
  auto bracket = [&](int j) {
    return [&, j](const Form& f) {
      Form out = zero_like(f);
      auto it = f.terms.find(0u);
      if (it == f.terms.end()) return out;
      CMat v = cmat_mul(a, r.del, it->second);
      cmat_add(v, cmat_mul(a, it->second, r.del), (j & 1) ? Q(1) : Q(-1));
      add_term(out, 0u, v);
      compact(out);
      return out;
    };
  };
  std::map<int, SpMat> d;
  for (int j = jmin - 1; j <= jmax; ++j) d.emplace(j, operator_matrix(spaces.at(j), spaces.at(j + 1), bracket(j)));
  std::map<int, int> rk;
  for (const auto& [j, m] : d) rk[j] = rank(m);
  EndCohomology out;
  for (int j = jmin; j <= jmax; ++j) out.dims[j] = spaces.at(j).dim() - rk[j] - rk[j - 1];
  out.end_K_dim = r.k * r.k * N;

  auto pi_flat = [&](const SpVec& v) {
    Form f = unflatten(spaces.at(0), v);
    auto it = f.terms.find(0u);
    SpVec w;
    if (it == f.terms.end()) return w;
    CMat p = project_end(r, it->second);
    VecQ dense_v = VecQ::Zero(out.end_K_dim);
    for (int i = 0; i < r.k; ++i)
      for (int k = 0; k < r.k; ++k)
        for (int m = 0; m < N; ++m) dense_v((i * r.k + k) * N + m) = p.c[m](i, k);
    return to_sparse(dense_v);
  };
  bool kills_boundaries = true;
  const SpMat& dm1 = d.at(-1);
  for (int c = 0; c < dm1.cols() && kills_boundaries; ++c)
    if (!pi_flat(column(dm1, c)).empty()) kills_boundaries = false;
  std::vector<SpVec> images;
  for (const auto& z : nullspace(d.at(0))) images.push_back(pi_flat(z));
  const int img_rank = static_cast<int>(row_reduce(images, out.end_K_dim).size());
  const int h0 = out.dims.count(0) ? out.dims.at(0) : 0;
  out.projection_iso = kills_boundaries && img_rank == out.end_K_dim && h0 == out.end_K_dim;
  return out;
}

std::vector<CMat> quotient_connection(const SuperConnection& D, const ResolutionData& r, bool check) {
  const CoeffAlgebra& a = *r.alg;
  const LieAlgebroid& base = *D.base;
  std::vector<CMat> gamma = get_connection(D);
  std::vector<CMat> out;
  for (int i = 0; i < D.rank(); ++i) {
    CMat v = rho_apply(base, i, r.sigma);
    cmat_add(v, cmat_mul(a, gamma[i], r.sigma));
    out.push_back(cmat_mul(a, r.phi, v));
    if (check) {
      CMat w = rho_apply(base, i, r.del);
      cmat_add(w, cmat_mul(a, gamma[i], r.del));
      if (!is_zero(cmat_mul(a, r.phi, w)))
        throw std::invalid_argument("induced connection on K is not well defined along e" + std::to_string(i));
    }
  }
  return out;
}

SuperConnection quotient_superconnection(const SuperConnection& D, const ResolutionData& r, bool check) {
  SuperConnection K = make_superconnection(D.base, make_bundle({{0, r.k}}));
  set_connection(K, quotient_connection(D, r, check));
  return K;
}

Form classical_d(const LiePair& pair, const std::vector<CMat>& gammaK, const Form& w) {
  const LieAlgebroid& L = *pair.L;
  const CoeffAlgebra& a = *L.alg;
  const int rA = pair.rank_A(), q = pair.rank_Q();
  auto eval = [&](std::vector<int> idx, int l) -> std::optional<CMat> {
    int sign = 1;
    for (std::size_t i = 0; i < idx.size(); ++i)
      for (std::size_t j = i + 1; j < idx.size(); ++j) {
        if (idx[i] == idx[j]) return std::nullopt;
        if (idx[i] > idx[j]) sign = -sign;
      }
    auto it = w.terms.find(indices_mask(idx) | (1u << (rA + l)));
    if (it == w.terms.end()) return std::nullopt;
    CMat m = it->second;
    if (sign < 0)
      for (auto& x : m.c) x = -x;
    return m;
  };
  Form out = make_form(w.alg, w.rank, w.rows, w.cols);
  const int k = static_cast<int>(w.rows.size());
  for (unsigned J = 1; J < (1u << rA); ++J) {
    const std::vector<int> as = mask_indices(J);
    const int n = static_cast<int>(as.size());
    for (int l = 0; l < q; ++l) {
      CMat val = cmat_zero(a.dim(), k, k);
      for (int i = 0; i < n; ++i) {
        const Q si = (i & 1) ? Q(-1) : Q(1);
        std::vector<int> rest = as;
        rest.erase(rest.begin() + i);
        if (auto v = eval(rest, l)) {
          CMat t = rho_apply(L, as[i], *v);
          cmat_add(t, cmat_mul(a, gammaK[as[i]], *v));
          cmat_add(t, cmat_mul(a, *v, gammaK[as[i]]), Q(-1));
          cmat_add(val, t, si);
        }
        for (int m = 0; m < q; ++m) {
          const VecQ& coef = L.bracket(as[i], rA + l, rA + m);
          if (is_zero(coef)) continue;
          if (auto v = eval(rest, m)) cmat_add(val, cmat_scale(a, *v, coef), -si);
        }
        for (int j = i + 1; j < n; ++j) {
          const Q sij = ((i + j) & 1) ? Q(-1) : Q(1);
          std::vector<int> rest2;
          for (int t = 0; t < n; ++t)
            if (t != i && t != j) rest2.push_back(as[t]);
          for (int c = 0; c < rA; ++c) {
            const VecQ& coef = L.bracket(as[i], as[j], c);
            if (is_zero(coef)) continue;
            std::vector<int> idx{c};
            idx.insert(idx.end(), rest2.begin(), rest2.end());
            if (auto v = eval(idx, l)) cmat_add(val, cmat_scale(a, *v, coef), sij);
          }
        }
      }
      if (!is_zero(val)) add_term(out, J | (1u << (rA + l)), val);
    }
  }
  compact(out);
  return out;
}

ClassicalComplex build_classical(const LiePair& pair, const std::vector<CMat>& gammaK) {
  ClassicalComplex c;
  c.pair = pair;
  const int k = gammaK.empty() ? 0 : gammaK[0].rows();
  c.grading.assign(k, 0);
  for (int p = 0; p <= pair.rank_A() + 1; ++p) c.spaces.emplace(p, hat_space(pair, c.grading, p));
  for (int p = 0; p <= pair.rank_A(); ++p)
    c.d.emplace(p, operator_matrix(c.spaces.at(p), c.spaces.at(p + 1),
                                   [&](const Form& w) { return classical_d(pair, gammaK, w); }));
  return c;
}

std::map<int, int> cohomology_dims(const ClassicalComplex& c) {
  std::map<int, int> rk, dims;
  for (const auto& [p, m] : c.d) rk[p] = rank(m);
  for (int p = 0; p <= c.pair.rank_A(); ++p)
    dims[p] = c.spaces.at(p).dim() - rk[p] - (rk.count(p - 1) ? rk[p - 1] : 0);
  return dims;
}

std::optional<Form> solve_classical(const ClassicalComplex& c, const Form& w, int p) {
  if (!c.d.count(p - 1)) return is_zero(w) ? std::optional<Form>(zero_like(w)) : std::nullopt;
  SolveResult s = solve(c.d.at(p - 1), flatten(c.spaces.at(p), w));
  if (!s.solvable) return std::nullopt;
  return unflatten(c.spaces.at(p - 1), s.x);
}

ClassicalAtiyah classical_atiyah(const LiePair& pair, const SuperConnection& KA, const SuperConnection& KL) {
  ClassicalAtiyah c{KA, KL, hat_part(pair, curvature(KL))};
  c.flat = validate_flat(KA).flat;
  c.closed = is_zero(classical_d(pair, get_connection(KA), c.at));
  return c;
}

BRSTComparison compare_brst(const Extension& ext, const SOperator& op, const ResolutionData& r) {
  const LiePair& pair = ext.pair;
  const CoeffAlgebra& a = *r.alg;
  BRSTComparison out;
  SuperConnection KA = quotient_superconnection(ext.DA, r, true);
  SuperConnection KL = quotient_superconnection(ext.DL, r, false);
  out.classical = classical_atiyah(pair, KA, KL);
  ClassicalComplex cc = build_classical(pair, get_connection(KA));
  out.dims_classical = cohomology_dims(cc);
  out.dims_hat = cohomology_dims(op);
  out.dims_equal = true;
  for (const auto& [p, dim] : out.dims_hat) {
    const int other = out.dims_classical.count(p) ? out.dims_classical.at(p) : 0;
    if (dim != other) out.dims_equal = false;
  }
  for (const auto& [p, dim] : out.dims_classical)
    if (!out.dims_hat.count(p) && dim != 0) out.dims_equal = false;

  const Form alpha = atiyah_cocycle(ext);
  const Form alpha0 = arity_part(alpha, 1);
  // beta = h(alpha^(0)) with h(f) = theta f - sigma phi f theta; the overall sign is fixed by s(beta)^(0) = alpha^(0)
  const CMat sp = cmat_mul(a, r.sigma, r.phi);
  Form h = zero_like(alpha);
  for (const auto& [mask, f] : alpha0.terms) {
    CMat v = cmat_mul(a, r.theta, f);
    cmat_add(v, cmat_mul(a, cmat_mul(a, sp, f), r.theta), Q(-1));
    add_term(h, mask, v);
  }
  compact(h);
  bool found = false;
  for (const Q& sign : {Q(1), Q(-1)}) {
    Form beta = sign * h;
    if (arity_part(apply_s(op, beta), 1) == alpha0) {
      out.beta = beta;
      found = true;
      break;
    }
  }
  if (found) {
    Form rest = alpha - apply_s(op, out.beta);
    out.projected = make_form(alpha.alg, alpha.rank, cc.grading, cc.grading);
    if (is_zero(arity_part(rest, 1)))
      for (const auto& [mask, m] : arity_part(rest, 2).terms) add_term(out.projected, mask, project_end(r, m));
    compact(out.projected);
    out.projection_matches = is_zero(arity_part(rest, 1)) && out.projected == out.classical.at;
  } else {
    out.beta = zero_like(alpha);
    out.projected = make_form(alpha.alg, alpha.rank, cc.grading, cc.grading);
  }
  out.alpha_exact = solve_exactness(op, alpha).exact;
  out.at_exact = solve_classical(cc, out.classical.at, 1).has_value();
  out.verdicts_agree = out.alpha_exact == out.at_exact;
  return out;
}

}  // namespace ruthkit
