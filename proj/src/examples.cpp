#include "ruthkit/examples.hpp"

#include "ruthkit/resolution.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace ruthkit {

namespace {

AlgebraPtr point() {
  static const AlgebraPtr p = std::make_shared<const CoeffAlgebra>(point_algebra());
  return p;
}

LieAlgebroid lie_algebra(int rank, const std::vector<std::tuple<int, int, int, int>>& brackets,
                         const std::vector<std::string>& names) {
  LieAlgebroid L = make_algebroid(point(), rank);
  for (const auto& [i, j, k, c] : brackets) set_bracket(L, i, j, k, constant(*L.alg, Q(c)));
  L.names = names;
  return L;
}

// Connection on a free module given by frame matrices: nabla_{e_j} f_m = sum_k table[j](k, m) f_k.
// X is a section of the base (coefficients in frame e_j), Y a section of the module.
Section connection_apply(const LieAlgebroid& base, const std::vector<CMat>& table, const Section& X, const Section& Y) {
  const CoeffAlgebra& a = *base.alg;
  const int n = static_cast<int>(Y.size());
  Section out(n, VecQ::Zero(a.dim()));
  for (int m = 0; m < n; ++m) {
    out[m] += anchor_apply(base, X, Y[m]);
    if (is_zero(Y[m])) continue;
    for (int j = 0; j < base.rank; ++j) {
      if (is_zero(X[j])) continue;
      VecQ f = multiply(a, X[j], Y[m]);
      for (int k = 0; k < n; ++k) {
        VecQ t = cmat_entry(table[j], k, m);
        if (!is_zero(t)) out[k] += multiply(a, f, t);
      }
    }
  }
  return out;
}

Section sub(const Section& x, const Section& y) {
  Section r = x;
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= y[i];
  return r;
}

Section add(const Section& x, const Section& y) {
  Section r = x;
  for (std::size_t i = 0; i < r.size(); ++i) r[i] += y[i];
  return r;
}

// n x n matrix with blk placed at (r0, c0)
CMat place(const CoeffAlgebra& a, int n, int r0, int c0, const CMat& blk) {
  CMat m = cmat_zero(a.dim(), n, n);
  for (int k = 0; k < a.dim(); ++k) m.c[k].block(r0, c0, blk.rows(), blk.cols()) = blk.c[k];
  return m;
}

}  // namespace

// ---- presets ----

LiePair abelian_pair(int rank_L, int rank_A, AlgebraPtr alg) {
  return make_pair(make_algebroid(alg ? alg : point(), rank_L), rank_A);
}

LiePair sl2_borel_pair() {
  return make_pair(lie_algebra(3, {{0, 1, 1, 2}, {0, 2, 2, -2}, {1, 2, 0, 1}}, {"h", "e", "f"}), 2);
}

LiePair sl2_cartan_pair() {
  return make_pair(lie_algebra(3, {{0, 1, 1, 2}, {0, 2, 2, -2}, {1, 2, 0, 1}}, {"h", "e", "f"}), 1);
}

LiePair heisenberg_pair() { return make_pair(lie_algebra(3, {{1, 2, 0, 1}}, {"z", "x", "y"}), 2); }

LiePair aff1_pair() { return make_pair(lie_algebra(2, {{1, 0, 0, 1}}, {"b", "a"}), 1); }

LiePair so3_pair() {
  return make_pair(lie_algebra(3, {{0, 1, 2, 1}, {1, 2, 0, 1}, {2, 0, 1, 1}}, {"x", "y", "z"}), 1);
}

LiePair jet_line_pair(int order, const Q& lambda) {
  auto alg = std::make_shared<const CoeffAlgebra>(jet_algebra(1, order));
  LieAlgebroid L = make_algebroid(alg, 2);
  set_bracket(L, 0, 1, 0, constant(*alg, lambda));
  L.anchor[1][0] = basis_element(*alg, monomial_index(*alg, {1}));
  L.names = {"u", "v"};
  return make_pair(std::move(L), 1);
}

LiePair jet_plane_pair(int order, int rank_A) {
  auto alg = std::make_shared<const CoeffAlgebra>(jet_algebra(2, order));
  LieAlgebroid L = make_algebroid(alg, 3);
  const VecQ x = basis_element(*alg, monomial_index(*alg, {1, 0}));
  const VecQ y = basis_element(*alg, monomial_index(*alg, {0, 1}));
  L.anchor[0][0] = x;  // x d/dx
  L.anchor[1][1] = y;  // y d/dy
  L.anchor[2][1] = x;  // x d/dy
  set_bracket(L, 0, 2, 2, constant(*alg, Q(1)));
  set_bracket(L, 1, 2, 2, constant(*alg, Q(-1)));
  L.names = {"x_dx", "y_dy", "x_dy"};
  return make_pair(std::move(L), rank_A);
}

// ---- double ----

SuperConnection build_double(AlgebroidPtr base, const std::vector<CMat>& gamma, int top) {
  const CoeffAlgebra& a = *base->alg;
  const int k = gamma.empty() ? 0 : gamma[0].rows();
  GradedBundle E = make_bundle({{top - 1, k}, {top, k}});
  SuperConnection D = make_superconnection(base, E);
  if (k == 0) return D;
  SuperConnection DK = make_superconnection(base, make_bundle({{top, k}}));
  set_connection(DK, gamma);
  Form R = arity_part(curvature(DK), 2);

  const int n = 2 * k;
  set_del(D, place(a, n, k, 0, cmat_identity(a, k)));
  std::vector<CMat> g2;
  for (const auto& g : gamma) {
    CMat m = place(a, n, 0, 0, g);
    cmat_add(m, place(a, n, k, k, g));
    g2.push_back(m);
  }
  set_connection(D, g2);
  if (D.omega.size() < 3) return D;
  Form w2 = zero_like(D.omega[2]);
  for (const auto& [mask, c] : R.terms) add_term(w2, mask, place(a, n, 0, k, c), Q(-1));
  D.omega[2] = w2;
  return D;
}

DoubleResult build_double(const LiePair& pair, const std::vector<CMat>& gamma_L, int top) {
  std::vector<CMat> gA(gamma_L.begin(), gamma_L.begin() + pair.rank_A());
  SuperConnection DA = build_double(pair.A, gA, top);
  SuperConnection DL = build_double(pair.L, gamma_L, top);
  Extension ext = extend(pair, DA, DL);
  return {DA, ext};
}

// ---- normal complex ----

NormalResult build_normal(const LiePair& pair, const std::vector<CMat>& seed_in) {
  const LieAlgebroid& L = *pair.L;
  const CoeffAlgebra& alg = *L.alg;
  const int rL = pair.rank_L(), rA = pair.rank_A(), N = alg.dim();
  NormalResult out;
  BasicConnectionData& B = out.basic;
  B.seed = seed_in;
  if (B.seed.empty()) B.seed.assign(rL, cmat_zero(N, rA, rA));

  // L-connection on L: the seed on A, and nabla_{e_j} e_l = complement part of [e_j, e_l]
  std::vector<CMat> nabL(rL, cmat_zero(N, rL, rL));
  for (int j = 0; j < rL; ++j) {
    for (int m = 0; m < rA; ++m)
      for (int k = 0; k < rA; ++k) cmat_set_entry(nabL[j], k, m, cmat_entry(B.seed[j], k, m));
    for (int m = rA; m < rL; ++m)
      for (int k = rA; k < rL; ++k) cmat_set_entry(nabL[j], k, m, L.bracket(j, m, k));
  }
  // nabla^bas_{e_j}(e_m) = nabla_{e_m} e_j + [e_j, e_m]
  std::vector<CMat> basL(rL, cmat_zero(N, rL, rL));
  for (int j = 0; j < rL; ++j)
    for (int m = 0; m < rL; ++m)
      for (int k = 0; k < rL; ++k) cmat_set_entry(basL[j], k, m, cmat_entry(nabL[m], k, j) + L.bracket(j, m, k));
  for (int a = 0; a < rA; ++a) {
    B.basic_L.push_back(basL[a]);
    B.basic_A.push_back(cmat_block(basL[a], 0, 0, rA, rA));
  }

  // basic curvature, computed on sections
  auto e = [&](int i) { return frame_section(L, i); };
  auto nab = [&](const Section& X, const Section& Y) { return connection_apply(L, nabL, X, Y); };
  auto bas = [&](const Section& a, const Section& l) { return add(nab(l, a), bracket_sections(L, a, l)); };
  out.curvature_in_A = true;
  for (int a = 0; a < rA; ++a)
    for (int b = a + 1; b < rA; ++b) {
      CMat R = cmat_zero(N, rA, rL);
      for (int m = 0; m < rL; ++m) {
        Section l = e(m);
        Section v = nab(l, bracket_sections(L, e(a), e(b)));
        v = sub(v, bracket_sections(L, nab(l, e(a)), e(b)));
        v = sub(v, bracket_sections(L, e(a), nab(l, e(b))));
        v = add(v, nab(bas(e(a), l), e(b)));
        v = sub(v, nab(bas(e(b), l), e(a)));
        for (int k = rA; k < rL; ++k)
          if (!is_zero(v[k])) out.curvature_in_A = false;
        for (int k = 0; k < rA; ++k) cmat_set_entry(R, k, m, v[k]);
      }
      if (!is_zero(R)) B.basic_curvature.emplace((1u << a) | (1u << b), R);
    }

  GradedBundle E = make_bundle({{-1, rA}, {0, rL}});
  for (auto& c : E.components)
    c.names.assign(L.names.begin(), L.names.begin() + c.rank);
  const int n = rA + rL;
  CMat del = place(alg, n, rA, 0, cmat_constant(alg, MatQ::Identity(rL, rA)));

  auto assemble = [&](AlgebroidPtr base, int frames) {
    SuperConnection D = make_superconnection(base, E);
    set_del(D, del);
    std::vector<CMat> g;
    for (int j = 0; j < frames; ++j) {
      CMat m = place(alg, n, rA, rA, basL[j]);
      cmat_add(m, place(alg, n, 0, 0, cmat_block(basL[j], 0, 0, rA, rA)));
      g.push_back(m);
    }
    set_connection(D, g);
    if (base->rank >= 2)
      for (const auto& [mask, R] : B.basic_curvature) add_term(D.omega[2], mask, place(alg, n, 0, rA, R));
    return D;
  };
  out.DA = assemble(pair.A, rA);
  SuperConnection DL = assemble(pair.L, rL);
  out.ext = extend(pair, out.DA, DL);
  return out;
}

// ---- adjoint complex ----

AdjointResult build_adjoint(const LiePair& pair, const std::vector<CMat>& seed_in) {
  const LieAlgebroid& L = *pair.L;
  const LieAlgebroid& A = *pair.A;
  const CoeffAlgebra& alg = *L.alg;
  const int rA = pair.rank_A(), n = alg.n_vars, N = alg.dim();
  std::vector<CMat> S = seed_in;
  if (S.empty()) S.assign(n, cmat_zero(N, rA, rA));
  AdjointResult out;

  // anchor of A as a map A -> TM
  CMat rhoA = cmat_zero(N, n, rA);
  for (int a = 0; a < rA; ++a)
    for (int v = 0; v < n; ++v) cmat_set_entry(rhoA, v, a, A.anchor[a][v]);

  // isotropy: ker(rho|_A) when it is a free summand
  CMat K = cmat_zero(N, rA, 0), Kinv = cmat_zero(N, 0, rA);
  {
    UnitPivotForm f = unit_pivot_form(alg, rhoA);
    out.regular = f.remainder_zero;
    if (f.remainder_zero) {
      const int g = rA - f.rank;
      K = cmat_block(f.Q, 0, f.rank, rA, g);
      auto qi = cmat_inverse(alg, f.Q);
      Kinv = cmat_block(*qi, f.rank, 0, g, rA);
    }
  }
  const int g = K.cols();
  out.isotropy_rank = g;

  auto dpart = [&](int v, const VecQ& f) -> VecQ { return alg.partials[v] * f; };
  // nabla^bas on A: (a, b) -> nabla_{rho(b)} a + [a, b]
  std::vector<CMat> basA(rA, cmat_zero(N, rA, rA)), basT(rA, cmat_zero(N, n, n));
  for (int a = 0; a < rA; ++a) {
    for (int b = 0; b < rA; ++b)
      for (int k = 0; k < rA; ++k) {
        VecQ v = A.bracket(a, b, k);
        for (int w = 0; w < n; ++w) v += multiply(alg, A.anchor[b][w], cmat_entry(S[w], k, a));
        cmat_set_entry(basA[a], k, b, v);
      }
    // nabla^bas on TM: (a, d_w) -> rho(nabla_{d_w} a) + [rho(a), d_w]
    for (int w = 0; w < n; ++w)
      for (int v = 0; v < n; ++v) {
        VecQ x = -dpart(w, A.anchor[a][v]);
        for (int k = 0; k < rA; ++k) x += multiply(alg, cmat_entry(S[w], k, a), A.anchor[k][v]);
        cmat_set_entry(basT[a], v, w, x);
      }
  }

  // sections of A and TM
  auto nabX = [&](const Section& X, const Section& s) {  // TM-connection on A
    Section r(rA, VecQ::Zero(N));
    for (int k = 0; k < rA; ++k)
      for (int v = 0; v < n; ++v)
        if (!is_zero(X[v])) r[k] += multiply(alg, X[v], dpart(v, s[k]));
    for (int m = 0; m < rA; ++m) {
      if (is_zero(s[m])) continue;
      for (int v = 0; v < n; ++v) {
        if (is_zero(X[v])) continue;
        VecQ f = multiply(alg, X[v], s[m]);
        for (int k = 0; k < rA; ++k) r[k] += multiply(alg, f, cmat_entry(S[v], k, m));
      }
    }
    return r;
  };
  auto basTM = [&](int a, const Section& X) {  // nabla^bas_{e_a} X
    Section r(n, VecQ::Zero(N));
    for (int w = 0; w < n; ++w) {
      if (is_zero(X[w])) continue;
      r[w] += A.rho[a] * X[w];
      for (int v = 0; v < n; ++v) r[v] += multiply(alg, X[w], cmat_entry(basT[a], v, w));
    }
    return r;
  };
  auto eA = [&](int i) { return frame_section(A, i); };
  std::map<unsigned, CMat> Rbas;
  for (int a = 0; a < rA; ++a)
    for (int b = a + 1; b < rA; ++b) {
      CMat R = cmat_zero(N, rA, n);
      for (int w = 0; w < n; ++w) {
        Section X(n, VecQ::Zero(N));
        X[w] = unit_element(alg);
        Section v = nabX(X, bracket_sections(A, eA(a), eA(b)));
        v = sub(v, bracket_sections(A, nabX(X, eA(a)), eA(b)));
        v = sub(v, bracket_sections(A, eA(a), nabX(X, eA(b))));
        v = add(v, nabX(basTM(a, X), eA(b)));
        v = sub(v, nabX(basTM(b, X), eA(a)));
        for (int k = 0; k < rA; ++k) cmat_set_entry(R, k, w, v[k]);
      }
      if (!is_zero(R)) Rbas.emplace((1u << a) | (1u << b), R);
    }

  GradedBundle E = make_bundle({{-2, g}, {-1, rA}, {0, n}});
  const int tot = g + rA + n;
  SuperConnection D = make_superconnection(pair.A, E);
  CMat del = place(alg, tot, g + rA, g, rhoA);
  if (g > 0) cmat_add(del, place(alg, tot, g, 0, K));
  set_del(D, del);
  std::vector<CMat> gam;
  for (int a = 0; a < rA; ++a) {
    CMat m = place(alg, tot, g, g, basA[a]);
    cmat_add(m, place(alg, tot, g + rA, g + rA, basT[a]));
    if (g > 0) {
      CMat rk = rho_apply(A, a, K);
      cmat_add(rk, cmat_mul(alg, basA[a], K));
      cmat_add(m, place(alg, tot, 0, 0, cmat_mul(alg, Kinv, rk)));
    }
    gam.push_back(m);
  }
  set_connection(D, gam);
  if (rA >= 2) {
    Form w2 = zero_like(D.omega[2]);
    for (const auto& [mask, R] : Rbas) add_term(w2, mask, place(alg, tot, g, g + rA, R));
    D.omega[2] = w2;
  }
  out.DA = D;
  out.ext = extend(pair, D);
  return out;
}

// ---- random ----

Q random_rational(Rng& rng, int bound) {
  std::uniform_int_distribution<int> num(1, bound), den(1, 2), sign(0, 1);
  Q q(num(rng), den(rng));
  q.canonicalize();
  return sign(rng) ? q : Q(-q);
}

VecQ random_element(const CoeffAlgebra& a, Rng& rng, double density, int bound) {
  std::bernoulli_distribution pick(density);
  VecQ v = VecQ::Zero(a.dim());
  for (int i = 0; i < a.dim(); ++i)
    if (pick(rng)) v(i) = random_rational(rng, bound);
  return v;
}

CMat random_cmat(const CoeffAlgebra& a, int rows, int cols, Rng& rng, double density) {
  CMat m = cmat_zero(a.dim(), rows, cols);
  std::bernoulli_distribution pick(density);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j)
      if (pick(rng)) cmat_set_entry(m, i, j, random_element(a, rng, 0.6));
  return m;
}

LiePair change_basis(const LiePair& p, const MatQ& P) {
  const LieAlgebroid& L = *p.L;
  const int r = L.rank;
  for (int i = 0; i < p.rank_A(); ++i)
    for (int j = p.rank_A(); j < r; ++j)
      if (sgn(P(j, i)) != 0) throw std::invalid_argument("change_basis: does not preserve A");
  const CoeffAlgebra& a = *L.alg;
  SpMat Ps = sparse_from_dense(P);
  MatQ Pinv(r, r);
  for (int j = 0; j < r; ++j) {
    SolveResult s = solve(Ps, SpVec{{j, Q(1)}});
    if (!s.solvable || s.rank < r) throw std::invalid_argument("change_basis: singular");
    Pinv.col(j) = to_dense(s.x, r);
  }
  // e'_i = sum_j P(j, i) e_j; constant P so the bracket transforms tensorially
  LieAlgebroid M = make_algebroid(L.alg, r);
  M.names = L.names;
  for (int i = 0; i < r; ++i) {
    for (int v = 0; v < a.n_vars; ++v) {
      VecQ x = VecQ::Zero(a.dim());
      for (int j = 0; j < r; ++j) x += P(j, i) * L.anchor[j][v];
      M.anchor[i][v] = x;
    }
    M.names[i] = L.names[i] + "'";
  }
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) {
      std::vector<VecQ> old(r, VecQ::Zero(a.dim()));
      for (int x = 0; x < r; ++x)
        for (int y = 0; y < r; ++y) {
          Q f = P(x, i) * P(y, j);
          if (sgn(f) == 0) continue;
          for (int m = 0; m < r; ++m) old[m] += f * L.bracket(x, y, m);
        }
      for (int k = 0; k < r; ++k) {
        VecQ v = VecQ::Zero(a.dim());
        for (int m = 0; m < r; ++m) v += Pinv(k, m) * old[m];
        M.bracket(i, j, k) = v;
      }
    }
  return make_pair(std::move(M), p.rank_A());
}

LiePair random_pair(Rng& rng, bool allow_jets) {
  std::uniform_int_distribution<int> pick(0, allow_jets ? 8 : 6);
  LiePair p;
  switch (pick(rng)) {
    case 0: p = abelian_pair(2, 1); break;
    case 1: p = sl2_borel_pair(); break;
    case 2: p = heisenberg_pair(); break;
    case 3: p = aff1_pair(); break;
    case 4: p = sl2_cartan_pair(); break;
    case 5: p = so3_pair(); break;
    case 6: p = abelian_pair(3, 2); break;
    case 7: p = jet_line_pair(2, random_rational(rng)); break;
    default: p = jet_plane_pair(1, 2); break;
  }
  if (std::bernoulli_distribution(0.5)(rng)) {
    // unit lower times unit upper, with no entry mapping A into the complement
    const int r = p.rank_L(), rA = p.rank_A();
    MatQ Lo = MatQ::Identity(r, r), U = MatQ::Identity(r, r);
    std::bernoulli_distribution fill(0.4);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < r; ++j) {
        if (i > j && !(j < rA && i >= rA) && fill(rng)) Lo(i, j) = random_rational(rng, 2);
        if (i < j && fill(rng)) U(i, j) = random_rational(rng, 2);
      }
    p = change_basis(p, Lo * U);
  }
  return p;
}

SuperConnection random_flat_module(const LiePair& p, Rng& rng) {
  const CoeffAlgebra& a = *p.L->alg;
  std::vector<int> options = {0};
  if (p.rank_Q() > 0) options.push_back(1);
  if (a.is_point() && p.rank_A() > 0) options.push_back(2);
  const int choice = options[std::uniform_int_distribution<int>(0, static_cast<int>(options.size()) - 1)(rng)];
  if (choice == 1) {
    SuperConnection D = make_superconnection(p.A, make_bundle({{0, p.rank_Q()}}));
    set_connection(D, bott_connection(p));
    return D;
  }
  if (choice == 2) {
    const int rA = p.rank_A();
    SuperConnection D = make_superconnection(p.A, make_bundle({{0, rA}}));
    std::vector<CMat> g;
    for (int x = 0; x < rA; ++x) {
      CMat m = cmat_zero(a.dim(), rA, rA);
      for (int y = 0; y < rA; ++y)
        for (int k = 0; k < rA; ++k) cmat_set_entry(m, k, y, p.A->bracket(x, y, k));
      g.push_back(m);
    }
    set_connection(D, g);
    return D;
  }
  const int k = std::uniform_int_distribution<int>(1, 2)(rng);
  return make_superconnection(p.A, make_bundle({{0, k}}));
}

Form random_gauge(AlgebraPtr alg, int rank, const GradedBundle& E, Rng& rng, double density) {
  const auto g = E.grading();
  const int n = static_cast<int>(g.size());
  const CoeffAlgebra& a = *alg;
  Form phi = make_form(alg, rank, g, g);
  CMat p0 = cmat_zero(a.dim(), n, n);
  std::bernoulli_distribution pick(density);
  for (int i = 0; i < n; ++i) {
    cmat_set_entry(p0, i, i, constant(a, random_rational(rng, 2)));
    for (int j = 0; j < i; ++j)
      if (g[i] == g[j] && pick(rng)) cmat_set_entry(p0, i, j, random_element(a, rng, 0.6));
  }
  add_term(phi, 0u, p0);
  for (unsigned mask = 1; mask < (1u << rank); ++mask) {
    const int k = arity(mask);
    CMat m = cmat_zero(a.dim(), n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (g[i] == g[j] - k && pick(rng)) cmat_set_entry(m, i, j, random_element(a, rng, 0.6));
    add_term(phi, mask, m);
  }
  compact(phi);
  return phi;
}

SuperConnection direct_sum(const SuperConnection& x, const SuperConnection& y) {
  if (x.base != y.base) throw std::invalid_argument("direct_sum: different bases");
  const auto gx = x.grading(), gy = y.grading();
  std::vector<int> g = gx;
  g.insert(g.end(), gy.begin(), gy.end());
  const int n = static_cast<int>(g.size());
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int i, int j) { return g[i] < g[j]; });
  std::vector<int> pos(n);
  for (int i = 0; i < n; ++i) pos[order[i]] = i;

  GradedBundle E;
  for (int i = 0; i < n; ++i) {
    const int d = g[order[i]];
    if (E.components.empty() || E.components.back().degree != d) E.components.push_back({d, 0, {}});
    auto& c = E.components.back();
    c.names.push_back("e" + std::to_string(d) + "_" + std::to_string(c.rank));
    c.rank += 1;
  }
  SuperConnection D = make_superconnection(x.base, E);
  const int N = x.alg()->dim();
  const int nx = static_cast<int>(gx.size());
  for (int k = 0; k <= D.rank(); ++k) {
    Form f = zero_like(D.omega[k]);
    auto put = [&](const Form& src, int off) {
      for (const auto& [mask, c] : src.terms) {
        CMat m = cmat_zero(N, n, n);
        for (int i = 0; i < c.rows(); ++i)
          for (int j = 0; j < c.cols(); ++j) cmat_set_entry(m, pos[off + i], pos[off + j], cmat_entry(c, i, j));
        add_term(f, mask, m);
      }
    };
    put(x.omega[k], 0);
    put(y.omega[k], nx);
    compact(f);
    D.omega[k] = f;
  }
  return D;
}

namespace {

std::vector<CMat> random_connection(const LieAlgebroid& base, int k, Rng& rng) {
  std::vector<CMat> g;
  for (int a = 0; a < base.rank; ++a) g.push_back(random_cmat(*base.alg, k, k, rng, 0.5));
  return g;
}

}  // namespace

SuperConnection random_resolution(const LiePair& p, Rng& rng, bool three_term) {
  SuperConnection D = random_flat_module(p, rng);
  const int v = std::uniform_int_distribution<int>(1, 2)(rng);
  D = direct_sum(D, build_double(p.A, random_connection(*p.A, v, rng), 0));
  if (three_term) D = direct_sum(D, build_double(p.A, random_connection(*p.A, 1, rng), -1));
  return gauge(D, random_gauge(p.A->alg, p.rank_A(), D.bundle, rng));
}

SuperConnection random_ruth(const LiePair& p, Rng& rng) {
  SuperConnection D = random_flat_module(p, rng);
  const int top = std::uniform_int_distribution<int>(0, 1)(rng);
  D = direct_sum(D, build_double(p.A, random_connection(*p.A, 1, rng), top));
  return gauge(D, random_gauge(p.A->alg, p.rank_A(), D.bundle, rng));
}

SuperConnection random_extension_seed(const LiePair& p, const SuperConnection& DA, Rng& rng, double density) {
  Extension base = extend(p, DA);
  SuperConnection S = base.DL;
  const auto g = S.grading();
  const int n = static_cast<int>(g.size());
  const CoeffAlgebra& a = *p.L->alg;
  std::bernoulli_distribution pick(density);
  for (unsigned mask = 1; mask < (1u << p.rank_L()); ++mask) {
    if ((mask & p.complement_mask()) == 0) continue;
    const int k = arity(mask);
    CMat m = cmat_zero(a.dim(), n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (k + g[i] - g[j] == 1 && pick(rng)) cmat_set_entry(m, i, j, random_element(a, rng, 0.6));
    add_term(S.omega[k], mask, m);
    compact(S.omega[k]);
  }
  return S;
}

SuperConnection random_superconnection(AlgebroidPtr base, const GradedBundle& E, Rng& rng, double density) {
  SuperConnection D = make_superconnection(base, E);
  const auto g = D.grading();
  const int n = static_cast<int>(g.size());
  const CoeffAlgebra& a = *base->alg;
  std::bernoulli_distribution pick(density);
  for (unsigned mask = 0; mask < (1u << base->rank); ++mask) {
    const int k = arity(mask);
    CMat m = cmat_zero(a.dim(), n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (k + g[i] - g[j] == 1 && pick(rng)) cmat_set_entry(m, i, j, random_element(a, rng, 0.6));
    add_term(D.omega[k], mask, m);
    compact(D.omega[k]);
  }
  return D;
}

}  // namespace ruthkit
