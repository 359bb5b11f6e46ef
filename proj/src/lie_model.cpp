#include "ruthkit/lie_model.hpp"

#include <stdexcept>

namespace ruthkit {

LieAlgebroid make_algebroid(AlgebraPtr alg, int rank) {
  LieAlgebroid L;
  L.alg = std::move(alg);
  L.rank = rank;
  const int N = L.N();
  L.c.assign(static_cast<std::size_t>(rank) * rank * rank, VecQ::Zero(N));
  L.anchor.assign(rank, std::vector<VecQ>(L.alg->n_vars, VecQ::Zero(N)));
  for (int i = 0; i < rank; ++i) L.names.push_back("e" + std::to_string(i + 1));
  finalize(L);
  return L;
}

void set_bracket(LieAlgebroid& L, int i, int j, int k, const VecQ& v) {
  L.bracket(i, j, k) = v;
  L.bracket(j, i, k) = -v;
}

void finalize(LieAlgebroid& L) {
  const CoeffAlgebra& a = *L.alg;
  const int N = a.dim();
  L.rho.assign(L.rank, MatQ::Zero(N, N));
  for (int i = 0; i < L.rank; ++i)
    for (int v = 0; v < a.n_vars && v < static_cast<int>(L.anchor[i].size()); ++v)
      if (!is_zero(L.anchor[i][v])) L.rho[i] += mult_matrix(a, L.anchor[i][v]) * a.partials[v];

  // d xi^c = - sum_{a<b} c_ab^c xi^a xi^b, extended by the graded Leibniz rule
  std::vector<Form> dx1(L.rank);
  for (int c = 0; c < L.rank; ++c) {
    Form f = make_form(L.alg, L.rank, {0}, {0});
    for (int x = 0; x < L.rank; ++x)
      for (int y = x + 1; y < L.rank; ++y) {
        const VecQ& k = L.bracket(x, y, c);
        if (!is_zero(k)) add_entry(f, (1u << x) | (1u << y), 0, 0, -k);
      }
    dx1[c] = f;
  }
  const unsigned full = 1u << L.rank;
  L.dxi.assign(full, make_form(L.alg, L.rank, {0}, {0}));
  for (unsigned I = 1; I < full; ++I) {
    const int first = __builtin_ctz(I);
    const unsigned rest = I & (I - 1);
    // d(xi^first ^ xi^rest) = d xi^first ^ xi^rest - xi^first ^ d xi^rest
    Form xr = make_form(L.alg, L.rank, {0}, {0});
    add_entry(xr, rest, 0, 0, unit_element(a));
    Form xf = coordinate_one_form(L.alg, L.rank, first, unit_element(a));
    L.dxi[I] = wedge(dx1[first], xr) - wedge(xf, L.dxi[rest]);
  }
}

LieAlgebroid restrict_algebroid(const LieAlgebroid& L, int r) {
  LieAlgebroid A = make_algebroid(L.alg, r);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j)
      for (int k = 0; k < r; ++k) A.bracket(i, j, k) = L.bracket(i, j, k);
  for (int i = 0; i < r; ++i) A.anchor[i] = L.anchor[i];
  A.names.assign(L.names.begin(), L.names.begin() + r);
  finalize(A);
  return A;
}

// ---- sections ----

Section frame_section(const LieAlgebroid& L, int i) {
  Section s = zero_section(L);
  s[i] = unit_element(*L.alg);
  return s;
}

Section zero_section(const LieAlgebroid& L) { return Section(L.rank, VecQ::Zero(L.N())); }

VecQ anchor_apply(const LieAlgebroid& L, const Section& X, const VecQ& f) {
  VecQ r = VecQ::Zero(L.N());
  for (int i = 0; i < L.rank; ++i) {
    if (is_zero(X[i])) continue;
    r += multiply(*L.alg, X[i], L.rho[i] * f);
  }
  return r;
}

Section bracket_sections(const LieAlgebroid& L, const Section& X, const Section& Y) {
  const CoeffAlgebra& a = *L.alg;
  Section r = zero_section(L);
  for (int i = 0; i < L.rank; ++i) {
    if (is_zero(X[i])) continue;
    for (int j = 0; j < L.rank; ++j) {
      if (is_zero(Y[j])) continue;
      VecQ fg = multiply(a, X[i], Y[j]);
      for (int k = 0; k < L.rank; ++k)
        if (!is_zero(L.bracket(i, j, k))) r[k] += multiply(a, fg, L.bracket(i, j, k));
    }
  }
  for (int j = 0; j < L.rank; ++j) r[j] += anchor_apply(L, X, Y[j]) - anchor_apply(L, Y, X[j]);
  return r;
}

bool is_zero(const Section& s) {
  for (const auto& v : s)
    if (!is_zero(v)) return false;
  return true;
}

// ---- validation ----

std::vector<AxiomFailure> validate_algebroid(const LieAlgebroid& L) {
  std::vector<AxiomFailure> out;
  const int r = L.rank;
  const CoeffAlgebra& a = *L.alg;
  for (int i = 0; i < r; ++i)
    for (int j = i; j < r; ++j)
      for (int k = 0; k < r; ++k)
        if (L.bracket(i, j, k) != -L.bracket(j, i, k)) out.push_back({"antisymmetry", {i, j, k}});
  // each rho(e_i) must be a derivation of the coefficient algebra
  const int N = a.dim();
  for (int i = 0; i < r; ++i) {
    bool ok = true;
    for (int x = 0; x < N && ok; ++x)
      for (int y = 0; y < N && ok; ++y) {
        VecQ bx = basis_element(a, x), by = basis_element(a, y);
        VecQ lhs = L.rho[i] * multiply(a, bx, by);
        VecQ rhs = multiply(a, L.rho[i] * bx, by) + multiply(a, bx, L.rho[i] * by);
        if (lhs != rhs) ok = false;
      }
    if (!ok) out.push_back({"anchor_derivation", {i}});
  }
  for (int i = 0; i < r; ++i)
    for (int j = i + 1; j < r; ++j) {
      MatQ lhs = MatQ::Zero(N, N);
      for (int k = 0; k < r; ++k)
        if (!is_zero(L.bracket(i, j, k))) lhs += mult_matrix(a, L.bracket(i, j, k)) * L.rho[k];
      MatQ rhs = L.rho[i] * L.rho[j] - L.rho[j] * L.rho[i];
      if (lhs != rhs) out.push_back({"anchor_homomorphism", {i, j}});
    }
  for (int i = 0; i < r; ++i)
    for (int j = i + 1; j < r; ++j)
      for (int k = j + 1; k < r; ++k) {
        Section ei = frame_section(L, i), ej = frame_section(L, j), ek = frame_section(L, k);
        Section t1 = bracket_sections(L, bracket_sections(L, ei, ej), ek);
        Section t2 = bracket_sections(L, bracket_sections(L, ej, ek), ei);
        Section t3 = bracket_sections(L, bracket_sections(L, ek, ei), ej);
        for (int m = 0; m < r; ++m) t1[m] += t2[m] + t3[m];
        if (!is_zero(t1)) out.push_back({"jacobi", {i, j, k}});
      }
  return out;
}

std::vector<AxiomFailure> validate_lie_pair(const LieAlgebroid& L, int sub_rank) {
  std::vector<AxiomFailure> out = validate_algebroid(L);
  if (sub_rank < 0 || sub_rank > L.rank) {
    out.push_back({"sub_rank", {sub_rank}});
    return out;
  }
  for (int i = 0; i < sub_rank; ++i)
    for (int j = 0; j < sub_rank; ++j)
      for (int k = sub_rank; k < L.rank; ++k)
        if (!is_zero(L.bracket(i, j, k))) out.push_back({"subalgebroid_closure", {i, j, k}});
  return out;
}

LiePair make_pair(LieAlgebroid L, int sub_rank) {
  if (sub_rank < 0 || sub_rank > L.rank) throw std::invalid_argument("make_pair: sub_rank out of range");
  LiePair p;
  p.sub_rank = sub_rank;
  finalize(L);
  p.A = std::make_shared<const LieAlgebroid>(restrict_algebroid(L, sub_rank));
  p.L = std::make_shared<const LieAlgebroid>(std::move(L));
  return p;
}

// ---- differentials ----

CMat rho_apply(const LieAlgebroid& L, int a, const CMat& m) {
  const int N = L.N();
  CMat r = cmat_zero(N, m.rows(), m.cols());
  const MatQ& R = L.rho[a];
  for (int k = 0; k < N; ++k)
    for (int s = 0; s < N; ++s) {
      const Q& x = R(k, s);
      if (sgn(x) == 0 || is_zero(m.c[s])) continue;
      r.c[k] += x * m.c[s];
    }
  return r;
}

Form d_form(const LieAlgebroid& L, const Form& f) {
  if (f.rank != L.rank) throw std::invalid_argument("d_form: rank mismatch");
  Form out = zero_like(f);
  const CoeffAlgebra& a = *L.alg;
  for (const auto& [I, M] : f.terms) {
    for (int b = 0; b < L.rank; ++b) {
      if (I & (1u << b)) continue;
      if (is_zero(L.rho[b])) continue;
      CMat dm = rho_apply(L, b, M);
      if (is_zero(dm)) continue;
      add_term(out, I | (1u << b), dm, Q(shuffle_sign(1u << b, I)));
    }
    for (const auto& [J, g] : L.dxi[I].terms) add_term(out, J, cmat_scale(a, M, cmat_entry(g, 0, 0)));
  }
  compact(out);
  return out;
}

// ---- Bott ----

std::vector<CMat> bott_connection(const LiePair& p) {
  const LieAlgebroid& L = *p.L;
  const int rA = p.rank_A(), q = p.rank_Q(), N = L.N();
  std::vector<CMat> out;
  for (int a = 0; a < rA; ++a) {
    CMat m = cmat_zero(N, q, q);
    for (int l = 0; l < q; ++l)
      for (int k = 0; k < q; ++k) cmat_set_entry(m, k, l, L.bracket(a, rA + l, rA + k));
    out.push_back(m);
  }
  return out;
}

std::vector<CMat> dual_bott(const LiePair& p) {
  std::vector<CMat> b = bott_connection(p);
  for (auto& m : b)
    for (auto& x : m.c) x = (-x.transpose()).eval();
  return b;
}

Splitting choose_splitting(const LiePair& p) {
  const int rL = p.rank_L(), rA = p.rank_A(), q = p.rank_Q();
  Splitting s;
  s.sigma = MatQ::Zero(rL, q);
  s.proj = MatQ::Zero(q, rL);
  s.tau = MatQ::Zero(rA, rL);
  s.incl = MatQ::Zero(rL, rA);
  for (int i = 0; i < q; ++i) {
    s.sigma(rA + i, i) = 1;
    s.proj(i, rA + i) = 1;
  }
  for (int i = 0; i < rA; ++i) {
    s.tau(i, i) = 1;
    s.incl(i, i) = 1;
  }
  return s;
}

}  // namespace ruthkit
