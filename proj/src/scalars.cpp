#include "ruthkit/scalars.hpp"

#include "ruthkit/linalg.hpp"

#include <regex>
#include <stdexcept>

namespace ruthkit {

Q parse_rational(const std::string& s) {
  static const std::regex re(R"(^\s*([+-]?[0-9]+)(?:/([0-9]+))?\s*$)");
  std::smatch m;
  if (!std::regex_match(s, m, re)) throw std::invalid_argument("malformed rational \"" + s + "\"");
  mpz_class num(m[1].str(), 10);
  mpz_class den(1);
  if (m[2].matched) den = mpz_class(m[2].str(), 10);
  if (den == 0) throw std::invalid_argument("zero denominator in \"" + s + "\"");
  Q q(num, den);
  q.canonicalize();
  return q;
}

std::string format_rational(const Q& x) {
  Q c = x;
  c.canonicalize();
  return c.get_str();
}

bool is_zero(const MatQ& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      if (sgn(m(i, j)) != 0) return false;
  return true;
}

bool is_zero(const VecQ& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (sgn(v(i)) != 0) return false;
  return true;
}

void accumulate_product(MatQ& C, const MatQ& A, const MatQ& B, const Q& scale) {
  const bool unit = scale == 1;
  Q t;
  for (Eigen::Index j = 0; j < A.cols(); ++j) {
    for (Eigen::Index k = 0; k < B.cols(); ++k) {
      const Q& b = B(j, k);
      if (sgn(b) == 0) continue;
      for (Eigen::Index i = 0; i < A.rows(); ++i) {
        const Q& a = A(i, j);
        if (sgn(a) == 0) continue;
        t = a * b;
        if (unit)
          C(i, k) += t;
        else
          C(i, k) += t * scale;
      }
    }
  }
}

void CoeffAlgebra::rebuild_table() {
  const int n = dim();
  table.assign(static_cast<std::size_t>(n) * n, {});
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        if (sgn(mult[a](c, b)) != 0) table[a * n + b].emplace_back(c, mult[a](c, b));
}

CoeffAlgebra point_algebra() {
  CoeffAlgebra a;
  a.basis = {"1"};
  a.exponents = {{}};
  a.unit_index = 0;
  a.mult = {MatQ::Identity(1, 1)};
  a.rebuild_table();
  return a;
}

namespace {

std::string var_name(int i, int n) {
  static const char* names[] = {"x", "y", "z", "w"};
  if (n <= 4) return names[i];
  return "x" + std::to_string(i + 1);
}

std::string monomial_label(const std::vector<int>& e) {
  std::string s;
  const int n = static_cast<int>(e.size());
  for (int i = 0; i < n; ++i) {
    if (e[i] == 0) continue;
    if (!s.empty()) s += "*";
    s += var_name(i, n);
    if (e[i] > 1) s += "^" + std::to_string(e[i]);
  }
  return s.empty() ? "1" : s;
}

// exponent vectors of total degree d, lexicographically descending
void exps_of_degree(int n, int d, std::vector<int>& cur, int pos, std::vector<std::vector<int>>& out) {
  if (pos == n - 1) {
    cur[pos] = d;
    out.push_back(cur);
    return;
  }
  for (int k = d; k >= 0; --k) {
    cur[pos] = k;
    exps_of_degree(n, d - k, cur, pos + 1, out);
  }
}

}  // namespace

int monomial_index(const CoeffAlgebra& a, const std::vector<int>& exps) {
  for (int i = 0; i < a.dim(); ++i)
    if (a.exponents[i] == exps) return i;
  return -1;
}

CoeffAlgebra jet_algebra(int n_vars, int order) {
  if (n_vars < 0 || order < 0) throw std::invalid_argument("jet_algebra: negative parameter");
  if (n_vars == 0) return point_algebra();
  CoeffAlgebra a;
  a.n_vars = n_vars;
  a.order = order;
  for (int d = 0; d <= order; ++d) {
    std::vector<int> cur(n_vars, 0);
    exps_of_degree(n_vars, d, cur, 0, a.exponents);
  }
  const int N = static_cast<int>(a.exponents.size());
  for (const auto& e : a.exponents) a.basis.push_back(monomial_label(e));
  a.unit_index = 0;
  a.mult.assign(N, MatQ::Zero(N, N));
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      std::vector<int> e(n_vars);
      for (int v = 0; v < n_vars; ++v) e[v] = a.exponents[i][v] + a.exponents[j][v];
      int k = monomial_index(a, e);
      if (k >= 0) a.mult[i](k, j) = 1;
    }
  a.partials.assign(n_vars, MatQ::Zero(N, N));
  for (int v = 0; v < n_vars; ++v)
    for (int j = 0; j < N; ++j) {
      if (a.exponents[j][v] == 0) continue;
      std::vector<int> e = a.exponents[j];
      e[v] -= 1;
      a.partials[v](monomial_index(a, e), j) = a.exponents[j][v];
    }
  a.rebuild_table();
  a.derivations = compute_derivations(a);
  return a;
}

std::vector<MatQ> compute_derivations(const CoeffAlgebra& a) {
  const int N = a.dim();
  // unknown D(r, c) at index c * N + r; constraint rows indexed by (i, j, r)
  std::vector<Eigen::Triplet<Q>> t;
  int row = 0;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      for (int r = 0; r < N; ++r) {
        // D(b_i b_j)_r - (D(b_i) b_j)_r - (b_i D(b_j))_r = 0
        for (int c = 0; c < N; ++c) {
          const Q& m = a.mult[i](c, j);
          if (sgn(m) != 0) t.emplace_back(row, c * N + r, m);
        }
        for (int s = 0; s < N; ++s) {
          const Q& m1 = a.mult[s](r, j);  // (b_s b_j)_r, coefficient of D(b_i)_s
          if (sgn(m1) != 0) t.emplace_back(row, i * N + s, -m1);
          const Q& m2 = a.mult[i](r, s);  // (b_i b_s)_r, coefficient of D(b_j)_s
          if (sgn(m2) != 0) t.emplace_back(row, j * N + s, -m2);
        }
        ++row;
      }
    }
  SpMat sys(row, N * N);
  sys.setFromTriplets(t.begin(), t.end());
  prune(sys);
  std::vector<SpVec> ker = row_reduce(nullspace(sys), N * N);
  std::vector<MatQ> out;
  for (const auto& v : ker) {
    MatQ d = MatQ::Zero(N, N);
    for (const auto& [idx, x] : v) d(idx % N, idx / N) = x;
    out.push_back(d);
  }
  return out;
}

std::vector<AxiomFailure> validate_algebra(const CoeffAlgebra& a) {
  std::vector<AxiomFailure> out;
  const int N = a.dim();
  if (static_cast<int>(a.mult.size()) != N) {
    out.push_back({"shape", {}});
    return out;
  }
  auto prod = [&](const VecQ& x, const VecQ& y) {
    VecQ r = VecQ::Zero(N);
    for (int i = 0; i < N; ++i) {
      if (sgn(x(i)) == 0) continue;
      r += x(i) * (a.mult[i] * y);
    }
    return r;
  };
  auto e = [&](int i) { return basis_element(a, i); };
  for (int i = 0; i < N; ++i)
    for (int j = i + 1; j < N; ++j)
      if (a.mult[i].col(j) != a.mult[j].col(i)) out.push_back({"commutativity", {i, j}});
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      for (int k = 0; k < N; ++k)
        if (prod(prod(e(i), e(j)), e(k)) != prod(e(i), prod(e(j), e(k)))) out.push_back({"associativity", {i, j, k}});
  for (int i = 0; i < N; ++i)
    if (prod(e(a.unit_index), e(i)) != e(i) || prod(e(i), e(a.unit_index)) != e(i)) out.push_back({"unit", {i}});
  for (std::size_t d = 0; d < a.derivations.size(); ++d) {
    const MatQ& D = a.derivations[d];
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) {
        VecQ lhs = D * prod(e(i), e(j));
        VecQ rhs = prod(D * e(i), e(j)) + prod(e(i), D * e(j));
        if (lhs != rhs) out.push_back({"leibniz", {static_cast<int>(d), i, j}});
      }
  }
  return out;
}

VecQ unit_element(const CoeffAlgebra& a) { return basis_element(a, a.unit_index); }

VecQ basis_element(const CoeffAlgebra& a, int i) {
  VecQ v = VecQ::Zero(a.dim());
  v(i) = 1;
  return v;
}

VecQ constant(const CoeffAlgebra& a, const Q& x) {
  VecQ v = VecQ::Zero(a.dim());
  v(a.unit_index) = x;
  return v;
}

VecQ multiply(const CoeffAlgebra& a, const VecQ& x, const VecQ& y) {
  const int N = a.dim();
  VecQ r = VecQ::Zero(N);
  for (int i = 0; i < N; ++i) {
    if (sgn(x(i)) == 0) continue;
    for (int j = 0; j < N; ++j) {
      if (sgn(y(j)) == 0) continue;
      for (const auto& [c, m] : a.table[i * N + j]) r(c) += m * x(i) * y(j);
    }
  }
  return r;
}

MatQ mult_matrix(const CoeffAlgebra& a, const VecQ& x) {
  const int N = a.dim();
  MatQ m = MatQ::Zero(N, N);
  for (int i = 0; i < N; ++i)
    if (sgn(x(i)) != 0) m += x(i) * a.mult[i];
  return m;
}

std::optional<VecQ> inverse(const CoeffAlgebra& a, const VecQ& x) {
  SpMat m = sparse_from_dense(mult_matrix(a, x));
  SolveResult r = solve(m, to_sparse(unit_element(a)));
  if (!r.solvable || r.rank < a.dim()) return std::nullopt;
  return to_dense(r.x, a.dim());
}

}  // namespace ruthkit
