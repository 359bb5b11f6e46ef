#include "ruthkit/graded.hpp"

#include "ruthkit/parallel.hpp"

#include <algorithm>
#include <stdexcept>

namespace ruthkit {

// ---- bundles ----

int GradedBundle::total_rank() const {
  int r = 0;
  for (const auto& c : components) r += c.rank;
  return r;
}

int GradedBundle::min_degree() const { return components.empty() ? 0 : components.front().degree; }
int GradedBundle::max_degree() const { return components.empty() ? -1 : components.back().degree; }
int GradedBundle::amplitude() const { return components.empty() ? 0 : max_degree() - min_degree() + 1; }

int GradedBundle::rank_at(int degree) const {
  for (const auto& c : components)
    if (c.degree == degree) return c.rank;
  return 0;
}

int GradedBundle::offset(int degree) const {
  int o = 0;
  for (const auto& c : components) {
    if (c.degree >= degree) break;
    o += c.rank;
  }
  return o;
}

std::vector<int> GradedBundle::grading() const {
  std::vector<int> g;
  for (const auto& c : components)
    for (int i = 0; i < c.rank; ++i) g.push_back(c.degree);
  return g;
}

int GradedBundle::end_rank(int j) const {
  int r = 0;
  for (const auto& c : components) r += c.rank * rank_at(c.degree + j);
  return r;
}

std::vector<std::string> GradedBundle::names() const {
  std::vector<std::string> n;
  for (const auto& c : components)
    for (int i = 0; i < c.rank; ++i)
      n.push_back(i < static_cast<int>(c.names.size()) ? c.names[i]
                                                       : "e" + std::to_string(c.degree) + "_" + std::to_string(i));
  return n;
}

GradedBundle make_bundle(const std::vector<std::pair<int, int>>& degree_rank) {
  GradedBundle b;
  for (const auto& [d, r] : degree_rank) {
    if (r <= 0) continue;
    b.components.push_back({d, r, {}});
  }
  std::sort(b.components.begin(), b.components.end(),
            [](const BundleComponent& x, const BundleComponent& y) { return x.degree < y.degree; });
  for (std::size_t i = 1; i < b.components.size(); ++i)
    if (b.components[i].degree == b.components[i - 1].degree)
      throw std::invalid_argument("make_bundle: repeated degree");
  return b;
}

// ---- CMat ----

CMat cmat_zero(int N, int rows, int cols) {
  CMat m;
  m.c.assign(N, MatQ::Zero(rows, cols));
  return m;
}

CMat cmat_constant(const CoeffAlgebra& a, const MatQ& m) {
  CMat r = cmat_zero(a.dim(), static_cast<int>(m.rows()), static_cast<int>(m.cols()));
  r.c[a.unit_index] = m;
  return r;
}

CMat cmat_identity(const CoeffAlgebra& a, int n) { return cmat_constant(a, MatQ::Identity(n, n)); }

bool is_zero(const CMat& m) {
  for (const auto& x : m.c)
    if (!is_zero(x)) return false;
  return true;
}

bool operator==(const CMat& x, const CMat& y) {
  if (x.c.size() != y.c.size()) return false;
  for (std::size_t i = 0; i < x.c.size(); ++i)
    if (x.c[i] != y.c[i]) return false;
  return true;
}

CMat cmat_mul(const CoeffAlgebra& a, const CMat& x, const CMat& y) {
  const int N = a.dim();
  CMat r = cmat_zero(N, x.rows(), y.cols());
  std::vector<int> nx, ny;
  for (int i = 0; i < N; ++i) {
    if (!is_zero(x.c[i])) nx.push_back(i);
    if (!is_zero(y.c[i])) ny.push_back(i);
  }
  for (int i : nx)
    for (int j : ny)
      for (const auto& [k, coef] : a.table[i * N + j]) accumulate_product(r.c[k], x.c[i], y.c[j], coef);
  return r;
}

void cmat_add(CMat& x, const CMat& y, const Q& s) {
  if (x.c.empty()) {
    x = y;
    if (s != 1)
      for (auto& m : x.c) m *= s;
    return;
  }
  for (std::size_t i = 0; i < x.c.size(); ++i) {
    if (is_zero(y.c[i])) continue;
    if (s == 1)
      x.c[i] += y.c[i];
    else
      x.c[i] += s * y.c[i];
  }
}

VecQ cmat_entry(const CMat& m, int i, int j) {
  VecQ v(m.c.size());
  for (std::size_t k = 0; k < m.c.size(); ++k) v(k) = m.c[k](i, j);
  return v;
}

void cmat_set_entry(CMat& m, int i, int j, const VecQ& v) {
  for (std::size_t k = 0; k < m.c.size(); ++k) m.c[k](i, j) = v(k);
}

CMat cmat_scale(const CoeffAlgebra& a, const CMat& m, const VecQ& f) {
  const int N = a.dim();
  CMat r = cmat_zero(N, m.rows(), m.cols());
  for (int i = 0; i < N; ++i) {
    if (sgn(f(i)) == 0) continue;
    for (int j = 0; j < N; ++j) {
      if (is_zero(m.c[j])) continue;
      for (const auto& [k, coef] : a.table[i * N + j]) r.c[k] += (coef * f(i)) * m.c[j];
    }
  }
  return r;
}

MatQ cmat_flatten_map(const CoeffAlgebra& a, const CMat& m) {
  const int N = a.dim();
  MatQ out = MatQ::Zero(m.rows() * N, m.cols() * N);
  for (int k = 0; k < N; ++k) {
    if (is_zero(m.c[k])) continue;
    for (int i = 0; i < m.rows(); ++i)
      for (int j = 0; j < m.cols(); ++j) {
        const Q& e = m.c[k](i, j);
        if (sgn(e) == 0) continue;
        for (int b = 0; b < N; ++b)
          for (const auto& [c, coef] : a.table[k * N + b]) out(i * N + c, j * N + b) += e * coef;
      }
  }
  return out;
}

std::optional<CMat> cmat_inverse(const CoeffAlgebra& a, const CMat& m) {
  if (m.rows() != m.cols()) return std::nullopt;
  const int N = a.dim(), n = m.rows();
  SpMat F = sparse_from_dense(cmat_flatten_map(a, m));
  Echelon e(F);
  if (e.rank() < n * N) return std::nullopt;
  CMat inv = cmat_zero(N, n, n);
  for (int j = 0; j < n; ++j) {
    SpVec rhs{{j * N + a.unit_index, Q(1)}};
    SolveResult r = solve(F, rhs);
    if (!r.solvable) return std::nullopt;
    for (const auto& [idx, x] : r.x) inv.c[idx % N](idx / N, j) = x;
  }
  return inv;
}

CMat cmat_block(const CMat& m, int r0, int c0, int nr, int nc) {
  CMat b;
  for (const auto& x : m.c) b.c.push_back(x.block(r0, c0, nr, nc));
  return b;
}

// ---- masks ----

int shuffle_sign(unsigned I, unsigned J) {
  int inv = 0;
  for (unsigned j = J; j; j &= j - 1) {
    int b = __builtin_ctz(j);
    inv += __builtin_popcount(I >> (b + 1));
  }
  return (inv & 1) ? -1 : 1;
}

std::vector<int> mask_indices(unsigned mask) {
  std::vector<int> v;
  for (unsigned m = mask; m; m &= m - 1) v.push_back(__builtin_ctz(m));
  return v;
}

unsigned indices_mask(const std::vector<int>& idx) {
  unsigned m = 0;
  for (int i : idx) m |= 1u << i;
  return m;
}

// ---- forms ----

Form make_form(AlgebraPtr alg, int rank, std::vector<int> rows, std::vector<int> cols) {
  Form f;
  f.alg = std::move(alg);
  f.rank = rank;
  f.rows = std::move(rows);
  f.cols = std::move(cols);
  return f;
}

Form zero_like(const Form& f) { return make_form(f.alg, f.rank, f.rows, f.cols); }

void add_term(Form& f, unsigned mask, const CMat& m, const Q& s) {
  auto it = f.terms.find(mask);
  if (it == f.terms.end()) {
    if (is_zero(m)) return;
    CMat c = m;
    if (s != 1)
      for (auto& x : c.c) x *= s;
    f.terms.emplace(mask, std::move(c));
  } else {
    cmat_add(it->second, m, s);
  }
}

void add_entry(Form& f, unsigned mask, int i, int j, const VecQ& v) {
  if (is_zero(v)) return;
  auto it = f.terms.find(mask);
  if (it == f.terms.end())
    it = f.terms.emplace(mask, cmat_zero(f.N(), static_cast<int>(f.rows.size()), static_cast<int>(f.cols.size())))
             .first;
  for (int k = 0; k < f.N(); ++k) it->second.c[k](i, j) += v(k);
}

void compact(Form& f) {
  for (auto it = f.terms.begin(); it != f.terms.end();) {
    if (is_zero(it->second))
      it = f.terms.erase(it);
    else
      ++it;
  }
}

bool is_zero(const Form& f) {
  for (const auto& [m, c] : f.terms)
    if (!is_zero(c)) return false;
  return true;
}

bool operator==(const Form& a, const Form& b) { return is_zero(a - b); }

Form operator+(const Form& a, const Form& b) {
  Form r = a;
  for (const auto& [m, c] : b.terms) add_term(r, m, c);
  compact(r);
  return r;
}

Form operator-(const Form& a, const Form& b) {
  Form r = a;
  for (const auto& [m, c] : b.terms) add_term(r, m, c, Q(-1));
  compact(r);
  return r;
}

Form operator*(const Q& s, const Form& f) {
  Form r = zero_like(f);
  if (sgn(s) == 0) return r;
  for (const auto& [m, c] : f.terms) add_term(r, m, c, s);
  return r;
}

Form operator-(const Form& f) { return Q(-1) * f; }

namespace {

CMat conjugate_entries(const CMat& m, const std::vector<int>& rows, const std::vector<int>& cols) {
  CMat r = m;
  for (auto& x : r.c)
    for (int i = 0; i < x.rows(); ++i)
      for (int j = 0; j < x.cols(); ++j)
        if ((rows[i] - cols[j]) & 1) x(i, j) = -x(i, j);
  return r;
}

}  // namespace

Form wedge(const Form& a, const Form& b) {
  if (a.cols.size() != b.rows.size()) throw std::invalid_argument("wedge: shape mismatch");
  Form r = make_form(a.alg, std::max(a.rank, b.rank), a.rows, b.cols);
  const CoeffAlgebra& alg = *a.alg;
  // cache the conjugated left factors (needed when the right arity is odd)
  std::map<unsigned, CMat> conj;
  for (const auto& [I, A] : a.terms) {
    for (const auto& [J, B] : b.terms) {
      if (I & J) continue;
      const CMat* left = &A;
      if (arity(J) & 1) {
        auto it = conj.find(I);
        if (it == conj.end()) it = conj.emplace(I, conjugate_entries(A, a.rows, a.cols)).first;
        left = &it->second;
      }
      CMat p = cmat_mul(alg, *left, B);
      add_term(r, I | J, p, Q(shuffle_sign(I, J)));
    }
  }
  compact(r);
  return r;
}

std::map<int, Form> split_total_degree(const Form& f) {
  std::map<int, Form> out;
  for (const auto& [mask, c] : f.terms) {
    for (int i = 0; i < c.rows(); ++i)
      for (int j = 0; j < c.cols(); ++j) {
        VecQ v = cmat_entry(c, i, j);
        if (is_zero(v)) continue;
        int deg = arity(mask) + f.rows[i] - f.cols[j];
        auto it = out.find(deg);
        if (it == out.end()) it = out.emplace(deg, zero_like(f)).first;
        add_entry(it->second, mask, i, j, v);
      }
  }
  return out;
}

std::optional<int> total_degree(const Form& f) {
  auto parts = split_total_degree(f);
  if (parts.size() != 1) return std::nullopt;
  return parts.begin()->first;
}

Form commutator(const Form& a, int deg_a, const Form& b, int deg_b) {
  Form ab = wedge(a, b);
  Form ba = wedge(b, a);
  return ((deg_a * deg_b) & 1) ? ab + ba : ab - ba;
}

Form commutator(const Form& a, const Form& b) {
  auto pa = split_total_degree(a);
  auto pb = split_total_degree(b);
  Form r = make_form(a.alg, std::max(a.rank, b.rank), a.rows, b.cols);
  for (const auto& [m, x] : pa)
    for (const auto& [n, y] : pb) r = r + commutator(x, m, y, n);
  return r;
}

Form arity_part(const Form& f, int k) {
  return filter_masks(f, [k](unsigned m) { return arity(m) == k; });
}

Form filter_masks(const Form& f, const std::function<bool(unsigned)>& keep) {
  Form r = zero_like(f);
  for (const auto& [m, c] : f.terms)
    if (keep(m)) r.terms.emplace(m, c);
  return r;
}

Form grading_conjugate(const Form& f) {
  Form r = zero_like(f);
  for (const auto& [m, c] : f.terms) r.terms.emplace(m, conjugate_entries(c, f.rows, f.cols));
  return r;
}

Form embed(const Form& f, int new_rank) {
  Form r = f;
  r.rank = new_rank;
  return r;
}

Form scale(const Form& f, const VecQ& g) {
  Form r = zero_like(f);
  for (const auto& [m, c] : f.terms) add_term(r, m, cmat_scale(*f.alg, c, g));
  compact(r);
  return r;
}

Form identity_form(AlgebraPtr alg, int rank, const std::vector<int>& grading) {
  Form f = make_form(alg, rank, grading, grading);
  f.terms.emplace(0u, cmat_identity(*alg, static_cast<int>(grading.size())));
  return f;
}

Form scalar_to_identity(const Form& s, const std::vector<int>& grading) {
  const int n = static_cast<int>(grading.size());
  Form r = make_form(s.alg, s.rank, grading, grading);
  for (const auto& [m, c] : s.terms) {
    CMat x = cmat_zero(s.N(), n, n);
    for (int k = 0; k < s.N(); ++k)
      for (int i = 0; i < n; ++i) x.c[k](i, i) = c.c[k](0, 0);
    add_term(r, m, x);
  }
  return r;
}

Form coordinate_one_form(AlgebraPtr alg, int rank, int a, const VecQ& g) {
  Form f = make_form(alg, rank, {0}, {0});
  add_entry(f, 1u << a, 0, 0, g);
  return f;
}

Form constant_form(AlgebraPtr alg, int rank, std::vector<int> rows, std::vector<int> cols, const CMat& m) {
  Form f = make_form(std::move(alg), rank, std::move(rows), std::move(cols));
  add_term(f, 0u, m);
  return f;
}

// ---- flattening ----

namespace {
std::uint64_t coord_key(unsigned mask, int row, int col, int m) {
  return (static_cast<std::uint64_t>(mask) << 48) | (static_cast<std::uint64_t>(row) << 32) |
         (static_cast<std::uint64_t>(col) << 16) | static_cast<std::uint64_t>(m);
}
}  // namespace

int FormSpace::find(unsigned mask, int row, int col, int m) const {
  auto it = index.find(coord_key(mask, row, col, m));
  return it == index.end() ? -1 : it->second;
}

FormSpace make_space(AlgebraPtr alg, int rank, std::vector<int> rows, std::vector<int> cols, const CoordFilter& keep) {
  FormSpace s;
  s.alg = alg;
  s.rank = rank;
  s.rows = std::move(rows);
  s.cols = std::move(cols);
  std::vector<unsigned> masks;
  for (unsigned m = 0; m < (1u << rank); ++m) masks.push_back(m);
  std::stable_sort(masks.begin(), masks.end(), [](unsigned x, unsigned y) { return arity(x) < arity(y); });
  const int N = alg->dim();
  for (unsigned m : masks)
    for (int i = 0; i < static_cast<int>(s.rows.size()); ++i)
      for (int j = 0; j < static_cast<int>(s.cols.size()); ++j) {
        if (!keep(m, i, j)) continue;
        for (int k = 0; k < N; ++k) {
          s.index.emplace(coord_key(m, i, j, k), static_cast<int>(s.coords.size()));
          s.coords.push_back({m, i, j, k});
        }
      }
  return s;
}

SpVec flatten(const FormSpace& s, const Form& f) {
  SpVec v;
  for (const auto& [mask, c] : f.terms)
    for (int k = 0; k < static_cast<int>(c.c.size()); ++k)
      for (int i = 0; i < c.rows(); ++i)
        for (int j = 0; j < c.cols(); ++j) {
          const Q& x = c.c[k](i, j);
          if (sgn(x) == 0) continue;
          int idx = s.find(mask, i, j, k);
          if (idx < 0) throw std::out_of_range("flatten: coefficient outside the space");
          v.emplace_back(idx, x);
        }
  std::sort(v.begin(), v.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
  return v;
}

Form unflatten(const FormSpace& s, const SpVec& v) {
  Form f = make_form(s.alg, s.rank, s.rows, s.cols);
  const int N = s.alg->dim();
  for (const auto& [idx, x] : v) {
    const FormCoord& c = s.coords[idx];
    auto it = f.terms.find(c.mask);
    if (it == f.terms.end())
      it = f.terms.emplace(c.mask, cmat_zero(N, static_cast<int>(s.rows.size()), static_cast<int>(s.cols.size())))
               .first;
    it->second.c[c.m](c.row, c.col) += x;
  }
  compact(f);
  return f;
}

Form basis_form(const FormSpace& s, int i) { return unflatten(s, SpVec{{i, Q(1)}}); }

SpMat operator_matrix(const FormSpace& dom, const FormSpace& cod, const std::function<Form(const Form&)>& f) {
  std::vector<SpVec> cols(dom.dim());
  parallel_for(dom.dim(), [&](int j) { cols[j] = flatten(cod, f(basis_form(dom, j))); });
  return from_columns(cod.dim(), cols);
}

}  // namespace ruthkit
