#include "ruthkit/linalg.hpp"

#include <algorithm>
#include <stdexcept>

namespace ruthkit {

namespace {

// r <- r - f * p, both sorted.
SpVec axpy(const SpVec& r, const Q& f, const SpVec& p) {
  SpVec out;
  out.reserve(r.size() + p.size());
  std::size_t i = 0, j = 0;
  while (i < r.size() || j < p.size()) {
    if (j == p.size() || (i < r.size() && r[i].first < p[j].first)) {
      out.push_back(r[i++]);
    } else if (i == r.size() || p[j].first < r[i].first) {
      out.emplace_back(p[j].first, -f * p[j].second);
      ++j;
    } else {
      Q v = r[i].second - f * p[j].second;
      if (sgn(v) != 0) out.emplace_back(r[i].first, std::move(v));
      ++i;
      ++j;
    }
  }
  return out;
}

const Q* find_entry(const SpVec& v, int idx) {
  auto it = std::lower_bound(v.begin(), v.end(), idx,
                             [](const std::pair<int, Q>& e, int k) { return e.first < k; });
  if (it != v.end() && it->first == idx) return &it->second;
  return nullptr;
}

}  // namespace

SpMat sparse_from_dense(const MatQ& m) {
  SpMat s(m.rows(), m.cols());
  std::vector<Eigen::Triplet<Q>> t;
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      if (sgn(m(i, j)) != 0) t.emplace_back(i, j, m(i, j));
  s.setFromTriplets(t.begin(), t.end());
  return s;
}

MatQ dense(const SpMat& m) {
  MatQ d = MatQ::Zero(m.rows(), m.cols());
  for (int k = 0; k < m.outerSize(); ++k)
    for (SpMat::InnerIterator it(m, k); it; ++it) d(it.row(), it.col()) = it.value();
  return d;
}

SpMat identity_sparse(int n) {
  SpMat s(n, n);
  std::vector<Eigen::Triplet<Q>> t;
  for (int i = 0; i < n; ++i) t.emplace_back(i, i, Q(1));
  s.setFromTriplets(t.begin(), t.end());
  return s;
}

void prune(SpMat& m) {
  m.prune([](const Eigen::Index&, const Eigen::Index&, const Q& v) { return sgn(v) != 0; });
}

bool is_zero(const SpMat& m) {
  for (int k = 0; k < m.outerSize(); ++k)
    for (SpMat::InnerIterator it(m, k); it; ++it)
      if (sgn(it.value()) != 0) return false;
  return true;
}

bool equal(const SpMat& a, const SpMat& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  SpMat d = a - b;
  return is_zero(d);
}

SpVec column(const SpMat& m, int j) {
  SpVec v;
  for (SpMat::InnerIterator it(m, j); it; ++it)
    if (sgn(it.value()) != 0) v.emplace_back(static_cast<int>(it.row()), it.value());
  std::sort(v.begin(), v.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
  return v;
}

SpVec apply(const SpMat& m, const SpVec& v) {
  std::vector<Q> acc(m.rows());
  std::vector<char> touched(m.rows(), 0);
  for (const auto& [j, x] : v) {
    for (SpMat::InnerIterator it(m, j); it; ++it) {
      acc[it.row()] += it.value() * x;
      touched[it.row()] = 1;
    }
  }
  SpVec out;
  for (int i = 0; i < m.rows(); ++i)
    if (touched[i] && sgn(acc[i]) != 0) out.emplace_back(i, acc[i]);
  return out;
}

VecQ to_dense(const SpVec& v, int n) {
  VecQ d = VecQ::Zero(n);
  for (const auto& [i, x] : v) d(i) = x;
  return d;
}

SpVec to_sparse(const VecQ& v) {
  SpVec s;
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (sgn(v(i)) != 0) s.emplace_back(static_cast<int>(i), v(i));
  return s;
}

SpMat from_columns(int rows, const std::vector<SpVec>& cols) {
  SpMat s(rows, static_cast<int>(cols.size()));
  std::vector<Eigen::Triplet<Q>> t;
  for (std::size_t j = 0; j < cols.size(); ++j)
    for (const auto& [i, x] : cols[j]) t.emplace_back(i, static_cast<int>(j), x);
  s.setFromTriplets(t.begin(), t.end());
  return s;
}

SpMat block(const SpMat& m, int r0, int c0, int nr, int nc) {
  std::vector<Eigen::Triplet<Q>> t;
  for (int j = c0; j < c0 + nc; ++j)
    for (SpMat::InnerIterator it(m, j); it; ++it)
      if (it.row() >= r0 && it.row() < r0 + nr) t.emplace_back(it.row() - r0, j - c0, it.value());
  SpMat s(nr, nc);
  s.setFromTriplets(t.begin(), t.end());
  return s;
}

Echelon::Echelon(const SpMat& a, const std::vector<SpVec>& extra_columns) {
  main_cols_ = static_cast<int>(a.cols());
  cols_ = main_cols_ + static_cast<int>(extra_columns.size());
  const int m = static_cast<int>(a.rows());
  std::vector<SpVec> rows(m);
  for (int j = 0; j < a.outerSize(); ++j)
    for (SpMat::InnerIterator it(a, j); it; ++it)
      if (sgn(it.value()) != 0) rows[it.row()].emplace_back(j, it.value());
  for (std::size_t e = 0; e < extra_columns.size(); ++e)
    for (const auto& [i, x] : extra_columns[e])
      if (sgn(x) != 0) rows[i].emplace_back(main_cols_ + static_cast<int>(e), x);
  // bucket by leading column; rows are already column sorted
  std::vector<std::vector<int>> bucket(cols_);
  for (int i = 0; i < m; ++i)
    if (!rows[i].empty()) bucket[rows[i].front().first].push_back(i);
  for (int c = 0; c < cols_; ++c) {
    auto& cand = bucket[c];
    if (cand.empty()) continue;
    int best = cand.front();
    for (int r : cand)
      if (rows[r].size() < rows[best].size() || (rows[r].size() == rows[best].size() && r < best)) best = r;
    SpVec p = std::move(rows[best]);
    Q lead = p.front().second;
    if (lead != 1)
      for (auto& e : p) e.second /= lead;
    std::vector<int> others;
    for (int r : cand)
      if (r != best) others.push_back(r);
    cand.clear();
    for (int r : others) {
      Q f = rows[r].front().second;
      rows[r] = axpy(rows[r], f, p);
      if (!rows[r].empty()) bucket[rows[r].front().first].push_back(r);
    }
    rows_.push_back(std::move(p));
    pivot_cols_.push_back(c);
  }
}

int Echelon::rank_main() const {
  int r = 0;
  for (int c : pivot_cols_)
    if (c < main_cols_) ++r;
  return r;
}

int rank(const SpMat& a) { return Echelon(a).rank(); }

SolveResult solve(const SpMat& a, const SpVec& b) {
  SolveResult res;
  Echelon e(a, {b});
  const int n = static_cast<int>(a.cols());
  res.rank = e.rank_main();
  res.rank_augmented = e.rank();
  res.solvable = res.rank == res.rank_augmented;
  if (!res.solvable) return res;
  std::vector<Q> x(n);
  const auto& rows = e.rows();
  const auto& piv = e.pivot_columns();
  for (int k = static_cast<int>(piv.size()) - 1; k >= 0; --k) {
    const SpVec& r = rows[k];
    Q v;
    for (const auto& [j, c] : r) {
      if (j == piv[k]) continue;
      if (j == n)
        v += c;
      else
        v -= c * x[j];
    }
    x[piv[k]] = v;
  }
  for (int j = 0; j < n; ++j)
    if (sgn(x[j]) != 0) res.x.emplace_back(j, x[j]);
  return res;
}

std::vector<SpVec> row_reduce(const std::vector<SpVec>& vectors, int dim) {
  SpMat t = from_columns(dim, vectors).transpose();
  Echelon e(t);
  std::vector<SpVec> rows = e.rows();
  const auto& piv = e.pivot_columns();
  // back-substitute to reduced form
  for (int k = static_cast<int>(rows.size()) - 1; k >= 0; --k) {
    for (int i = 0; i < k; ++i) {
      const Q* f = find_entry(rows[i], piv[k]);
      if (f) {
        Q fc = *f;
        rows[i] = axpy(rows[i], fc, rows[k]);
      }
    }
  }
  return rows;
}

std::vector<SpVec> nullspace(const SpMat& a) {
  const int n = static_cast<int>(a.cols());
  Echelon e(a);
  std::vector<SpVec> rows = e.rows();
  const auto& piv = e.pivot_columns();
  for (int k = static_cast<int>(rows.size()) - 1; k >= 0; --k)
    for (int i = 0; i < k; ++i) {
      const Q* f = find_entry(rows[i], piv[k]);
      if (f) {
        Q fc = *f;
        rows[i] = axpy(rows[i], fc, rows[k]);
      }
    }
  std::vector<char> is_piv(n, 0);
  for (int c : piv) is_piv[c] = 1;
  std::vector<SpVec> basis;
  for (int f = 0; f < n; ++f) {
    if (is_piv[f]) continue;
    std::vector<std::pair<int, Q>> v;
    v.emplace_back(f, Q(1));
    for (std::size_t k = 0; k < rows.size(); ++k) {
      const Q* c = find_entry(rows[k], f);
      if (c) v.emplace_back(piv[k], -*c);
    }
    std::sort(v.begin(), v.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    basis.push_back(std::move(v));
  }
  return basis;
}

}  // namespace ruthkit
