#include "ruthkit/atiyah.hpp"

#include "ruthkit/parallel.hpp"

namespace ruthkit {

Extension extend(const LiePair& pair, const SuperConnection& DA, const std::optional<SuperConnection>& seed) {
  Extension ext{pair, DA, make_superconnection(pair.L, DA.bundle)};
  const int rL = pair.rank_L(), rA = pair.rank_A();
  if (!seed) {
    for (int k = 0; k <= rA; ++k) ext.DL.omega[k] = embed(DA.omega[k], rL);
    return ext;
  }
  if (seed->rank() != rL || seed->grading() != DA.grading())
    throw std::invalid_argument("extension seed has the wrong shape");
  const unsigned amask = pair.a_mask();
  for (int k = 0; k <= rL; ++k) {
    Form restricted = filter_masks(seed->omega[k], [amask](unsigned m) { return (m & ~amask) == 0; });
    Form expected = k <= rA ? embed(DA.omega[k], rL) : zero_like(restricted);
    Form diff = restricted - expected;
    if (!is_zero(diff)) throw ExtensionMismatch(k, diff.terms.begin()->first);
  }
  ext.DL = *seed;
  ext.DL.base = pair.L;
  return ext;
}

bool is_hat_mask(const LiePair& pair, unsigned mask) { return arity(mask & pair.complement_mask()) == 1; }

Form hat_part(const LiePair& pair, const Form& f) {
  return filter_masks(f, [&pair](unsigned m) { return is_hat_mask(pair, m); });
}

FormSpace hat_space(const LiePair& pair, const std::vector<int>& grading, int p) {
  return make_space(pair.L->alg, pair.rank_L(), grading, grading, [&](unsigned m, int i, int j) {
    return is_hat_mask(pair, m) && arity(m) - 1 + grading[i] - grading[j] == p;
  });
}

std::optional<int> hat_degree(const Form& f) {
  auto d = total_degree(f);
  if (!d) return std::nullopt;
  return *d - 1;
}

Form zero_hat(const LiePair& pair, const std::vector<int>& grading) {
  return make_form(pair.L->alg, pair.rank_L(), grading, grading);
}

Form atiyah_cocycle(const Extension& ext) { return hat_part(ext.pair, curvature(ext.DL)); }

Form s_via_extension(const Extension& ext, const Form& w) {
  Form full = adjoint_apply(ext.DL, w);
  const unsigned cm = ext.pair.complement_mask();
  Form a_only = filter_masks(full, [cm](unsigned m) { return (m & cm) == 0; });
  if (!is_zero(a_only)) throw std::logic_error("s: [D_L, W] has a component on A");
  return hat_part(ext.pair, full);
}

Form s_direct(const LiePair& pair, const SuperConnection& DA, const Form& w) {
  const int rA = pair.rank_A(), q = pair.rank_Q(), rL = pair.rank_L();
  const LieAlgebroid& L = *pair.L;
  const auto& g = w.rows;
  // X_l: the A-form of blocks paired with the complement index l, grading-conjugated
  std::vector<Form> X(q, make_form(DA.alg(), rA, g, w.cols));
  for (const auto& [mask, c] : w.terms) {
    const unsigned cbits = mask & pair.complement_mask();
    if (arity(cbits) != 1) throw std::invalid_argument("s: not a hat form");
    const int l = __builtin_ctz(cbits) - rA;
    X[l].terms.emplace(mask & pair.a_mask(), c);
  }
  for (auto& x : X) x = grading_conjugate(x);
  Form out = make_form(w.alg, rL, g, w.cols);
  for (int n = 0; n < q; ++n) {
    Form Y = adjoint_apply(DA, X[n]);
    for (int l = 0; l < q; ++l) {
      if (is_zero(X[l])) continue;
      for (const auto& [deg, Xl] : split_total_degree(X[l])) {
        const Q sign = (deg & 1) ? Q(-1) : Q(1);
        for (int a = 0; a < rA; ++a) {
          const VecQ& coef = L.bracket(a, rA + n, rA + l);
          if (is_zero(coef)) continue;
          Form xi = scalar_to_identity(coordinate_one_form(DA.alg(), rA, a, coef), w.cols);
          Y = Y - sign * wedge(Xl, xi);
        }
      }
    }
    Form Wn = grading_conjugate(Y);
    const unsigned bit = 1u << (rA + n);
    for (const auto& [mask, c] : Wn.terms) add_term(out, mask | bit, c);
  }
  compact(out);
  return out;
}

SOperator build_s(const LiePair& pair, const SuperConnection& DA) {
  SOperator op;
  op.pair = pair;
  op.grading = DA.grading();
  const int M = DA.bundle.amplitude();
  const int span = M > 0 ? M - 1 : 0;
  op.pmin = -span;
  op.pmax = pair.rank_A() + span;
  for (int p = op.pmin; p <= op.pmax + 1; ++p) op.spaces.emplace(p, hat_space(pair, op.grading, p));
  for (int p = op.pmin; p <= op.pmax; ++p)
    op.s.emplace(p, operator_matrix(op.spaces.at(p), op.spaces.at(p + 1),
                                    [&](const Form& w) { return s_direct(pair, DA, w); }));
  op.squares_to_zero = true;
  for (int p = op.pmin; p < op.pmax; ++p) {
    SpMat sq = op.s.at(p + 1) * op.s.at(p);
    if (!is_zero(sq)) {
      op.squares_to_zero = false;
      op.failing_square.push_back(p);
    }
  }
  return op;
}

Form apply_s(const SOperator& op, const Form& w) {
  Form out = zero_hat(op.pair, op.grading);
  for (const auto& [deg, part] : split_total_degree(w)) {
    const int p = deg - 1;
    if (!op.s.count(p)) continue;
    out = out + unflatten(op.space(p + 1), ruthkit::apply(op.s.at(p), flatten(op.space(p), part)));
  }
  return out;
}

Form verify_cocycle(const SOperator& op, const Form& alpha) { return apply_s(op, alpha); }

ExactnessResult solve_exactness(const SOperator& op, const Form& alpha) {
  ExactnessResult r;
  r.closed = is_zero(apply_s(op, alpha));
  auto dims = cohomology_dims(op);
  r.h1 = dims.count(1) ? dims.at(1) : 0;
  if (!r.closed) return r;
  if (!op.s.count(0)) {
    r.exact = is_zero(alpha);
    if (r.exact) r.witness = zero_hat(op.pair, op.grading);
    return r;
  }
  SolveResult sol = solve(op.s.at(0), flatten(op.space(1), alpha));
  r.rank_s = sol.rank;
  r.rank_augmented = sol.rank_augmented;
  r.exact = sol.solvable;
  if (sol.solvable) r.witness = unflatten(op.space(0), sol.x);
  return r;
}

Extension compatible_extension(const Extension& ext, const SOperator& op, const Form& phi) {
  if (!(apply_s(op, phi) == atiyah_cocycle(ext)))
    throw std::invalid_argument("compatible_extension: s(phi) differs from the Atiyah cocycle");
  Extension out = ext;
  for (int k = 0; k <= ext.pair.rank_L(); ++k) out.DL.omega[k] = ext.DL.omega[k] - arity_part(phi, k);
  return out;
}

std::map<int, int> cohomology_dims(const SOperator& op) {
  std::map<int, int> ranks;
  std::vector<int> ps;
  for (const auto& [p, m] : op.s) ps.push_back(p);
  std::vector<int> rk(ps.size());
  parallel_for(static_cast<int>(ps.size()), [&](int i) { rk[i] = rank(op.s.at(ps[i])); });
  for (std::size_t i = 0; i < ps.size(); ++i) ranks[ps[i]] = rk[i];
  std::map<int, int> dims;
  for (int p = op.pmin; p <= op.pmax; ++p) {
    const int out = ranks.count(p) ? ranks[p] : 0;
    const int in = ranks.count(p - 1) ? ranks[p - 1] : 0;
    dims[p] = op.space(p).dim() - out - in;
  }
  return dims;
}

}  // namespace ruthkit
