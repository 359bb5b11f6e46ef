#pragma once

#include "ruthkit/atiyah.hpp"

#include <random>

namespace ruthkit {

// ---- Lie pair presets ----

LiePair abelian_pair(int rank_L, int rank_A, AlgebraPtr alg = nullptr);
/// (h, e, f) with A = span(h, e).
LiePair sl2_borel_pair();
/// (h, e, f) with A = span(h).
LiePair sl2_cartan_pair();
/// (z, x, y), [x, y] = z, A = span(z, x).
LiePair heisenberg_pair();
/// (b, a), [a, b] = b, A = span(b).
LiePair aff1_pair();
/// (x, y, z) with the cross-product bracket, A = span(x).
LiePair so3_pair();
/// Action algebroid over jet(1, order): e1 with zero anchor, e2 acting by x d/dx, [e1, e2] = lambda e1, A = span(e1).
LiePair jet_line_pair(int order, const Q& lambda);
/// Action algebroid of x d/dx, y d/dy, x d/dy over jet(2, order); A = span of the first `rank_A`.
LiePair jet_plane_pair(int order, int rank_A);

// ---- worked examples ----

/// Double K[1] + K in degrees (top-1, top) with del = id and omega^(2) = -R_nabla.
/// gamma has one matrix per frame element of `base`.
SuperConnection build_double(AlgebroidPtr base, const std::vector<CMat>& gamma, int top = 0);

struct DoubleResult {
  SuperConnection DA;
  Extension ext;  // the L-curvature extension of an L-connection seed
};

/// gamma_L: an L-connection on K; its first rank_A matrices define the A-connection.
DoubleResult build_double(const LiePair& pair, const std::vector<CMat>& gamma_L, int top = 0);

struct BasicConnectionData {
  std::vector<CMat> seed;                   // nabla_{e_j} on A, rank_A x rank_A, one per frame element of L
  std::vector<CMat> basic_L;                // nabla^bas on L, one per frame element of A
  std::vector<CMat> basic_A;                // nabla^bas on A, one per frame element of A
  std::map<unsigned, CMat> basic_curvature; // R^bas(a, b) : L -> A on masks of A
};

struct NormalResult {
  BasicConnectionData basic;
  SuperConnection DA;
  Extension ext;
  bool curvature_in_A = false;  // p o R^bas = 0
};

/// Normal complex A[1] -> L from an L-connection seed on A (zero when empty).
NormalResult build_normal(const LiePair& pair, const std::vector<CMat>& seed = {});

struct AdjointResult {
  SuperConnection DA;
  Extension ext;
  int isotropy_rank = 0;  // rank of ker(rho|_A) used as E_{-2}
  bool regular = false;   // ker(rho|_A) is a free summand and the complex resolves TM / rho(A)
};

/// Adjoint complex g(A)[2] -> A[1] -> TM over a jet algebra, TM = free module on d/dx_v.
/// seed[v] gives nabla_{d/dx_v} on A.
AdjointResult build_adjoint(const LiePair& pair, const std::vector<CMat>& seed = {});

// ---- random instances ----

using Rng = std::mt19937_64;

Q random_rational(Rng& rng, int bound = 3);
VecQ random_element(const CoeffAlgebra& a, Rng& rng, double density = 0.5, int bound = 3);
CMat random_cmat(const CoeffAlgebra& a, int rows, int cols, Rng& rng, double density = 0.5);

/// A pair from the preset catalog, optionally conjugated by a block-triangular basis change.
LiePair random_pair(Rng& rng, bool allow_jets = true);
/// Change of frame of L by a constant block-triangular matrix preserving A.
LiePair change_basis(const LiePair& p, const MatQ& P);

/// Flat A-module K in degree 0: trivial, Bott, or adjoint (over the point).
SuperConnection random_flat_module(const LiePair& p, Rng& rng);
/// Random degree-0 automorphism of E: invertible arity-0 part plus random higher components.
Form random_gauge(AlgebraPtr alg, int rank, const GradedBundle& E, Rng& rng, double density = 0.3);
/// Direct sum, with the frame reordered by degree.
SuperConnection direct_sum(const SuperConnection& a, const SuperConnection& b);
/// Regular resolution: K plus doubles in degrees (-1, 0) and optionally (-2, -1), then gauged.
SuperConnection random_resolution(const LiePair& p, Rng& rng, bool three_term = false);
/// Flat A-superconnection, not necessarily a resolution (doubles may sit in positive degrees).
SuperConnection random_ruth(const LiePair& p, Rng& rng);
/// An L-superconnection restricting to DA with random coefficients in complement directions.
SuperConnection random_extension_seed(const LiePair& p, const SuperConnection& DA, Rng& rng, double density = 0.4);
/// Random (not necessarily flat) superconnection over an algebroid.
SuperConnection random_superconnection(AlgebroidPtr base, const GradedBundle& E, Rng& rng, double density = 0.4);

}  // namespace ruthkit
