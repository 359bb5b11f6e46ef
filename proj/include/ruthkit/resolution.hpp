#pragma once

#include "ruthkit/atiyah.hpp"

#include <cstdint>
#include <optional>

namespace ruthkit {

/// P M Q = [[I_r, 0], [0, R]] using unit pivots only; R = 0 certifies constant rank.
struct UnitPivotForm {
  CMat P, Q;
  int rank = 0;
  bool remainder_zero = true;
};

UnitPivotForm unit_pivot_form(const CoeffAlgebra& a, const CMat& m);

struct ResolutionRefused : std::runtime_error {
  int degree;
  ResolutionRefused(int d, const std::string& why)
      : std::runtime_error("resolution refused at degree " + std::to_string(d) + ": " + why), degree(d) {}
};

/// A regular complex E_{-m} -> ... -> E_0 with its contraction onto K = H^0.
struct ResolutionData {
  AlgebraPtr alg;
  GradedBundle bundle;
  std::vector<int> grading;
  CMat del;
  int k = 0;     // rank of K
  CMat sigma;    // K -> E_0 (n x k)
  CMat phi;      // E -> K (k x n)
  CMat theta;    // degree -1 homotopy (n x n)
  std::map<int, int> del_rank;  // rank of del leaving degree i
};

/// Deterministic complement choice; with a seed, C and H are shifted by random kernel / boundary elements.
ResolutionData build_resolution(AlgebraPtr alg, const GradedBundle& E, const CMat& del,
                                std::optional<std::uint64_t> random_seed = {});
ResolutionData build_resolution(const SuperConnection& DA, std::optional<std::uint64_t> random_seed = {});

/// Side conditions and the homotopy identity; empty when all hold.
std::vector<AxiomFailure> validate_resolution(const ResolutionData& r);

struct EndCohomology {
  std::map<int, int> dims;  // H^j(End(E), [del, .]) over the rationals
  int end_K_dim = 0;        // dim End(K) over the rationals
  bool projection_iso = false;
};

EndCohomology end_cohomology(const ResolutionData& r);
/// phi f sigma.
CMat project_end(const ResolutionData& r, const CMat& f);

/// Frame matrices of the induced connection on K: phi (rho(e_a) sigma + Gamma(a) sigma).
/// With check set, throws unless the result is independent of the coset representative.
std::vector<CMat> quotient_connection(const SuperConnection& D, const ResolutionData& r, bool check = true);
SuperConnection quotient_superconnection(const SuperConnection& D, const ResolutionData& r, bool check = true);

/// Chevalley-Eilenberg differential on Ω(A, A°⊗End(K)) for an A-connection on K (K in degree 0),
/// written with the dual Bott connection on A°. Inputs and outputs are hat forms.
Form classical_d(const LiePair& pair, const std::vector<CMat>& gammaK, const Form& w);

struct ClassicalComplex {
  LiePair pair;
  std::vector<int> grading;
  std::map<int, FormSpace> spaces;
  std::map<int, SpMat> d;
};

ClassicalComplex build_classical(const LiePair& pair, const std::vector<CMat>& gammaK);
std::map<int, int> cohomology_dims(const ClassicalComplex& c);
/// Solves d(x) = w in degree p - 1.
std::optional<Form> solve_classical(const ClassicalComplex& c, const Form& w, int p);

struct ClassicalAtiyah {
  SuperConnection nablaK_A;
  SuperConnection nablaK_L;
  Form at;
  bool flat = false;
  bool closed = false;
};

ClassicalAtiyah classical_atiyah(const LiePair& pair, const SuperConnection& KA, const SuperConnection& KL);

struct BRSTComparison {
  std::map<int, int> dims_hat, dims_classical;
  bool dims_equal = false;
  Form beta;                  // s(beta) removes the arity-0 part of alpha
  Form projected;             // phi (alpha - s beta)^(1) sigma
  bool projection_matches = false;
  bool alpha_exact = false, at_exact = false;
  bool verdicts_agree = false;
  ClassicalAtiyah classical;
};

BRSTComparison compare_brst(const Extension& ext, const SOperator& op, const ResolutionData& r);

}  // namespace ruthkit
