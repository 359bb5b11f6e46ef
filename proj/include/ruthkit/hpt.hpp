#pragma once

#include "ruthkit/resolution.hpp"

#include <string>

namespace ruthkit {

/// Strong deformation retract of (V, dV) onto (W, dW), as rational matrices on flat coordinates.
struct Contraction {
  SpMat dV, dW;
  SpMat sigma;  // W -> V
  SpMat phi;    // V -> W
  SpMat theta;  // V -> V, degree -1
  std::vector<int> degV, degW;
};

Contraction identity_contraction(const SpMat& d, const std::vector<int>& deg);

/// phi_sigma, homotopy, theta_squared, theta_sigma, phi_theta, plus the chain-map conditions.
std::vector<AxiomFailure> validate_contraction(const Contraction& c);

/// Extra differential on V with a descending filtration: d theta must raise the level.
struct Perturbation {
  SpMat d;
  std::vector<int> level;  // per coordinate of V
};

struct PerturbationRefused : std::runtime_error {
  int row, col;
  PerturbationRefused(const std::string& why, int r, int c)
      : std::runtime_error("perturbation refused: " + why), row(r), col(c) {}
};

struct PerturbedContraction {
  Contraction c;          // differentials dV + d and delta_d
  int series_length = 0;  // number of nonzero terms of sum (-d theta)^k
  int bound = 0;          // number of filtration steps
};

PerturbedContraction perturb(const Contraction& c, const Perturbation& p);

/// dim ker d_p - rank d_{p-1} per degree, for a degree +1 operator on a graded coordinate space.
std::map<int, int> graded_cohomology(const SpMat& d, const std::vector<int>& deg);

/// The contraction of (Omega(A, E), del) onto (Omega(A, K), 0) and the perturbation D_A - del.
struct ResolutionContraction {
  SuperConnection DK;  // quotient superconnection on K
  FormSpace V, W;
  Contraction c;
  Perturbation p;
};

ResolutionContraction resolution_contraction(const SuperConnection& DA, const ResolutionData& r);

/// Form versions of the perturbed maps, as End-valued A-forms of mixed arity.
struct TransferForms {
  Form vartheta;  // E -> E
  Form varsigma;  // K -> E
  Form phi_d;     // E -> K
};

/// Throws std::logic_error if the perturbed maps are not Omega(A)-linear.
TransferForms transfer_forms(const ResolutionContraction& rc, const PerturbedContraction& pc);

/// delta_d against the differential of the quotient connection.
bool delta_matches_quotient(const ResolutionContraction& rc, const PerturbedContraction& pc);

struct HomTransfer {
  std::string method;  // "direct" or "perturbed"
  FormSpace V, W;      // hat forms of E and of K
  Contraction c;
  std::vector<AxiomFailure> failures;
  std::map<int, int> dims_V, dims_W;
  bool dims_preserved = false;
  Form transferred;          // phi_hom(alpha)
  bool class_matches = false;  // [phi_hom(alpha)] = [at_K]
  bool differential_matches = false;  // W differential equals d^K
};

/// The direct formulas are tried first; `perturbed_only` skips them and uses the fallback construction.
HomTransfer hom_transfer(const Extension& ext, const ResolutionData& r, const TransferForms& tf,
                         bool perturbed_only = false);

struct HptAnalysis {
  ResolutionContraction rc;
  std::vector<AxiomFailure> base_failures;
  PerturbedContraction pc;
  std::vector<AxiomFailure> perturbed_failures;
  bool delta_matches = false;
  std::map<int, int> dims_V, dims_W;  // (Omega(A,E), D_A) and (Omega(A,K), delta_d)
  HomTransfer hom;
};

HptAnalysis analyze_hpt(const Extension& ext, const ResolutionData& r);

}  // namespace ruthkit
