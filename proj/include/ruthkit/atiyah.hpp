#pragma once

#include "ruthkit/ruth.hpp"

#include <map>
#include <optional>
#include <stdexcept>

namespace ruthkit {

/// An L-superconnection D_L restricting to the flat A-superconnection D_A.
struct Extension {
  LiePair pair;
  SuperConnection DA;
  SuperConnection DL;
};

struct ExtensionMismatch : std::runtime_error {
  int arity;
  unsigned mask;
  ExtensionMismatch(int k, unsigned m)
      : std::runtime_error("extension seed disagrees with D_A at arity " + std::to_string(k) + ", mask " +
                           std::to_string(m)),
        arity(k),
        mask(m) {}
};

/// Canonical extension (zero in complement directions) when no seed is given.
/// A seed's restriction to A is checked against D_A.
Extension extend(const LiePair& pair, const SuperConnection& DA, const std::optional<SuperConnection>& seed = {});

// Hat forms: Ω^k(A, A°⊗End_j(E)) is stored as L-forms supported on masks with exactly one
// complement index; the value at (a_1..a_k, l) sits on the sorted mask (A indices first).
// Hat degree = k + j = (L total degree) - 1.

bool is_hat_mask(const LiePair& pair, unsigned mask);
Form hat_part(const LiePair& pair, const Form& f);
FormSpace hat_space(const LiePair& pair, const std::vector<int>& grading, int p);
/// Hat degree of a homogeneous hat form.
std::optional<int> hat_degree(const Form& f);
Form zero_hat(const LiePair& pair, const std::vector<int>& grading);

/// alpha = one-complement part of the curvature of D_L.
Form atiyah_cocycle(const Extension& ext);

/// s(W) as the one-complement part of [D_L, W].
Form s_via_extension(const Extension& ext, const Form& w);
/// s(W) from D_A and the Bott connection alone.
Form s_direct(const LiePair& pair, const SuperConnection& DA, const Form& w);

struct SOperator {
  LiePair pair;
  std::vector<int> grading;
  int pmin = 0, pmax = -1;
  std::map<int, FormSpace> spaces;  // hat degree p
  std::map<int, SpMat> s;           // s_p : p -> p+1
  bool squares_to_zero = false;
  std::vector<int> failing_square;  // degrees p with s_{p+1} s_p != 0

  const FormSpace& space(int p) const { return spaces.at(p); }
};

SOperator build_s(const LiePair& pair, const SuperConnection& DA);
/// Applies s to a (possibly mixed) hat form using the assembled matrices.
Form apply_s(const SOperator& op, const Form& w);
Form verify_cocycle(const SOperator& op, const Form& alpha);

struct ExactnessResult {
  bool closed = false;  // precondition s(alpha) = 0
  bool exact = false;
  std::optional<Form> witness;  // s(witness) = alpha, hat degree 0
  int rank_s = 0;               // rank of s_0
  int rank_augmented = 0;       // rank of [s_0 | alpha]
  int h1 = 0;                   // dim H^1
};

ExactnessResult solve_exactness(const SOperator& op, const Form& alpha);

/// D_L - phi; throws std::invalid_argument unless s(phi) = alpha(ext).
Extension compatible_extension(const Extension& ext, const SOperator& op, const Form& phi);

std::map<int, int> cohomology_dims(const SOperator& op);

}  // namespace ruthkit
