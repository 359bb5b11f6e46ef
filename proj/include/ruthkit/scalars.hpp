#pragma once

#include <gmpxx.h>
#include <Eigen/Core>

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace Eigen {
template <>
struct NumTraits<mpq_class> : GenericNumTraits<mpq_class> {
  typedef mpq_class Real;
  typedef mpq_class NonInteger;
  typedef mpq_class Nested;
  typedef mpq_class Literal;
  enum {
    IsInteger = 0,
    IsSigned = 1,
    IsComplex = 0,
    RequireInitialization = 1,
    ReadCost = 10,
    AddCost = 40,
    MulCost = 80
  };
  static inline Real epsilon() { return 0; }
  static inline Real dummy_precision() { return 0; }
  static inline int digits10() { return 0; }
};
}  // namespace Eigen

namespace ruthkit {

using Q = mpq_class;
using MatQ = Eigen::Matrix<Q, Eigen::Dynamic, Eigen::Dynamic>;
using VecQ = Eigen::Matrix<Q, Eigen::Dynamic, 1>;

/// Parses "p/q" or "p". Throws std::invalid_argument on malformed input or zero denominator.
Q parse_rational(const std::string& s);
/// Canonical text form: "p/q", or "p" when the denominator is 1.
std::string format_rational(const Q& x);

bool is_zero(const MatQ& m);
bool is_zero(const VecQ& v);

/// C += A * B, skipping zero entries of A and B.
void accumulate_product(MatQ& C, const MatQ& A, const MatQ& B, const Q& scale = Q(1));

/// Finite-dimensional commutative coefficient algebra with its derivation module.
struct CoeffAlgebra {
  std::vector<std::string> basis;
  std::vector<std::vector<int>> exponents;  // monomial exponents (jet algebras)
  int n_vars = 0;
  int order = 0;
  int unit_index = 0;
  // mult[a](c, b): coefficient of basis c in (basis a) * (basis b)
  std::vector<MatQ> mult;
  // Q-basis of the derivation module, each an N x N matrix acting on coordinates
  std::vector<MatQ> derivations;
  // formal partial derivatives on canonical representatives (jet algebras only)
  std::vector<MatQ> partials;
  // sparse product table derived from mult: table[a * N + b] = {(c, coeff)}
  std::vector<std::vector<std::pair<int, Q>>> table;

  int dim() const { return static_cast<int>(basis.size()); }
  bool is_point() const { return basis.size() == 1; }
  void rebuild_table();
};

CoeffAlgebra point_algebra();
/// Q[x_1..x_n] modulo monomials of degree > order. n_vars == 0 gives the point algebra.
CoeffAlgebra jet_algebra(int n_vars, int order);

struct AxiomFailure {
  std::string axiom;
  std::vector<int> witness;
};
std::vector<AxiomFailure> validate_algebra(const CoeffAlgebra& a);

/// Solves for every Q-linear map satisfying the Leibniz rule on basis pairs.
std::vector<MatQ> compute_derivations(const CoeffAlgebra& a);

VecQ unit_element(const CoeffAlgebra& a);
VecQ basis_element(const CoeffAlgebra& a, int i);
VecQ constant(const CoeffAlgebra& a, const Q& x);
VecQ multiply(const CoeffAlgebra& a, const VecQ& x, const VecQ& y);
/// Matrix of left multiplication by x.
MatQ mult_matrix(const CoeffAlgebra& a, const VecQ& x);
std::optional<VecQ> inverse(const CoeffAlgebra& a, const VecQ& x);
inline bool is_unit(const CoeffAlgebra& a, const VecQ& x) { return inverse(a, x).has_value(); }

/// Index of the monomial with the given exponent vector, or -1.
int monomial_index(const CoeffAlgebra& a, const std::vector<int>& exps);

}  // namespace ruthkit
