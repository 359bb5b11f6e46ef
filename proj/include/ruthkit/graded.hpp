#pragma once

#include "ruthkit/linalg.hpp"
#include "ruthkit/scalars.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <map>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

namespace ruthkit {

using AlgebraPtr = std::shared_ptr<const CoeffAlgebra>;

struct BundleComponent {
  int degree = 0;
  int rank = 0;
  std::vector<std::string> names;
};

/// Split graded free module, components sorted by increasing degree.
struct GradedBundle {
  std::vector<BundleComponent> components;

  int total_rank() const;
  int min_degree() const;
  int max_degree() const;
  /// max - min + 1, or 0 for the zero bundle.
  int amplitude() const;
  int rank_at(int degree) const;
  /// Position of the first basis element of degree `degree` in the flat basis.
  int offset(int degree) const;
  /// Degree of every flat basis element.
  std::vector<int> grading() const;
  /// rank of End_j(E) as a free module.
  int end_rank(int j) const;
  std::vector<std::string> names() const;
};

GradedBundle make_bundle(const std::vector<std::pair<int, int>>& degree_rank);

/// Matrix with coefficient-algebra entries, stored as one rational matrix per algebra basis element.
struct CMat {
  std::vector<MatQ> c;
  int rows() const { return c.empty() ? 0 : static_cast<int>(c[0].rows()); }
  int cols() const { return c.empty() ? 0 : static_cast<int>(c[0].cols()); }
};

CMat cmat_zero(int N, int rows, int cols);
/// Constant matrix (entries multiples of the unit).
CMat cmat_constant(const CoeffAlgebra& a, const MatQ& m);
CMat cmat_identity(const CoeffAlgebra& a, int n);
bool is_zero(const CMat& m);
bool operator==(const CMat& x, const CMat& y);
CMat cmat_mul(const CoeffAlgebra& a, const CMat& x, const CMat& y);
void cmat_add(CMat& x, const CMat& y, const Q& s = Q(1));
VecQ cmat_entry(const CMat& m, int i, int j);
void cmat_set_entry(CMat& m, int i, int j, const VecQ& v);
/// Multiply every entry by the algebra element f.
CMat cmat_scale(const CoeffAlgebra& a, const CMat& m, const VecQ& f);
/// The C-linear map as a rational matrix on flattened coordinates (index = row * N + m).
MatQ cmat_flatten_map(const CoeffAlgebra& a, const CMat& m);
/// Inverse of a square CMat, if it exists.
std::optional<CMat> cmat_inverse(const CoeffAlgebra& a, const CMat& m);
CMat cmat_block(const CMat& m, int r0, int c0, int nr, int nc);

/// Alternating form on an algebroid of rank `rank` with CMat values.
/// Coefficients live on strictly increasing multi-indices encoded as bit masks;
/// the stored value is the value on the sorted tuple.
struct Form {
  AlgebraPtr alg;
  int rank = 0;
  std::vector<int> rows;  // degree of each target basis element
  std::vector<int> cols;  // degree of each source basis element
  std::map<unsigned, CMat> terms;

  int N() const { return alg->dim(); }
};

inline int arity(unsigned mask) { return __builtin_popcount(mask); }
/// Sign of the shuffle sorting the concatenation of I then J (I, J disjoint).
int shuffle_sign(unsigned I, unsigned J);
std::vector<int> mask_indices(unsigned mask);
unsigned indices_mask(const std::vector<int>& idx);

Form make_form(AlgebraPtr alg, int rank, std::vector<int> rows, std::vector<int> cols);
Form zero_like(const Form& f);
void add_term(Form& f, unsigned mask, const CMat& m, const Q& s = Q(1));
void add_entry(Form& f, unsigned mask, int i, int j, const VecQ& v);
/// Removes zero terms.
void compact(Form& f);
bool is_zero(const Form& f);
bool operator==(const Form& a, const Form& b);
Form operator+(const Form& a, const Form& b);
Form operator-(const Form& a, const Form& b);
Form operator*(const Q& s, const Form& f);
Form operator-(const Form& f);

/// (eta (x) A) ^ (omega (x) B) = (-1)^{i q} (eta ^ omega) (x) (A B), i = degree of A, q = arity of omega.
Form wedge(const Form& a, const Form& b);
/// Graded commutator with respect to total degree, distributed over homogeneous parts.
Form commutator(const Form& a, const Form& b);
/// Same, with the total degrees of a and b given (both must be homogeneous).
Form commutator(const Form& a, int deg_a, const Form& b, int deg_b);

/// Total degree of entry (i, j) on mask I: |I| + rows[i] - cols[j].
std::map<int, Form> split_total_degree(const Form& f);
/// Total degree if homogeneous and nonzero.
std::optional<int> total_degree(const Form& f);
Form arity_part(const Form& f, int k);
Form filter_masks(const Form& f, const std::function<bool(unsigned)>& keep);
/// Entries (i, j) multiplied by (-1)^{rows[i] - cols[j]}.
Form grading_conjugate(const Form& f);
/// Same masks on an algebroid of larger rank.
Form embed(const Form& f, int new_rank);
/// Multiplies by an algebra element.
Form scale(const Form& f, const VecQ& g);

Form identity_form(AlgebraPtr alg, int rank, const std::vector<int>& grading);
/// Scalar form s tensored with the identity of a graded module.
Form scalar_to_identity(const Form& s, const std::vector<int>& grading);
/// The 1-form xi^a with coefficient g.
Form coordinate_one_form(AlgebraPtr alg, int rank, int a, const VecQ& g);
Form constant_form(AlgebraPtr alg, int rank, std::vector<int> rows, std::vector<int> cols, const CMat& m);

// ---- flattening ----

struct FormCoord {
  unsigned mask;
  int row, col, m;
};

/// Finite rational coordinate space of forms, with a bijective index map.
struct FormSpace {
  AlgebraPtr alg;
  int rank = 0;
  std::vector<int> rows, cols;
  std::vector<FormCoord> coords;
  std::unordered_map<std::uint64_t, int> index;

  int dim() const { return static_cast<int>(coords.size()); }
  int find(unsigned mask, int row, int col, int m) const;
};

using CoordFilter = std::function<bool(unsigned mask, int row, int col)>;
FormSpace make_space(AlgebraPtr alg, int rank, std::vector<int> rows, std::vector<int> cols, const CoordFilter& keep);
/// Throws std::out_of_range if f has a nonzero coefficient outside the space.
SpVec flatten(const FormSpace& s, const Form& f);
Form unflatten(const FormSpace& s, const SpVec& v);
Form basis_form(const FormSpace& s, int i);
/// Matrix of a rational-linear map between form spaces, assembled column by column.
SpMat operator_matrix(const FormSpace& dom, const FormSpace& cod, const std::function<Form(const Form&)>& f);

}  // namespace ruthkit
