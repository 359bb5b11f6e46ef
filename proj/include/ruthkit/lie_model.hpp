#pragma once

#include "ruthkit/graded.hpp"

#include <memory>
#include <string>
#include <vector>

namespace ruthkit {

/// Lie algebroid of rank r over a coefficient algebra, in a fixed global frame e_0..e_{r-1}.
struct LieAlgebroid {
  AlgebraPtr alg;
  int rank = 0;
  // c[(i * rank + j) * rank + k]: coefficient of e_k in [e_i, e_j]
  std::vector<VecQ> c;
  // anchor[i][v]: coefficient of d/dx_v in rho(e_i)
  std::vector<std::vector<VecQ>> anchor;
  std::vector<std::string> names;

  // derived by finalize()
  std::vector<MatQ> rho;  // rho(e_i) acting on algebra coordinates
  std::vector<Form> dxi;  // d(xi^I) as scalar forms, indexed by mask

  const VecQ& bracket(int i, int j, int k) const { return c[(i * rank + j) * rank + k]; }
  VecQ& bracket(int i, int j, int k) { return c[(i * rank + j) * rank + k]; }
  int N() const { return alg->dim(); }
};

using AlgebroidPtr = std::shared_ptr<const LieAlgebroid>;

LieAlgebroid make_algebroid(AlgebraPtr alg, int rank);
/// Sets [e_i, e_j] = -[e_j, e_i] coefficient of e_k.
void set_bracket(LieAlgebroid& L, int i, int j, int k, const VecQ& v);
/// Recomputes rho and the differentials of the coordinate forms.
void finalize(LieAlgebroid& L);
/// The first `r` frame elements, assumed closed under the bracket.
LieAlgebroid restrict_algebroid(const LieAlgebroid& L, int r);

std::vector<AxiomFailure> validate_algebroid(const LieAlgebroid& L);

/// A = span(e_0..e_{sub_rank-1}) inside L.
struct LiePair {
  AlgebroidPtr L;
  AlgebroidPtr A;
  int sub_rank = 0;

  int rank_L() const { return L->rank; }
  int rank_A() const { return sub_rank; }
  int rank_Q() const { return L->rank - sub_rank; }
  /// Mask bits of the complement frame elements.
  unsigned complement_mask() const { return ((1u << L->rank) - 1) & ~((1u << sub_rank) - 1); }
  unsigned a_mask() const { return (1u << sub_rank) - 1; }
};

LiePair make_pair(LieAlgebroid L, int sub_rank);
std::vector<AxiomFailure> validate_lie_pair(const LieAlgebroid& L, int sub_rank);

// ---- section calculus ----

using Section = std::vector<VecQ>;

Section frame_section(const LieAlgebroid& L, int i);
Section zero_section(const LieAlgebroid& L);
/// rho(X) applied to a function.
VecQ anchor_apply(const LieAlgebroid& L, const Section& X, const VecQ& f);
Section bracket_sections(const LieAlgebroid& L, const Section& X, const Section& Y);
bool is_zero(const Section& s);

/// Entrywise Chevalley-Eilenberg differential of a matrix-valued form (no connection term).
Form d_form(const LieAlgebroid& L, const Form& f);
/// Applies rho(e_a) to every coefficient.
CMat rho_apply(const LieAlgebroid& L, int a, const CMat& m);

// ---- Bott connection and splitting ----

/// Connection matrices of the Bott connection: entry (m, l) of bott[a] is the coefficient of
/// the class of e_{rA+m} in p([e_a, e_{rA+l}]).
std::vector<CMat> bott_connection(const LiePair& p);
/// Dual connection on A° in the dual frame: matrices -bott[a]^T.
std::vector<CMat> dual_bott(const LiePair& p);

struct Splitting {
  MatQ sigma;  // L/A -> L, rank_L x rank_Q
  MatQ tau;    // L -> A, rank_A x rank_L
  MatQ proj;   // L -> L/A, rank_Q x rank_L
  MatQ incl;   // A -> L, rank_L x rank_A
};

/// Basis-aligned splitting of 0 -> A -> L -> L/A -> 0.
Splitting choose_splitting(const LiePair& p);

}  // namespace ruthkit
