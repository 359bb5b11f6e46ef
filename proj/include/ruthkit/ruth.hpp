#pragma once

#include "ruthkit/lie_model.hpp"

#include <map>
#include <optional>

namespace ruthkit {

/// Superconnection on a graded bundle over a Lie algebroid.
/// omega[k] is the arity-k component: omega[0] = del, omega[1] = connection 1-form, omega[k>=2] higher forms.
struct SuperConnection {
  AlgebroidPtr base;
  GradedBundle bundle;
  std::vector<Form> omega;

  int rank() const { return base->rank; }
  std::vector<int> grading() const { return bundle.grading(); }
  AlgebraPtr alg() const { return base->alg; }
};

/// Zero superconnection with omega[0..rank] allocated.
SuperConnection make_superconnection(AlgebroidPtr base, GradedBundle bundle);
/// nabla_{e_a} s_j = sum_i gamma[a](i, j) s_i.
void set_connection(SuperConnection& D, const std::vector<CMat>& gamma);
void set_del(SuperConnection& D, const CMat& del);
CMat get_del(const SuperConnection& D);
std::vector<CMat> get_connection(const SuperConnection& D);
/// Sum of all components, a mixed form of total degree 1.
Form total_form(const SuperConnection& D);

/// Structural checks: del^2 = 0, total degree +1 on every component, arity placement.
std::vector<AxiomFailure> validate_structure(const SuperConnection& D);

/// D(u) for an E-valued form (cols = {0}).
Form apply(const SuperConnection& D, const Form& u);
/// [D, theta] on End(E)-valued forms.
Form adjoint_apply(const SuperConnection& D, const Form& theta);
/// D^2 as an End(E)-valued form: d omega + omega ^ omega.
Form curvature(const SuperConnection& D);
/// Arity components a^(0), ..., a^(rank) of the curvature.
std::vector<Form> curvature_components(const SuperConnection& D);

struct FlatnessCertificate {
  std::vector<Form> residuals;  // per arity
  std::vector<int> failing_arities;
  bool flat = false;
};

FlatnessCertificate validate_flat(const SuperConnection& D);

/// Coordinate space of E-valued forms.
FormSpace section_space(const SuperConnection& D);
/// Matrix of D on the flattened E-valued forms.
SpMat operator_matrix(const SuperConnection& D);

/// Inverse of a total-degree-0 mixed form with invertible arity-0 part.
std::optional<Form> form_inverse(const Form& phi);

/// omega' = phi ^ omega ^ phi^{-1} - d(phi) ^ phi^{-1}: the superconnection making phi a morphism.
SuperConnection gauge(const SuperConnection& D, const Form& phi);

/// Induced map on End-valued (or hat) forms for an isomorphism phi: E -> F of superconnections.
struct Transport {
  Form phi;
  Form phi_inv;
  /// phi ^ w ^ phi^{-1}, with phi lifted to the rank of w.
  Form operator()(const Form& w) const;
};

/// Verifies that phi^(0) is invertible and that phi intertwines D_E and D_F; throws otherwise.
Transport transport_isomorphism(const Form& phi, const SuperConnection& DE, const SuperConnection& DF);

}  // namespace ruthkit
