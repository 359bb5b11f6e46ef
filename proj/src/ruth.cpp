#include "ruthkit/ruth.hpp"

#include <stdexcept>

namespace ruthkit {

SuperConnection make_superconnection(AlgebroidPtr base, GradedBundle bundle) {
  SuperConnection D;
  D.base = std::move(base);
  D.bundle = std::move(bundle);
  const auto g = D.bundle.grading();
  for (int k = 0; k <= D.base->rank; ++k) D.omega.push_back(make_form(D.base->alg, D.base->rank, g, g));
  return D;
}

void set_connection(SuperConnection& D, const std::vector<CMat>& gamma) {
  Form f = zero_like(D.omega[1]);
  for (int a = 0; a < D.rank(); ++a) add_term(f, 1u << a, gamma[a]);
  compact(f);
  D.omega[1] = f;
}

void set_del(SuperConnection& D, const CMat& del) {
  Form f = zero_like(D.omega[0]);
  add_term(f, 0u, del);
  compact(f);
  D.omega[0] = f;
}

CMat get_del(const SuperConnection& D) {
  const int n = D.bundle.total_rank();
  auto it = D.omega[0].terms.find(0u);
  return it == D.omega[0].terms.end() ? cmat_zero(D.alg()->dim(), n, n) : it->second;
}

std::vector<CMat> get_connection(const SuperConnection& D) {
  const int n = D.bundle.total_rank();
  std::vector<CMat> out;
  for (int a = 0; a < D.rank(); ++a) {
    auto it = D.omega.size() > 1 ? D.omega[1].terms.find(1u << a) : D.omega[0].terms.end();
    out.push_back(D.omega.size() > 1 && it != D.omega[1].terms.end() ? it->second
                                                                     : cmat_zero(D.alg()->dim(), n, n));
  }
  return out;
}

Form total_form(const SuperConnection& D) {
  Form t = zero_like(D.omega[0]);
  for (const auto& w : D.omega)
    for (const auto& [m, c] : w.terms) add_term(t, m, c);
  compact(t);
  return t;
}

std::vector<AxiomFailure> validate_structure(const SuperConnection& D) {
  std::vector<AxiomFailure> out;
  const auto g = D.grading();
  for (std::size_t k = 0; k < D.omega.size(); ++k) {
    for (const auto& [mask, c] : D.omega[k].terms) {
      if (arity(mask) != static_cast<int>(k)) {
        out.push_back({"arity", {static_cast<int>(k), static_cast<int>(mask)}});
        continue;
      }
      for (int i = 0; i < c.rows(); ++i)
        for (int j = 0; j < c.cols(); ++j)
          if (!is_zero(cmat_entry(c, i, j)) && static_cast<int>(k) + g[i] - g[j] != 1)
            out.push_back({"total_degree", {static_cast<int>(k), static_cast<int>(mask), i, j}});
    }
  }
  CMat del = get_del(D);
  CMat sq = cmat_mul(*D.alg(), del, del);
  for (int i = 0; i < sq.rows(); ++i)
    for (int j = 0; j < sq.cols(); ++j)
      if (!is_zero(cmat_entry(sq, i, j))) out.push_back({"del_squared", {i, j}});
  return out;
}

Form apply(const SuperConnection& D, const Form& u) {
  return d_form(*D.base, u) + wedge(total_form(D), u);
}

Form adjoint_apply(const SuperConnection& D, const Form& theta) {
  return d_form(*D.base, theta) + commutator(total_form(D), theta);
}

Form curvature(const SuperConnection& D) {
  Form w = total_form(D);
  return d_form(*D.base, w) + wedge(w, w);
}

std::vector<Form> curvature_components(const SuperConnection& D) {
  Form a = curvature(D);
  std::vector<Form> out;
  for (int k = 0; k <= D.rank(); ++k) out.push_back(arity_part(a, k));
  return out;
}

FlatnessCertificate validate_flat(const SuperConnection& D) {
  FlatnessCertificate cert;
  cert.residuals = curvature_components(D);
  for (std::size_t k = 0; k < cert.residuals.size(); ++k)
    if (!is_zero(cert.residuals[k])) cert.failing_arities.push_back(static_cast<int>(k));
  cert.flat = cert.failing_arities.empty();
  return cert;
}

FormSpace section_space(const SuperConnection& D) {
  return make_space(D.alg(), D.rank(), D.grading(), {0}, [](unsigned, int, int) { return true; });
}

SpMat operator_matrix(const SuperConnection& D) {
  FormSpace s = section_space(D);
  Form w = total_form(D);
  return operator_matrix(s, s, [&](const Form& u) { return d_form(*D.base, u) + wedge(w, u); });
}

std::optional<Form> form_inverse(const Form& phi) {
  auto it = phi.terms.find(0u);
  if (it == phi.terms.end()) return std::nullopt;
  auto inv0 = cmat_inverse(*phi.alg, it->second);
  if (!inv0) return std::nullopt;
  Form p0inv = make_form(phi.alg, phi.rank, phi.cols, phi.rows);
  add_term(p0inv, 0u, *inv0);
  Form nil = filter_masks(phi, [](unsigned m) { return m != 0; });
  // (phi0 + N)^{-1} = sum_k (-phi0^{-1} N)^k phi0^{-1}, nilpotent by arity
  Form step = -wedge(p0inv, nil);
  Form term = p0inv;
  Form sum = p0inv;
  for (int k = 0; k < phi.rank; ++k) {
    term = wedge(step, term);
    if (is_zero(term)) break;
    sum = sum + term;
  }
  return sum;
}

SuperConnection gauge(const SuperConnection& D, const Form& phi) {
  auto inv = form_inverse(phi);
  if (!inv) throw std::invalid_argument("gauge: arity-0 part is not invertible");
  Form w = total_form(D);
  Form wp = wedge(wedge(phi, w), *inv) - wedge(d_form(*D.base, phi), *inv);
  SuperConnection out = make_superconnection(D.base, D.bundle);
  for (int k = 0; k <= D.rank(); ++k) out.omega[k] = arity_part(wp, k);
  return out;
}

Form Transport::operator()(const Form& w) const {
  return wedge(wedge(embed(phi, w.rank), w), embed(phi_inv, w.rank));
}

Transport transport_isomorphism(const Form& phi, const SuperConnection& DE, const SuperConnection& DF) {
  auto inv = form_inverse(phi);
  if (!inv) throw std::invalid_argument("transport: arity-0 component is not invertible");
  Form defect = d_form(*DE.base, phi) + wedge(total_form(DF), phi) - wedge(phi, total_form(DE));
  if (!is_zero(defect)) throw std::invalid_argument("transport: map does not intertwine the superconnections");
  return Transport{phi, *inv};
}

}  // namespace ruthkit
