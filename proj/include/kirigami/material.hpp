#pragma once

#include "kirigami/geometry.hpp"

namespace kirigami {

enum class PdeType { elliptic, degenerate, hyperbolic };

const char* pde_type_name(PdeType t);

// Rhombi-slit coefficient model:
//   mu1(xi) = cos(xi) - alpha*sin(xi),  mu2(xi) = cos(xi) + beta*sin(xi)
//   gamma12 = -mu1'/mu2,  gamma21 = mu2'/mu1
//   b_hat(xi) = diag(-gamma21, gamma12) with xi clamped to [xi_minus, xi_plus]
//   a_eff(xi) = diag(mu1, mu2) on the raw xi
//
// Construction validates that neither mu vanishes on the cut-off interval,
// then computes the uniform bound M and the Lipschitz constant K of b_hat
// by dense sampling (1e5 points, 1.01 safety factor). Immutable afterwards;
// all evaluations are pure.
class MaterialModel {
 public:
  MaterialModel(double alpha, double beta, double xi_minus, double xi_plus);

  double alpha() const { return alpha_; }
  double beta() const { return beta_; }
  double xi_minus() const { return xi_minus_; }
  double xi_plus() const { return xi_plus_; }
  double bound_M() const { return M_; }
  double lipschitz_K() const { return K_; }

  double mu1(double xi) const;
  double mu2(double xi) const;
  double dmu1(double xi) const;
  double dmu2(double xi) const;

  // Raw coefficient ratios; throw std::domain_error at a pole
  // (denominator magnitude below 1e-14).
  double gamma12(double xi) const;
  double gamma21(double xi) const;

  double clamp(double xi) const;

  Diag2d b_hat(double xi) const;
  // Derivative of b_hat entries w.r.t. xi: analytic inside the open cut-off
  // interval, zero outside; at the kinks returns the interior one-sided value.
  Diag2d db_hat_dxi(double xi) const;

  Diag2d a_eff(double xi) const;

  PdeType classify_type(double xi, double tol = 1e-12) const;

 private:
  // Analytic derivative of (-gamma21, gamma12), no clamping.
  Diag2d raw_derivative(double xi) const;

  double alpha_, beta_, xi_minus_, xi_plus_;
  double M_ = 0.0, K_ = 0.0;
};

// Canonical rotation matrix [[cos, -sin], [sin, cos]].
Mat2 rotation(double gamma);

}  // namespace kirigami
