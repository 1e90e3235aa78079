#include "kirigami/material.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "kirigami/parallel.hpp"

namespace kirigami {

namespace {

constexpr double kPoleTol = 1e-14;
constexpr int kPoleSamples = 10000;
constexpr int kBoundSamples = 100000;
constexpr double kSafety = 1.01;

}  // namespace

const char* pde_type_name(PdeType t) {
  switch (t) {
    case PdeType::elliptic: return "elliptic";
    case PdeType::degenerate: return "degenerate";
    case PdeType::hyperbolic: return "hyperbolic";
  }
  return "?";
}

double MaterialModel::mu1(double xi) const { return std::cos(xi) - alpha_ * std::sin(xi); }
double MaterialModel::mu2(double xi) const { return std::cos(xi) + beta_ * std::sin(xi); }
double MaterialModel::dmu1(double xi) const { return -std::sin(xi) - alpha_ * std::cos(xi); }
double MaterialModel::dmu2(double xi) const { return -std::sin(xi) + beta_ * std::cos(xi); }

double MaterialModel::gamma12(double xi) const {
  const double den = mu2(xi);
  if (std::abs(den) < kPoleTol)
    throw std::domain_error("gamma12: pole, mu2 vanishes at xi = " + std::to_string(xi));
  return -dmu1(xi) / den;
}

double MaterialModel::gamma21(double xi) const {
  const double den = mu1(xi);
  if (std::abs(den) < kPoleTol)
    throw std::domain_error("gamma21: pole, mu1 vanishes at xi = " + std::to_string(xi));
  return dmu2(xi) / den;
}

double MaterialModel::clamp(double xi) const {
  return std::min(std::max(xi, xi_minus_), xi_plus_);
}

Diag2d MaterialModel::b_hat(double xi) const {
  const double xc = clamp(xi);
  return {-dmu2(xc) / mu1(xc), -dmu1(xc) / mu2(xc)};
}

Diag2d MaterialModel::raw_derivative(double xi) const {
  const double m1 = mu1(xi), m2 = mu2(xi);
  const double d1 = dmu1(xi), d2 = dmu2(xi);
  const double dd1 = -std::cos(xi) + alpha_ * std::sin(xi);  // mu1''
  const double dd2 = -std::cos(xi) - beta_ * std::sin(xi);   // mu2''
  const double dgamma21 = (dd2 * m1 - d2 * d1) / (m1 * m1);
  const double dgamma12 = -(dd1 * m2 - d1 * d2) / (m2 * m2);
  return {-dgamma21, dgamma12};
}

Diag2d MaterialModel::db_hat_dxi(double xi) const {
  // b_hat is constant outside the cut-off (and everywhere when the interval
  // degenerates to a point); at the kinks use the interior one-sided value.
  if (xi < xi_minus_ || xi > xi_plus_ || xi_minus_ == xi_plus_) return {0.0, 0.0};
  return raw_derivative(xi);
}

Diag2d MaterialModel::a_eff(double xi) const { return {mu1(xi), mu2(xi)}; }

PdeType MaterialModel::classify_type(double xi, double tol) const {
  const Diag2d b = b_hat(xi);
  const double det = b.d11 * b.d22;
  if (det > tol) return PdeType::elliptic;
  if (det < -tol) return PdeType::hyperbolic;
  return PdeType::degenerate;
}

Mat2 rotation(double gamma) {
  const double c = std::cos(gamma), s = std::sin(gamma);
  return {c, -s, s, c};
}

MaterialModel::MaterialModel(double alpha, double beta, double xi_minus, double xi_plus)
    : alpha_(alpha), beta_(beta), xi_minus_(xi_minus), xi_plus_(xi_plus) {
  if (alpha_ > 0.0) throw std::invalid_argument("material: alpha must be <= 0");
  if (beta_ < 0.0) throw std::invalid_argument("material: beta must be >= 0");
  if (xi_minus_ < -M_PI_2 || xi_minus_ > 0.0)
    throw std::invalid_argument("material: xi_minus must lie in [-pi/2, 0]");
  if (xi_plus_ < 0.0 || xi_plus_ > M_PI_2)
    throw std::invalid_argument("material: xi_plus must lie in [0, pi/2]");

  // mu1 = sqrt(1+a^2) cos(xi + atan(a)), mu2 = sqrt(1+b^2) cos(xi - atan(b)):
  // shifted sinusoids whose zeros are known in closed form. Reject cut-off
  // intervals containing one; the dense sampling below is a belt-and-braces
  // recheck of the same condition.
  const double zero1 = M_PI_2 - std::atan(alpha_);  // mu1 zeros: zero1 + k*pi
  const double zero2 = M_PI_2 + std::atan(beta_);   // mu2 zeros: zero2 + k*pi
  auto interval_has_zero = [&](double base) {
    for (int k = -2; k <= 2; ++k) {
      const double z = base + k * M_PI;
      if (z >= xi_minus_ && z <= xi_plus_) return z;
    }
    return std::nan("");
  };
  if (const double z = interval_has_zero(zero2); !std::isnan(z))
    throw std::invalid_argument(
        "material: cut-off interval contains a pole of Gamma12 (mu2 vanishes near xi = " +
        std::to_string(z) + ")");
  if (const double z = interval_has_zero(zero1); !std::isnan(z))
    throw std::invalid_argument(
        "material: cut-off interval contains a pole of Gamma21 (mu1 vanishes near xi = " +
        std::to_string(z) + ")");

  const double span = xi_plus_ - xi_minus_;
  for (int i = 0; i <= kPoleSamples; ++i) {
    const double xi = xi_minus_ + span * i / kPoleSamples;
    if (std::abs(mu2(xi)) < kPoleTol)
      throw std::invalid_argument("material: mu2 vanishes near xi = " + std::to_string(xi));
    if (std::abs(mu1(xi)) < kPoleTol)
      throw std::invalid_argument("material: mu1 vanishes near xi = " + std::to_string(xi));
  }

  // K is defined through the raw Gamma derivatives over the interval, so a
  // single-point cut-off still reports the local slope.
  double sup_b = 0.0, sup_db = 0.0;
#pragma omp parallel for reduction(max : sup_b, sup_db) num_threads(thread_count())
  for (int i = 0; i <= kBoundSamples; ++i) {
    const double xi = xi_minus_ + span * i / kBoundSamples;
    const Diag2d b = b_hat(xi);
    sup_b = std::max({sup_b, std::abs(b.d11), std::abs(b.d22)});
    const Diag2d db = raw_derivative(xi);
    sup_db = std::max({sup_db, std::abs(db.d11), std::abs(db.d22)});
  }
  M_ = kSafety * sup_b;
  K_ = kSafety * sup_db;
}

}  // namespace kirigami
