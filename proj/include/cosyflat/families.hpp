#pragma once

#include "cosyflat/acm.hpp"

namespace cosyflat {

/// Dense samples of the separable-solution profile t(z) obeying
/// t'' = -kappa/(2 C^2) t^3, together with t'.  The quantity
/// (t')^2 + kappa t^4 / (4 C^2) is a first integral with value D/(4 C^2).
struct OdeSolution {
  std::vector<double> z, t, tp;
  double h = 0.0;
  double kappa = 0.0;
  double c = 1.0;
  double d = 1.0;

  double conserved() const { return d / (4.0 * c * c); }
  /// max over samples of |(t')^2 + kappa t^4/(4C^2) - D/(4C^2)|
  double first_integral_drift() const;

  /// C1 cubic Hermite evaluation of t and t'; throws InterpolationRange
  /// outside the solved interval.
  double eval_t(double zq) const;
  double eval_tp(double zq) const;

  /// Jet of z -> t(z): value and slope interpolated, second and third
  /// derivatives supplied by the equation itself.
  Jet3 t_jet(const Vec3& p) const;
};

/// Classical fixed-step RK4 on t'' = -kappa/(2C^2) t^3 from z0 to zmax.
/// The initial slope comes from the first integral:
/// t'(z0) = sign * sqrt(D - kappa t0^4) / (2C), which requires
/// D - kappa t0^4 > 0.  Integration stops with LeftAdmissibleRegion when
/// t <= 0 or D - kappa t^4 <= 0.
OdeSolution solve_t_ode(double kappa, double c, double d, double t0, int sign,
                        double z0, double zmax, double h);

/// z(t) by adaptive Simpson quadrature of +-2C / sqrt(D - kappa tau^4),
/// the closed-form inverse of the profile on monotone stretches.
double ode_quadrature_z(double kappa, double c, double d, double t_from, double t_to,
                        int sign, double tol = 1e-10);

/// Adaptive Simpson integration to absolute tolerance.
double integrate_simpson(const std::function<double(double)>& f, double a, double b,
                         double tol = 1e-12);

// --- structure builders ------------------------------------------------
//
// Every builder self-verifies: the returned structure has passed the
// compatibility axioms on a coarse probe grid, and construction throws
// instead of returning a broken structure.

/// g = z^2 dx^2 + (e^{2ax}/z^2) dy^2 + dz^2 with xi = d/dz, eta = dz,
/// phi dx = (z^2/e^{ax}) dy, phi dy = -(e^{ax}/z^2) dx.
/// The domain must stay away from z = 0; the excluded half-space z <= 0.1
/// is installed by default.
AcmStructure build_z2(double a, ChartBox domain);

/// The generalized family g = f^2 dx^2 + (u^2/f^2) dy^2 + dz^2 for
/// expression-valued f(x,z) > 0, u(x) > 0.
AcmStructure build_fu(const ExprPtr& f, const ExprPtr& u, ChartBox domain);

/// Same family with f and u supplied as prebuilt fields (used by the other
/// builders); `probe_positivity` still validates signs on the probe grid.
AcmStructure build_fu_fields(const ScalarField& f, const ScalarField& u,
                             ChartBox domain);

/// The flat-sectional solution family
/// g = [u^2 (Az+B)^2 / (C I + D)^2] dx^2 + [(C I + D)^2 / (Az+B)^2] dy^2 + dz^2
/// where I(x) = integral of u from the lower x bound of the domain
/// (the antiderivative constant is absorbed into D).
AcmStructure build_kappa0(const ExprPtr& u, double A, double B, double C, double D,
                          ChartBox domain);

/// The constant-sectional-curvature family with f(x,z) = t(z) u(x) / C,
/// t interpolated from a solved profile.  `sol` must cover the domain's
/// z-range.
AcmStructure build_kappa_nonzero(double kappa, double C, double D, const ExprPtr& u,
                                 const OdeSolution& sol, ChartBox domain);

/// Product of a constant-curvature surface with an interval: leaf metric
/// (dx^2 + dy^2) / (1 + (c/4)(x^2+y^2))^2, xi = d/dz, phi the leaf
/// rotation.  The shape operator vanishes identically.
AcmStructure build_product(double leaf_curvature, ChartBox domain);

/// Probes the axioms on a coarse grid inside the domain; throws BuildError
/// when any residual exceeds the bound.
void self_verify(const AcmStructure& s, double bound = 1e-10);

}  // namespace cosyflat
