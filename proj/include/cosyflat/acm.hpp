#pragma once

#include "cosyflat/curvature.hpp"

namespace cosyflat {

/// An almost contact metric structure (phi, xi, eta, g) given by component
/// fields on a single chart.  phi[i][j] holds the (1,1)-tensor component
/// with upper index i: phi(d_j) = phi^i_j d_i.
///
/// Structures are immutable after construction; every residual operation
/// below is pure and grid sweeps may run concurrently.
struct AcmStructure {
  std::array<std::array<ScalarField, 3>, 3> phi;
  VectorFieldDef xi;
  OneFormField eta;
  MetricField g;
  ChartBox domain;

  /// Fundamental form Phi(X,Y) = g(phi X, Y) as a two-form field.
  TwoFormField fundamental_form() const;
};

using PhiJets = std::array<std::array<Jet3, 3>, 3>;

/// Everything the pointwise operations need, evaluated once: connection,
/// phi/xi/eta jets, the shape operator A = -nabla xi (order-2 jets) and
/// tr(A^2).
struct AcmPointData {
  ConnectionJets conn;
  PhiJets phi;
  VecJet xi, eta;
  std::array<std::array<Jet3, 3>, 3> shape;
  Jet3 tr_a_sq;

  Mat3 metric_values() const;
  Mat3 shape_values() const;
  double lambda_value() const;  // sqrt(max(0, tr(A^2)/2))
};

AcmPointData acm_point(const AcmStructure& s, const Vec3& p);

/// Residuals of the defining relations: phi^2 = -Id + eta (x) xi,
/// eta(xi) = 1, g(phi X, phi Y) = g(X,Y) - eta(X) eta(Y), together with
/// closedness of eta and of the fundamental form.
struct CompatResiduals {
  double phi_square = 0.0;
  double eta_of_xi = 0.0;
  double metric_compat = 0.0;
  double d_eta = 0.0;
  double d_phi = 0.0;

  double algebraic_max() const;
  double closedness_max() const;
  double max() const;
};

CompatResiduals compat_residuals(const AcmStructure& s, const Vec3& p);

/// Shape operator values A^i_j = -(d_j xi^i + Gamma^i_jk xi^k).
Mat3 shape_operator(const AcmStructure& s, const Vec3& p);

/// Residuals of the structural properties of A: g-symmetry,
/// anticommutation with phi, tracelessness, A xi = 0, eta(A X) = 0 and the
/// {0, lambda, -lambda} spectrum pairing (via the annihilating polynomial
/// A^3 = lambda^2 A).
struct APropertyResiduals {
  double symmetry = 0.0;
  double anticommutation = 0.0;
  double trace = 0.0;
  double a_xi = 0.0;
  double eta_a = 0.0;
  double spectrum = 0.0;
  double lambda = 0.0;

  double max() const;
};

APropertyResiduals a_property_residuals(const AcmStructure& s, const Vec3& p);

/// Max-over-basis residuals of |nabla phi| (zero exactly for cosymplectic
/// structures), of the Kaehler-leaves identity
/// (nabla_X phi)Y = -g(phi A X, Y) xi + eta(Y) phi A X, and of the
/// fundamental identity
/// (nabla_{phi X} phi) phi Y + (nabla_X phi) Y - eta(Y) nabla_{phi X} xi = 0.
struct NablaPhiResiduals {
  double cosymplectic = 0.0;
  double kahler_leaves = 0.0;
  double fundamental = 0.0;
};

NablaPhiResiduals nabla_phi_residuals(const AcmStructure& s, const Vec3& p);

/// max over basis triples of |R(X,Y) phi Z - phi R(X,Y) Z|_g; vanishes
/// exactly when phi commutes with the curvature operator.
double curvature_phi_commutation(const AcmStructure& s, const Vec3& p);

inline constexpr double kDefaultLambdaMin = 1e-6;

/// Orthonormal frame adapted to the structure: E1 = xi, A E2 = -lambda E2,
/// A E3 = lambda E3 with lambda >= 0 and E3 = phi E2.  The residual sign
/// ambiguity is fixed by making the first non-negligible component of E2
/// positive.  Structure functions come from projecting the frame
/// commutators:
///   [E1,E2] = -lambda E2 + alpha E3
///   [E1,E3] = -alpha E2 + lambda E3
///   [E2,E3] = beta E2 - gamma E3
/// deriv[i][q] holds E_i applied to (lambda, alpha, beta, gamma), computed
/// from jets of the structure functions, never by differencing frames
/// across grid points.
struct AdaptedFrameData {
  Vec3 e1, e2, e3;
  double lambda = 0.0;
  double alpha = 0.0, beta = 0.0, gamma = 0.0;
  double deriv[3][4] = {};

  // construction diagnostics
  double gram_residual = 0.0;
  double phi_frame_residual = 0.0;
  double eigen_residual = 0.0;
  double comm_residual = 0.0;

  double diagnostics_max() const;
};

/// Throws DegenerateA when lambda < lambda_min (the frame is only unique
/// up to sign when lambda != 0, and eigenvector conditioning degrades as
/// lambda -> 0).
AdaptedFrameData adapted_frame(const AcmStructure& s, const Vec3& p,
                               double lambda_min = kDefaultLambdaMin);

/// The two scalar identities the Jacobi identity imposes on the structure
/// functions:
///   r1 = E2 lambda - E3 alpha + E1 gamma - alpha beta + gamma lambda
///   r2 = E3 lambda - E2 alpha - E1 beta - alpha gamma + beta lambda
struct JacobiResiduals {
  double r1 = 0.0;
  double r2 = 0.0;
};

JacobiResiduals jacobi_residuals(const AdaptedFrameData& f);

/// Ricci components in the adapted frame, expressed through the structure
/// functions and their frame derivatives.
struct AdaptedRicci {
  Mat3 s;
  double scal = 0.0;
};

AdaptedRicci ricci_adapted(const AdaptedFrameData& f);

/// Relative disagreement between ricci_adapted and the direct curvature
/// contraction transformed into the frame; the central consistency check
/// of the engine.
double ricci_crosscheck(const AcmStructure& s, const Vec3& p);

/// Residual of the constant-sectional-curvature equation for the f,u
/// family: 2 d2f/dz2 - d2(1/f)/dx2 - d((d ln u/dx)/f)/dx + kappa f^3/u^2.
/// f may use x and z; u only x; both must be positive at p.
double constsec_residual(const ExprPtr& f, const ExprPtr& u, double kappa, const Vec3& p);

/// Same residual for field-valued profiles (the kappa-family builders keep
/// f behind a quadrature or an integrated profile, not an expression).
double constsec_residual(const ScalarField& f, const ScalarField& u, double kappa,
                         const Vec3& p);

/// The kappa that would zero the equation at this point; constant across
/// the chart exactly when the family is conformally flat.
double constsec_kappa_pointwise(const ScalarField& f, const ScalarField& u,
                                const Vec3& p);

/// Verdict of the Killing-eigenfield characterization on a grid: kappa is
/// estimated as the median of 2 Laplacian(1/|K|) |K|^3, and the residual of
/// Laplacian(1/|K|) = (kappa/2)/|K|^3 is maximized over the grid.
///
/// `branch` records which eigenvalue branch K lies on (+1: A K = +lambda K).
/// The eigenvalue mu of K satisfies mu = -xi ln|K|; corollary_max is the
/// worst |mu + xi ln|K||, i.e. lambda agrees with |xi ln|K|| on the grid.
struct TheoremResult {
  double kappa_hat = 0.0;
  double max_residual = 0.0;
  double kappa_variance = 0.0;
  double eigen_residual_max = 0.0;
  double killing_residual_max = 0.0;
  int branch = 0;
  double corollary_max = 0.0;
  std::vector<double> point_residuals;  // aligned with the input grid
};

TheoremResult estimate_kappa_and_theorem_residual(const AcmStructure& s,
                                                  const VectorFieldDef& K,
                                                  const std::vector<Vec3>& grid,
                                                  double precondition_tol = 1e-9,
                                                  double lambda_min = kDefaultLambdaMin);

}  // namespace cosyflat
