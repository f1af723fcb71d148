#pragma once

#include <vector>

#include "cosyflat/chart.hpp"

namespace cosyflat {

/// Christoffel symbols of the Levi-Civita connection at a point, as jets of
/// order 2 (one order below the metric), plus the metric jets they came
/// from.  gamma[k][i][j] holds the jet of the symbol with upper index k.
struct ConnectionJets {
  std::array<std::array<std::array<Jet3, 3>, 3>, 3> gamma;
  MetricJets g;
};

/// Plain-value view of a connection: symbols with their first and second
/// partials, all extracted from the jets.
struct ConnectionPoint {
  double gamma[3][3][3];        // [k][i][j]
  double dgamma[3][3][3][3];    // [a][k][i][j] = d_a Gamma^k_ij
  double d2gamma[3][3][3][3][3];  // [a][b][k][i][j]
};

ConnectionJets christoffel(const MetricField& g, const Vec3& p);
ConnectionPoint connection_point(const ConnectionJets& conn);

/// Curvature data at a point.  The curvature operator follows the
/// convention R(X,Y)Z = [nabla_X, nabla_Y]Z - nabla_[X,Y]Z, stored as
/// R[l][k][i][j] with R(e_i, e_j)e_k = R^l_kij e_l.  The Ricci tensor is
/// the trace Ric(Y,Z) = tr(X -> R(X,Y)Z); the sign of that contraction is
/// pinned by the adapted-frame cross-check fixtures.
struct CurvatureJets {
  std::array<std::array<std::array<std::array<Jet3, 3>, 3>, 3>, 3> R;  // order 1
  std::array<std::array<Jet3, 3>, 3> ric;
  Jet3 scal;
  std::array<std::array<Jet3, 3>, 3> q;  // Ricci operator Q = g^-1 Ric
  std::array<std::array<Jet3, 3>, 3> l;  // Weyl-Schouten L = Q - (s/4) Id
  double nabla_l[3][3][3];               // [i][k][j] = (nabla_i L)^k_j
};

struct CurvaturePoint {
  double R[3][3][3][3];
  double ric[3][3];
  double scal;
  double q[3][3];
  double l[3][3];
  double nabla_l[3][3][3];
};

/// Fills the R part from the connection.
CurvatureJets riemann(const ConnectionJets& conn);

/// Fills Ric, s, Q, L and nabla L; needs the metric jets for the index
/// raising and the covariant derivative.
void ricci_scalar_schouten(CurvatureJets& curv, const ConnectionJets& conn);

CurvaturePoint curvature_point(const CurvatureJets& curv);

/// Convenience: the full chain metric -> curvature at a point.
CurvatureJets curvature_at(const MetricField& g, const Vec3& p);

/// |(nabla_X L)Y - (nabla_Y L)X|_g for constant-coefficient X, Y at p.
/// Vanishing over all pairs is equivalent to local conformal flatness in
/// dimension three.
double cotton_residual(const MetricField& g, const Vec3& p, const Vec3& X, const Vec3& Y);

struct CottonScan {
  double raw = 0.0;         // max over coordinate basis pairs
  double normalized = 0.0;  // raw / (1 + |L|), |L| = sqrt(tr L^2)
  double schouten_norm = 0.0;
};

CottonScan cotton_scan(const MetricField& g, const Vec3& p);
CottonScan cotton_scan(const CurvatureJets& curv, const ConnectionJets& conn);

/// Weyl curvature in dimension n >= 4 on flattened arrays; provided for
/// product metrics g (+) Euclidean factors.  Index layout of R and of the
/// result: ((l*n + k)*n + i)*n + j.  Throws DimensionError for n < 4 (in
/// dimension three the tensor vanishes identically and carries no
/// information).
std::vector<double> weyl_tensor(int n, const std::vector<double>& R,
                                const std::vector<double>& ric,
                                const std::vector<double>& g_value, double scal);

/// (L_K g)(X, Y) = g(nabla_X K, Y) + g(X, nabla_Y K) for constant X, Y.
double killing_residual(const MetricField& g, const VectorFieldDef& K, const Vec3& p,
                        const Vec3& X, const Vec3& Y);

/// Max of the Killing residual over coordinate basis pairs.
double killing_scan(const MetricField& g, const VectorFieldDef& K, const Vec3& p);

/// Metric Laplacian in the minus-trace convention
/// Delta v = -tr(X -> nabla_X grad v); note most references use the
/// opposite sign.
double laplacian(const MetricField& g, const ScalarField& v, const Vec3& p);

/// Sectional curvature of the coordinate plane (i, j) at p.
double sectional_curvature(const MetricField& g, const Vec3& p, int i, int j);

}  // namespace cosyflat
