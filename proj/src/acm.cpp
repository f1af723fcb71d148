#include "cosyflat/acm.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace cosyflat {

namespace {

}  // namespace

TwoFormField AcmStructure::fundamental_form() const {
  // Phi_ij = phi^a_i g_aj on the ordered pairs (0,1), (0,2), (1,2)
  auto coeff = [this](int i, int j) {
    return ScalarField([this_copy = *this, i, j](const Vec3& p) {
      Jet3 acc;
      for (int a = 0; a < 3; ++a)
        acc = acc + this_copy.phi[a][i](p) * this_copy.g.at(a, j)(p);
      return acc;
    });
  };
  TwoFormField f;
  f.coeff[0] = coeff(0, 1);
  f.coeff[1] = coeff(0, 2);
  f.coeff[2] = coeff(1, 2);
  return f;
}

Mat3 AcmPointData::metric_values() const {
  Mat3 m;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m[i][j] = conn.g.comp[i][j].v;
  return m;
}

Mat3 AcmPointData::shape_values() const {
  Mat3 m;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m[i][j] = shape[i][j].v;
  return m;
}

double AcmPointData::lambda_value() const {
  return std::sqrt(std::max(0.0, tr_a_sq.v * 0.5));
}

AcmPointData acm_point(const AcmStructure& s, const Vec3& p) {
  AcmPointData d;
  d.conn = christoffel(s.g, p);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) d.phi[i][j] = s.phi[i][j](p);
  d.xi = s.xi.eval(p);
  d.eta = s.eta.eval(p);
  // A^i_j = -(d_j xi^i + Gamma^i_jk xi^k)
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      Jet3 acc = partial(d.xi[i], j);
      for (int k = 0; k < 3; ++k) acc = acc + d.conn.gamma[i][j][k] * d.xi[k];
      d.shape[i][j] = -acc;
    }
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) d.tr_a_sq = d.tr_a_sq + d.shape[i][j] * d.shape[j][i];
  return d;
}

double CompatResiduals::algebraic_max() const {
  return std::max({phi_square, eta_of_xi, metric_compat});
}
double CompatResiduals::closedness_max() const { return std::max(d_eta, d_phi); }
double CompatResiduals::max() const { return std::max(algebraic_max(), closedness_max()); }

CompatResiduals compat_residuals(const AcmStructure& s, const Vec3& p) {
  CompatResiduals out;
  PhiJets phi;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) phi[i][j] = s.phi[i][j](p);
  const VecJet xi = s.xi.eval(p);
  const VecJet eta = s.eta.eval(p);
  const MetricJets g = metric_eval(s.g, p);

  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double phi2 = 0.0;
      for (int a = 0; a < 3; ++a) phi2 += phi[i][a].v * phi[a][j].v;
      const double idm = i == j ? 1.0 : 0.0;
      out.phi_square = std::max(out.phi_square,
                                std::abs(phi2 + idm - xi[i].v * eta[j].v));
    }

  double pairing = -1.0;
  for (int i = 0; i < 3; ++i) pairing += eta[i].v * xi[i].v;
  out.eta_of_xi = std::abs(pairing);

  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double gphi = 0.0;
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) gphi += phi[a][i].v * g.comp[a][b].v * phi[b][j].v;
      out.metric_compat =
          std::max(out.metric_compat,
                   std::abs(gphi - g.comp[i][j].v + eta[i].v * eta[j].v));
    }

  const VecJet deta = exterior_derivative(s.eta, p);
  for (int k = 0; k < 3; ++k) out.d_eta = std::max(out.d_eta, std::abs(deta[k].v));
  out.d_phi = std::abs(exterior_derivative(s.fundamental_form(), p).v);
  return out;
}

Mat3 shape_operator(const AcmStructure& s, const Vec3& p) {
  return acm_point(s, p).shape_values();
}

double APropertyResiduals::max() const {
  return std::max({symmetry, anticommutation, trace, a_xi, eta_a, spectrum});
}

APropertyResiduals a_property_residuals(const AcmStructure& s, const Vec3& p) {
  const AcmPointData d = acm_point(s, p);
  const Mat3 a = d.shape_values();
  const Mat3 g = d.metric_values();
  APropertyResiduals out;
  out.lambda = d.lambda_value();

  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double ga = 0.0, ag = 0.0;
      for (int m = 0; m < 3; ++m) {
        ga += a[m][i] * g[m][j];  // g(A e_i, e_j)
        ag += g[i][m] * a[m][j];  // g(e_i, A e_j)
      }
      out.symmetry = std::max(out.symmetry, std::abs(ga - ag));

      double anti = 0.0;
      for (int m = 0; m < 3; ++m) anti += d.phi[i][m].v * a[m][j] + a[i][m] * d.phi[m][j].v;
      out.anticommutation = std::max(out.anticommutation, std::abs(anti));
    }

  out.trace = std::abs(a[0][0] + a[1][1] + a[2][2]);

  Vec3 axi{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) axi[i] += a[i][j] * d.xi[j].v;
  out.a_xi = norm_g(g, axi);

  for (int j = 0; j < 3; ++j) {
    double e = 0.0;
    for (int i = 0; i < 3; ++i) e += d.eta[i].v * a[i][j];
    out.eta_a = std::max(out.eta_a, std::abs(e));
  }

  // spectrum {0, lambda, -lambda}  <=>  A^3 = lambda^2 A
  const double l2 = out.lambda * out.lambda;
  Mat3 a2{}, a3{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int m = 0; m < 3; ++m) a2[i][j] += a[i][m] * a[m][j];
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int m = 0; m < 3; ++m) a3[i][j] += a2[i][m] * a[m][j];
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      out.spectrum = std::max(out.spectrum, std::abs(a3[i][j] - l2 * a[i][j]));
  return out;
}

namespace {

// (nabla_i phi)^k_j values from order >= 1 phi jets and connection values
void nabla_phi_values(const AcmPointData& d, double out[3][3][3]) {
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k)
      for (int j = 0; j < 3; ++j) {
        double acc = d.phi[k][j].d(i);
        for (int m = 0; m < 3; ++m)
          acc += d.conn.gamma[k][i][m].v * d.phi[m][j].v -
                 d.conn.gamma[m][i][j].v * d.phi[k][m].v;
        out[i][k][j] = acc;
      }
}

}  // namespace

NablaPhiResiduals nabla_phi_residuals(const AcmStructure& s, const Vec3& p) {
  const AcmPointData d = acm_point(s, p);
  const Mat3 g = d.metric_values();
  const Mat3 a = d.shape_values();
  double np[3][3][3];
  nabla_phi_values(d, np);

  NablaPhiResiduals out;
  // phi A as a matrix
  Mat3 phia{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int m = 0; m < 3; ++m) phia[i][j] += d.phi[i][m].v * a[m][j];

  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      Vec3 w{np[i][0][j], np[i][1][j], np[i][2][j]};
      out.cosymplectic = std::max(out.cosymplectic, norm_g(g, w));

      // Kaehler leaves: (nabla_i phi)e_j + g(phi A e_i, e_j) xi - eta_j phi A e_i
      double gphia = 0.0;
      for (int m = 0; m < 3; ++m) gphia += phia[m][i] * g[m][j];
      Vec3 kl;
      for (int k = 0; k < 3; ++k)
        kl[k] = w[k] + gphia * d.xi[k].v - d.eta[j].v * phia[k][i];
      out.kahler_leaves = std::max(out.kahler_leaves, norm_g(g, kl));

      // fundamental identity:
      // (nabla_{phi e_i} phi) phi e_j + (nabla_i phi) e_j - eta_j nabla_{phi e_i} xi
      // with nabla_{phi e_i} xi = -(phi e_i)^a A e_a
      Vec3 fi;
      for (int k = 0; k < 3; ++k) {
        double t1 = 0.0;
        for (int aa = 0; aa < 3; ++aa)
          for (int b = 0; b < 3; ++b) t1 += d.phi[aa][i].v * np[aa][k][b] * d.phi[b][j].v;
        double t3 = 0.0;
        for (int aa = 0; aa < 3; ++aa) t3 += d.phi[aa][i].v * a[k][aa];
        fi[k] = t1 + w[k] + d.eta[j].v * t3;
      }
      out.fundamental = std::max(out.fundamental, norm_g(g, fi));
    }
  return out;
}

double curvature_phi_commutation(const AcmStructure& s, const Vec3& p) {
  const AcmPointData d = acm_point(s, p);
  const CurvatureJets curv = riemann(d.conn);
  const Mat3 g = d.metric_values();
  double worst = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) {
        Vec3 v{};
        for (int l = 0; l < 3; ++l) {
          double acc = 0.0;
          for (int m = 0; m < 3; ++m)
            acc += curv.R[l][m][i][j].v * d.phi[m][k].v -
                   d.phi[l][m].v * curv.R[m][k][i][j].v;
          v[l] = acc;
        }
        worst = std::max(worst, norm_g(g, v));
      }
  return worst;
}

double AdaptedFrameData::diagnostics_max() const {
  return std::max({gram_residual, phi_frame_residual, eigen_residual, comm_residual});
}

namespace {

Jet3 dot_g_jets(const MetricJets& g, const VecJet& a, const VecJet& b) {
  Jet3 acc;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) acc = acc + g.comp[i][j] * a[i] * b[j];
  return acc;
}

VecJet bracket_jets(const VecJet& x, const VecJet& y) {
  VecJet out;
  for (int i = 0; i < 3; ++i) {
    Jet3 acc;
    for (int j = 0; j < 3; ++j)
      acc = acc + x[j] * partial(y[i], j) - y[j] * partial(x[i], j);
    out[i] = acc;
  }
  return out;
}

Vec3 values_of(const VecJet& v) { return {v[0].v, v[1].v, v[2].v}; }

}  // namespace

AdaptedFrameData adapted_frame(const AcmStructure& s, const Vec3& p, double lambda_min) {
  const AcmPointData d = acm_point(s, p);
  if (!(d.tr_a_sq.v > 2.0 * lambda_min * lambda_min))
    throw DegenerateA("shape operator eigenvalue below lambda_min; adapted frame "
                      "is not uniquely determined");
  const Jet3 lambda = sqrt(d.tr_a_sq * 0.5);

  // spectral projector onto the -lambda eigenspace: (A - lambda) A / (2 lambda^2)
  std::array<std::array<Jet3, 3>, 3> proj;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      Jet3 acc;
      for (int m = 0; m < 3; ++m) acc = acc + d.shape[i][m] * d.shape[m][j];
      acc = acc - lambda * d.shape[i][j];
      proj[i][j] = acc / (d.tr_a_sq);  // 2 lambda^2 = tr A^2
    }

  // seed with the coordinate direction the projector moves the most
  int seed = 0;
  double best = -1.0;
  for (int k = 0; k < 3; ++k) {
    double n2 = 0.0;
    for (int i = 0; i < 3; ++i) n2 += proj[i][k].v * proj[i][k].v;
    if (n2 > best) {
      best = n2;
      seed = k;
    }
  }

  VecJet e2{proj[0][seed], proj[1][seed], proj[2][seed]};
  const Jet3 n2 = dot_g_jets(d.conn.g, e2, e2);
  if (!(n2.v > 1e-20)) throw DegenerateA("eigenvector projection collapsed");
  const Jet3 inv_norm = reciprocal(sqrt(n2));
  for (auto& c : e2) c = c * inv_norm;

  // deterministic sign: first non-negligible component of E2 positive
  double top = 0.0;
  for (const auto& c : e2) top = std::max(top, std::abs(c.v));
  for (int i = 0; i < 3; ++i) {
    if (std::abs(e2[i].v) > 1e-8 * top) {
      if (e2[i].v < 0.0)
        for (auto& c : e2) c = -c;
      break;
    }
  }

  VecJet e3;
  for (int i = 0; i < 3; ++i) {
    Jet3 acc;
    for (int a = 0; a < 3; ++a) acc = acc + d.phi[i][a] * e2[a];
    e3[i] = acc;
  }
  const VecJet& e1 = d.xi;

  const VecJet b12 = bracket_jets(e1, e2);
  const VecJet b13 = bracket_jets(e1, e3);
  const VecJet b23 = bracket_jets(e2, e3);

  const Jet3 alpha = dot_g_jets(d.conn.g, b12, e3);
  const Jet3 beta = dot_g_jets(d.conn.g, b23, e2);
  const Jet3 gamma = -dot_g_jets(d.conn.g, b23, e3);

  AdaptedFrameData out;
  out.e1 = values_of(e1);
  out.e2 = values_of(e2);
  out.e3 = values_of(e3);
  out.lambda = lambda.v;
  out.alpha = alpha.v;
  out.beta = beta.v;
  out.gamma = gamma.v;

  const std::array<const Jet3*, 4> funcs{&lambda, &alpha, &beta, &gamma};
  const std::array<const VecJet*, 3> frame{&e1, &e2, &e3};
  for (int i = 0; i < 3; ++i)
    for (int q = 0; q < 4; ++q) {
      double acc = 0.0;
      for (int a = 0; a < 3; ++a) acc += (*frame[i])[a].v * funcs[q]->d(a);
      out.deriv[i][q] = acc;
    }

  // diagnostics
  const Mat3 g = d.metric_values();
  const Mat3 a = d.shape_values();
  const std::array<Vec3, 3> ev{out.e1, out.e2, out.e3};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const double idm = i == j ? 1.0 : 0.0;
      out.gram_residual = std::max(out.gram_residual,
                                   std::abs(dot_g(g, ev[i], ev[j]) - idm));
    }
  {
    Vec3 r2{}, r3{};
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        r2[i] += a[i][j] * out.e2[j];
        r3[i] += a[i][j] * out.e3[j];
      }
    for (int i = 0; i < 3; ++i) {
      r2[i] += out.lambda * out.e2[i];
      r3[i] -= out.lambda * out.e3[i];
    }
    out.eigen_residual =
        std::max(norm_g(g, r2), norm_g(g, r3)) / (1.0 + out.lambda);
  }
  {
    // phi E2 = E3 is exact by construction; check phi E3 = -E2 instead
    Vec3 r{};
    for (int i = 0; i < 3; ++i) {
      double acc = out.e2[i];
      for (int a2 = 0; a2 < 3; ++a2) acc += d.phi[i][a2].v * out.e3[a2];
      r[i] = acc;
    }
    out.phi_frame_residual = norm_g(g, r);
  }
  {
    auto comm = [&](const VecJet& b, const Vec3& expect) {
      Vec3 r{b[0].v - expect[0], b[1].v - expect[1], b[2].v - expect[2]};
      return norm_g(g, r);
    };
    Vec3 e12, e13, e23;
    for (int i = 0; i < 3; ++i) {
      e12[i] = -out.lambda * out.e2[i] + out.alpha * out.e3[i];
      e13[i] = -out.alpha * out.e2[i] + out.lambda * out.e3[i];
      e23[i] = out.beta * out.e2[i] - out.gamma * out.e3[i];
    }
    out.comm_residual =
        std::max({comm(b12, e12), comm(b13, e13), comm(b23, e23)});
  }
  return out;
}

JacobiResiduals jacobi_residuals(const AdaptedFrameData& f) {
  // indices into deriv: 0 = lambda, 1 = alpha, 2 = beta, 3 = gamma
  JacobiResiduals out;
  out.r1 = f.deriv[1][0] - f.deriv[2][1] + f.deriv[0][3] - f.alpha * f.beta +
           f.gamma * f.lambda;
  out.r2 = f.deriv[2][0] - f.deriv[1][1] - f.deriv[0][2] - f.alpha * f.gamma +
           f.beta * f.lambda;
  return out;
}

AdaptedRicci ricci_adapted(const AdaptedFrameData& f) {
  const double e1l = f.deriv[0][0], e2l = f.deriv[1][0], e3l = f.deriv[2][0];
  const double e2g = f.deriv[1][3], e3b = f.deriv[2][2];
  AdaptedRicci out;
  out.s[0][0] = -2.0 * f.lambda * f.lambda;
  out.s[0][1] = e2l + 2.0 * f.gamma * f.lambda;
  out.s[0][2] = -(e3l + 2.0 * f.beta * f.lambda);
  out.s[1][1] = -e1l - e2g - e3b - f.beta * f.beta - f.gamma * f.gamma;
  out.s[1][2] = -2.0 * f.alpha * f.lambda;
  out.s[2][2] = e1l - e2g - e3b - f.beta * f.beta - f.gamma * f.gamma;
  out.s[1][0] = out.s[0][1];
  out.s[2][0] = out.s[0][2];
  out.s[2][1] = out.s[1][2];
  out.scal = out.s[0][0] + out.s[1][1] + out.s[2][2];
  return out;
}

double ricci_crosscheck(const AcmStructure& s, const Vec3& p) {
  const AdaptedFrameData f = adapted_frame(s, p);
  const AdaptedRicci predicted = ricci_adapted(f);

  const CurvatureJets curv = curvature_at(s.g, p);
  const std::array<Vec3, 3> e{f.e1, f.e2, f.e3};
  Mat3 direct{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double acc = 0.0;
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) acc += e[i][a] * e[j][b] * curv.ric[a][b].v;
      direct[i][j] = acc;
    }

  double scale = 0.0, diff = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      scale = std::max(scale, std::abs(direct[i][j]));
      diff = std::max(diff, std::abs(direct[i][j] - predicted.s[i][j]));
    }
  return diff / std::max(scale, 1e-12);
}

namespace {

// left-hand side 2 f_zz - (1/f)_xx - ((ln u)_x / f)_x and the factor f^3/u^2
std::pair<double, double> constsec_parts(const Jet3& fj, const Jet3& uj) {
  if (!(fj.v > 0.0) || !(uj.v > 0.0))
    throw DomainError("f and u must be positive on the domain");
  const double t1 = 2.0 * fj.d(2, 2);
  const double t2 = reciprocal(fj).d(0, 0);
  const Jet3 lnu_x = partial(uj, 0) / uj;
  const double t3 = (lnu_x / fj).d(0);
  const double scale = std::pow(fj.v, 3.0) / (uj.v * uj.v);
  return {t1 - t2 - t3, scale};
}

}  // namespace

double constsec_residual(const ScalarField& f, const ScalarField& u, double kappa,
                         const Vec3& p) {
  const auto [lhs, scale] = constsec_parts(f(p), u(p));
  return std::abs(lhs + kappa * scale);
}

double constsec_kappa_pointwise(const ScalarField& f, const ScalarField& u,
                                const Vec3& p) {
  const auto [lhs, scale] = constsec_parts(f(p), u(p));
  return -lhs / scale;
}

double constsec_residual(const ExprPtr& f, const ExprPtr& u, double kappa,
                         const Vec3& p) {
  if (!uses_only(f, 0b101)) throw DomainError("f may only use x and z");
  if (!uses_only(u, 0b001)) throw DomainError("u may only use x");
  return constsec_residual(ScalarField::from_expr(f), ScalarField::from_expr(u),
                           kappa, p);
}

TheoremResult estimate_kappa_and_theorem_residual(const AcmStructure& s,
                                                  const VectorFieldDef& K,
                                                  const std::vector<Vec3>& grid,
                                                  double precondition_tol,
                                                  double lambda_min) {
  if (grid.empty()) throw PreconditionFailed("empty evaluation grid");

  const ScalarField inv_len([s, K](const Vec3& q) {
    const MetricJets g = metric_eval(s.g, q);
    const VecJet kj = K.eval(q);
    Jet3 len2;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) len2 = len2 + g.comp[i][j] * kj[i] * kj[j];
    return reciprocal(sqrt(len2));
  });

  TheoremResult out;
  std::vector<double> kappas, laps, inv_len3;
  kappas.reserve(grid.size());

  for (const Vec3& p : grid) {
    const AcmPointData d = acm_point(s, p);
    const double lambda = d.lambda_value();
    if (!(lambda > lambda_min))
      throw PreconditionFailed(
          "shape operator vanishes at a grid point (A != 0 everywhere hypothesis)");

    const Mat3 g = d.metric_values();
    const Mat3 a = d.shape_values();
    const VecJet kj = K.eval(p);
    const Vec3 kv = values_of(kj);
    const double klen = norm_g(g, kv);
    if (!(klen > 1e-12))
      throw PreconditionFailed("K vanishes at a grid point (|K| > 0 hypothesis)");

    Vec3 ak{};
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) ak[i] += a[i][j] * kv[j];
    const double mu = dot_g(g, ak, kv) / (klen * klen);
    Vec3 eig_res;
    for (int i = 0; i < 3; ++i) eig_res[i] = ak[i] - mu * kv[i];
    out.eigen_residual_max =
        std::max(out.eigen_residual_max, norm_g(g, eig_res) / klen);
    out.killing_residual_max =
        std::max(out.killing_residual_max, killing_scan(s.g, K, p));
    if (out.branch == 0) out.branch = mu >= 0.0 ? 1 : -1;

    // corollary: the eigenvalue of K equals -xi ln|K|
    const Jet3 len_jet = reciprocal(inv_len(p));
    double xi_ln_k = 0.0;
    for (int a2 = 0; a2 < 3; ++a2) xi_ln_k += d.xi[a2].v * len_jet.d(a2) / len_jet.v;
    out.corollary_max = std::max(out.corollary_max, std::abs(mu + xi_ln_k));

    const double lap = laplacian(s.g, inv_len, p);
    laps.push_back(lap);
    inv_len3.push_back(1.0 / (klen * klen * klen));
    kappas.push_back(2.0 * lap * klen * klen * klen);
  }

  if (out.eigen_residual_max > precondition_tol)
    throw PreconditionFailed("K is not an eigenfield of the shape operator");
  if (out.killing_residual_max > precondition_tol)
    throw PreconditionFailed("K is not a Killing field");

  std::vector<double> sorted = kappas;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  out.kappa_hat = n % 2 == 1 ? sorted[n / 2]
                             : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);

  out.point_residuals.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double r = std::abs(laps[i] - 0.5 * out.kappa_hat * inv_len3[i]);
    out.point_residuals.push_back(r);
    out.max_residual = std::max(out.max_residual, r);
  }

  const double mean = std::accumulate(kappas.begin(), kappas.end(), 0.0) / n;
  double var = 0.0;
  for (double k : kappas) var += (k - mean) * (k - mean);
  out.kappa_variance = var / n;
  return out;
}

}  // namespace cosyflat
