#include "cosyflat/families.hpp"

#include <algorithm>
#include <cmath>

namespace cosyflat {

double OdeSolution::first_integral_drift() const {
  const double target = conserved();
  double drift = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    const double e = tp[i] * tp[i] + kappa * std::pow(t[i], 4.0) / (4.0 * c * c);
    drift = std::max(drift, std::abs(e - target));
  }
  return drift;
}

namespace {

struct HermiteCell {
  std::size_t k;
  double s;   // normalized abscissa in [0,1]
  double dz;  // cell width
};

HermiteCell locate(const std::vector<double>& z, double zq) {
  if (z.size() < 2) throw InterpolationRange("profile has fewer than two samples");
  const double lo = z.front(), hi = z.back();
  const double pad = 1e-12 * (1.0 + std::abs(hi - lo));
  if (zq < lo - pad || zq > hi + pad)
    throw InterpolationRange("query z outside the solved interval");
  const double clamped = std::clamp(zq, lo, hi);
  auto it = std::upper_bound(z.begin(), z.end(), clamped);
  std::size_t k = it == z.begin() ? 0 : static_cast<std::size_t>(it - z.begin()) - 1;
  if (k >= z.size() - 1) k = z.size() - 2;
  const double dz = z[k + 1] - z[k];
  return {k, (clamped - z[k]) / dz, dz};
}

double hermite(double y0, double m0, double y1, double m1, double s, double dz) {
  const double s2 = s * s, s3 = s2 * s;
  return (2 * s3 - 3 * s2 + 1) * y0 + (s3 - 2 * s2 + s) * dz * m0 +
         (-2 * s3 + 3 * s2) * y1 + (s3 - s2) * dz * m1;
}

}  // namespace

double OdeSolution::eval_t(double zq) const {
  const HermiteCell cell = locate(z, zq);
  const std::size_t k = cell.k;
  return hermite(t[k], tp[k], t[k + 1], tp[k + 1], cell.s, cell.dz);
}

double OdeSolution::eval_tp(double zq) const {
  const HermiteCell cell = locate(z, zq);
  const std::size_t k = cell.k;
  // slopes of t' at the cell ends come from the equation itself
  const double a0 = -kappa / (2.0 * c * c) * std::pow(t[k], 3.0);
  const double a1 = -kappa / (2.0 * c * c) * std::pow(t[k + 1], 3.0);
  return hermite(tp[k], a0, tp[k + 1], a1, cell.s, cell.dz);
}

Jet3 OdeSolution::t_jet(const Vec3& p) const {
  const double zq = p[2];
  const double tv = eval_t(zq);
  const double tpv = eval_tp(zq);
  const double coeff = -kappa / (2.0 * c * c);
  Jet3 j;
  j.v = tv;
  j.d1[2] = tpv;
  j.d2[detail::pack2(2, 2)] = coeff * tv * tv * tv;
  j.d3[detail::pack3(2, 2, 2)] = 3.0 * coeff * tv * tv * tpv;
  return j;
}

OdeSolution solve_t_ode(double kappa, double c, double d, double t0, int sign,
                        double z0, double zmax, double h) {
  if (!(h > 0.0) || !(zmax > z0)) throw DomainError("ode range or step invalid");
  if (!(c > 0.0)) throw DomainError("C must be positive");
  const double disc = d - kappa * std::pow(t0, 4.0);
  if (!(disc > 0.0))
    throw LeftAdmissibleRegion("initial point violates D - kappa t0^4 > 0", z0);
  if (!(t0 > 0.0)) throw LeftAdmissibleRegion("t must start positive", z0);

  OdeSolution sol;
  sol.h = h;
  sol.kappa = kappa;
  sol.c = c;
  sol.d = d;

  double t = t0;
  double w = (sign < 0 ? -1.0 : 1.0) * std::sqrt(disc) / (2.0 * c);
  double z = z0;
  const double coeff = -kappa / (2.0 * c * c);
  auto accel = [coeff](double tv) { return coeff * tv * tv * tv; };

  sol.z.push_back(z);
  sol.t.push_back(t);
  sol.tp.push_back(w);

  const long steps = std::lround(std::ceil((zmax - z0) / h - 1e-12));
  for (long k = 0; k < steps; ++k) {
    const double step = std::min(h, zmax - z);
    const double k1t = w, k1w = accel(t);
    const double k2t = w + 0.5 * step * k1w, k2w = accel(t + 0.5 * step * k1t);
    const double k3t = w + 0.5 * step * k2w, k3w = accel(t + 0.5 * step * k2t);
    const double k4t = w + step * k3w, k4w = accel(t + step * k3t);
    t += step / 6.0 * (k1t + 2 * k2t + 2 * k3t + k4t);
    w += step / 6.0 * (k1w + 2 * k2w + 2 * k3w + k4w);
    z += step;
    if (!(t > 0.0))
      throw LeftAdmissibleRegion("t reached zero", sol.z.back());
    if (!(d - kappa * std::pow(t, 4.0) > 0.0))
      throw LeftAdmissibleRegion("D - kappa t^4 reached zero", sol.z.back());
    sol.z.push_back(z);
    sol.t.push_back(t);
    sol.tp.push_back(w);
  }
  return sol;
}

namespace {

double simpson_rec(const std::function<double(double)>& f, double a, double b,
                   double fa, double fm, double fb, double whole, double tol,
                   int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0) return left + right + delta / 15.0;
  if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double integrate_simpson(const std::function<double(double)>& f, double a, double b,
                         double tol) {
  if (a == b) return 0.0;
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_rec(f, a, b, fa, fm, fb, whole, tol, 48);
}

double ode_quadrature_z(double kappa, double c, double d, double t_from, double t_to,
                        int sign, double tol) {
  auto integrand = [&](double tau) {
    const double disc = d - kappa * std::pow(tau, 4.0);
    if (!(disc > 0.0))
      throw LeftAdmissibleRegion("quadrature left the admissible region", tau);
    return 1.0 / std::sqrt(disc);
  };
  const double val = integrate_simpson(integrand, t_from, t_to, tol);
  return (sign < 0 ? -1.0 : 1.0) * 2.0 * c * val;
}

// --- builders -----------------------------------------------------------

namespace {

// Shared assembly for every g = f^2 dx^2 + (u^2/f^2) dy^2 + dz^2 structure.
AcmStructure assemble_fu(const ScalarField& f, const ScalarField& u, ChartBox domain) {
  AcmStructure s;
  s.domain = domain;
  s.g.domain = domain;
  s.g.at(0, 0) = ScalarField([f](const Vec3& p) {
    const Jet3 fj = f(p);
    return fj * fj;
  });
  s.g.at(1, 1) = ScalarField([f, u](const Vec3& p) {
    const Jet3 fj = f(p);
    const Jet3 uj = u(p);
    return (uj * uj) / (fj * fj);
  });
  s.g.at(2, 2) = ScalarField(1.0);

  s.xi.comp[2] = ScalarField(1.0);
  s.eta.comp[2] = ScalarField(1.0);

  // phi dx = (f^2/u) dy, phi dy = -(u/f^2) dx
  s.phi[1][0] = ScalarField([f, u](const Vec3& p) {
    const Jet3 fj = f(p);
    return fj * fj / u(p);
  });
  s.phi[0][1] = ScalarField([f, u](const Vec3& p) {
    const Jet3 fj = f(p);
    return -(u(p) / (fj * fj));
  });
  return s;
}

std::vector<Vec3> probe_points(const ChartBox& box) {
  std::vector<Vec3> pts;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) {
        Vec3 p;
        const Vec3 frac{(i + 0.5) / 3.0, (j + 0.5) / 3.0, (k + 0.5) / 3.0};
        for (int a = 0; a < 3; ++a)
          p[a] = box.lower[a] + frac[a] * (box.upper[a] - box.lower[a]);
        if (box.contains(p)) pts.push_back(p);
      }
  return pts;
}

}  // namespace

void self_verify(const AcmStructure& s, double bound) {
  const auto pts = probe_points(s.domain);
  if (pts.empty()) throw BuildError("domain box admits no probe points");
  for (const Vec3& p : pts) {
    CompatResiduals r;
    try {
      r = compat_residuals(s, p);
    } catch (const EngineError& e) {
      throw BuildError(std::string("structure not evaluable on its domain: ") +
                       e.what());
    }
    if (!(r.max() < bound))
      throw BuildError("structure fails the compatibility axioms at a probe point");
    // positive definiteness: leading principal minors of the value matrix
    const MetricJets g = metric_eval(s.g, p);
    const Mat3 m = {Vec3{g.comp[0][0].v, g.comp[0][1].v, g.comp[0][2].v},
                    Vec3{g.comp[1][0].v, g.comp[1][1].v, g.comp[1][2].v},
                    Vec3{g.comp[2][0].v, g.comp[2][1].v, g.comp[2][2].v}};
    const double m1 = m[0][0];
    const double m2 = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    if (!(m1 > 0.0) || !(m2 > 0.0) || !(det3(m) > 0.0))
      throw BuildError("metric is not positive definite at a probe point");
  }
}

AcmStructure build_z2(double a, ChartBox domain) {
  if (domain.lower[2] <= 0.0)
    throw DomainError("the z^2 family needs a domain with z > 0");
  bool guarded = false;
  for (const auto& h : domain.excluded)
    if (h.axis == 2 && h.below) guarded = true;
  if (!guarded) domain.excluded.push_back(HalfSpace{2, true, 0.1});

  const ScalarField f = ScalarField::coordinate(2);
  const ScalarField u([a](const Vec3& p) {
    return exp(Jet3::variable(0, p) * a);
  });
  AcmStructure s = assemble_fu(f, u, domain);
  self_verify(s);
  return s;
}

AcmStructure build_fu(const ExprPtr& f, const ExprPtr& u, ChartBox domain) {
  if (!uses_only(f, 0b101)) throw DomainError("f may only use x and z");
  if (!uses_only(u, 0b001)) throw DomainError("u may only use x");
  return build_fu_fields(ScalarField::from_expr(f), ScalarField::from_expr(u),
                         std::move(domain));
}

AcmStructure build_fu_fields(const ScalarField& f, const ScalarField& u,
                             ChartBox domain) {
  for (const Vec3& p : probe_points(domain)) {
    Jet3 fj, uj;
    try {
      fj = f(p);
      uj = u(p);
    } catch (const EngineError& e) {
      throw DomainError(std::string("f or u not evaluable on the domain: ") + e.what());
    }
    if (!(fj.v > 0.0) || !(uj.v > 0.0))
      throw DomainError("f and u must be positive on the domain");
  }
  AcmStructure s = assemble_fu(f, u, domain);
  self_verify(s);
  return s;
}

AcmStructure build_kappa0(const ExprPtr& u, double A, double B, double C, double D,
                          ChartBox domain) {
  if (!uses_only(u, 0b001)) throw DomainError("u may only use x");
  const double x0 = domain.lower[0];
  const ScalarField uf = ScalarField::from_expr(u);

  // I(x) = integral of u from x0; its jet is exact because I' = u
  const ScalarField integral([u, x0](const Vec3& p) {
    auto value = [&](double x) {
      return eval_expr(u, Vec3{x, 0.0, 0.0}).v;
    };
    const Jet3 uj = eval_expr(u, p);
    Jet3 j;
    j.v = integrate_simpson(value, x0, p[0], 1e-12);
    j.d1[0] = uj.v;
    j.d2[detail::pack2(0, 0)] = uj.d(0);
    j.d3[detail::pack3(0, 0, 0)] = uj.d(0, 0);
    return j;
  });

  const ScalarField f([uf, integral, A, B, C, D](const Vec3& p) {
    const Jet3 uj = uf(p);
    const Jet3 z = Jet3::variable(2, p);
    const Jet3 iu = integral(p);
    const Jet3 num = uj * (z * A + B);
    const Jet3 den = iu * C + D;
    if (!(num.v > 0.0) || !(den.v > 0.0))
      throw DomainError("Az+B and C*I(u)+D must stay positive on the domain");
    return num / den;
  });
  return build_fu_fields(f, uf, std::move(domain));
}

AcmStructure build_kappa_nonzero(double kappa, double C, double D, const ExprPtr& u,
                                 const OdeSolution& sol, ChartBox domain) {
  if (!uses_only(u, 0b001)) throw DomainError("u may only use x");
  if (sol.z.empty() || sol.z.front() > domain.lower[2] + 1e-12 ||
      sol.z.back() < domain.upper[2] - 1e-12)
    throw InterpolationRange("ode solution does not cover the domain z-range");
  if (std::abs(kappa - sol.kappa) > 1e-15 || std::abs(C - sol.c) > 1e-15 ||
      std::abs(D - sol.d) > 1e-15)
    throw DomainError("ode solution was produced for different parameters");

  const ScalarField uf = ScalarField::from_expr(u);
  // separable profile: f(x,z) = t(z) u(x) / C  (the ansatz s(x) = C/u(x))
  const ScalarField f([sol, uf, C](const Vec3& p) {
    return sol.t_jet(p) * uf(p) / C;
  });
  return build_fu_fields(f, uf, std::move(domain));
}

AcmStructure build_product(double leaf_curvature, ChartBox domain) {
  const double c = leaf_curvature;
  if (c < 0.0) {
    // conformal disk model only covers r^2 < 4/|c|
    const double r2max =
        std::max(domain.lower[0] * domain.lower[0], domain.upper[0] * domain.upper[0]) +
        std::max(domain.lower[1] * domain.lower[1], domain.upper[1] * domain.upper[1]);
    if (r2max >= 4.0 / -c)
      throw DomainError("domain leaves the disk model of the curved leaf");
  }
  const ScalarField conf([c](const Vec3& p) {
    const Jet3 x = Jet3::variable(0, p);
    const Jet3 y = Jet3::variable(1, p);
    const Jet3 den = 1.0 + (x * x + y * y) * (c / 4.0);
    return reciprocal(den * den);
  });

  AcmStructure s;
  s.domain = domain;
  s.g.domain = domain;
  s.g.at(0, 0) = conf;
  s.g.at(1, 1) = conf;
  s.g.at(2, 2) = ScalarField(1.0);
  s.xi.comp[2] = ScalarField(1.0);
  s.eta.comp[2] = ScalarField(1.0);
  // phi is the leaf rotation: phi dx = dy, phi dy = -dx
  s.phi[1][0] = ScalarField(1.0);
  s.phi[0][1] = ScalarField(-1.0);
  self_verify(s);
  return s;
}

}  // namespace cosyflat
