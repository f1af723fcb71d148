#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cosyflat/acm.hpp"
#include "cosyflat/families.hpp"
#include "test_support.hpp"

using namespace cosyflat;
using testutil::Rng;

namespace {

ChartBox z2_box() {
  ChartBox b;
  b.lower = {-1.0, -1.0, 0.5};
  b.upper = {1.0, 1.0, 2.0};
  return b;
}

ChartBox unit_box() {
  ChartBox b;
  b.lower = {-1.0, -1.0, -1.0};
  b.upper = {1.0, 1.0, 1.0};
  return b;
}

AcmStructure z2(double a = 1.0) { return build_z2(a, z2_box()); }

// Almost cosymplectic structure whose shape-operator eigenframe is not
// coordinate-aligned: Phi = 2 dx^dy and the leaf metric is
// 2 R(theta) diag(e^p, e^-p) R(theta)^T with p, theta depending on all
// coordinates.  det = 4 keeps the compatibility axioms exact, and the
// structure functions all vary along every frame direction, so this is the
// fixture that pins the signs of the adapted-frame Ricci formulas.
AcmStructure twisted() {
  auto P = [](const Vec3& q) {
    const Jet3 x = Jet3::variable(0, q), y = Jet3::variable(1, q),
               z = Jet3::variable(2, q);
    return x * 0.2 + y * 0.1 + z * 0.3;
  };
  auto TH = [](const Vec3& q) {
    const Jet3 x = Jet3::variable(0, q), y = Jet3::variable(1, q),
               z = Jet3::variable(2, q);
    return x * (-0.15) + y * 0.2 + z * 0.25;
  };
  auto gxx = [=](const Vec3& q) {
    const Jet3 c = cos(TH(q)), s = sin(TH(q)), E = exp(P(q));
    return (c * c * E + s * s / E) * 2.0;
  };
  auto gxy = [=](const Vec3& q) {
    const Jet3 c = cos(TH(q)), s = sin(TH(q)), E = exp(P(q));
    return c * s * (E - reciprocal(E)) * 2.0;
  };
  auto gyy = [=](const Vec3& q) {
    const Jet3 c = cos(TH(q)), s = sin(TH(q)), E = exp(P(q));
    return (s * s * E + c * c / E) * 2.0;
  };
  AcmStructure s;
  s.domain = unit_box();
  s.g.domain = s.domain;
  s.g.at(0, 0) = ScalarField(gxx);
  s.g.at(0, 1) = ScalarField(gxy);
  s.g.at(1, 1) = ScalarField(gyy);
  s.g.at(2, 2) = ScalarField(1.0);
  s.xi.comp[2] = ScalarField(1.0);
  s.eta.comp[2] = ScalarField(1.0);
  s.phi[0][0] = ScalarField([=](const Vec3& q) { return gxy(q) * 0.5; });
  s.phi[0][1] = ScalarField([=](const Vec3& q) { return gyy(q) * 0.5; });
  s.phi[1][0] = ScalarField([=](const Vec3& q) { return -(gxx(q) * 0.5); });
  s.phi[1][1] = ScalarField([=](const Vec3& q) { return -(gxy(q) * 0.5); });
  return s;
}

VectorFieldDef coordinate_field(int i) {
  VectorFieldDef v;
  v.comp[i] = ScalarField(1.0);
  return v;
}

}  // namespace

TEST_CASE("compatibility axioms hold on the built-in families") {
  const std::vector<AcmStructure> structures = {z2(0.5), z2(1.0), z2(2.0),
                                                build_product(0.0, unit_box()),
                                                build_product(1.0, unit_box()),
                                                twisted()};
  for (const auto& s : structures)
    for (const Vec3& p : GridSpec::cover(s.domain, 3).points()) {
      const CompatResiduals r = compat_residuals(s, p);
      CHECK(r.max() < 1e-12);
    }
}

TEST_CASE("scaling phi breaks the square axiom by the predicted amount") {
  AcmStructure s = z2();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const ScalarField orig = s.phi[i][j];
      s.phi[i][j] = ScalarField([orig](const Vec3& p) { return orig(p) * 1.01; });
    }
  const CompatResiduals r = compat_residuals(s, {0.0, 0.0, 1.0});
  CHECK(r.phi_square == doctest::Approx(0.0201).epsilon(1e-9));
}

TEST_CASE("shape operator fixtures") {
  SUBCASE("the product family has parallel xi") {
    const AcmStructure s = build_product(1.0, unit_box());
    for (const Vec3& p : GridSpec::cover(s.domain, 3).points()) {
      const Mat3 a = shape_operator(s, p);
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) CHECK(std::abs(a[i][j]) < 1e-14);
    }
  }

  SUBCASE("z^2 family at (0,0,2): A dx = -(1/2) dx, A dy = +(1/2) dy") {
    const Mat3 a = shape_operator(z2(), {0.0, 0.0, 2.0});
    CHECK(a[0][0] == doctest::Approx(-0.5).epsilon(1e-13));
    CHECK(a[1][1] == doctest::Approx(0.5).epsilon(1e-13));
    CHECK(std::abs(a[2][2]) < 1e-14);
    CHECK(std::abs(a[0][1]) < 1e-14);
    const APropertyResiduals ap = a_property_residuals(z2(), {0.0, 0.0, 2.0});
    CHECK(ap.lambda == doctest::Approx(0.5).epsilon(1e-12));
  }

  SUBCASE("A annihilates xi on every family") {
    for (const auto& s : {z2(), build_product(1.0, unit_box()), twisted()})
      for (const Vec3& p : GridSpec::cover(s.domain, 2).points())
        CHECK(a_property_residuals(s, p).a_xi < 1e-12);
  }
}

TEST_CASE("structural properties of A hold everywhere") {
  for (const auto& s : {z2(1.0), z2(2.0), twisted()})
    for (const Vec3& p : GridSpec::cover(s.domain, 3).points()) {
      const APropertyResiduals r = a_property_residuals(s, p);
      CHECK(r.max() < 1e-9);
      CHECK(r.spectrum < 1e-9);  // eigenvalues pair as {0, lambda, -lambda}
    }
  // A = 0 is trivially fine
  const AcmStructure prod = build_product(0.0, unit_box());
  CHECK(a_property_residuals(prod, {0.1, 0.2, 0.3}).max() < 1e-14);
}

TEST_CASE("nabla phi residuals separate the classes") {
  SUBCASE("every three-dimensional structure has Kaehlerian leaves") {
    for (const auto& s : {z2(), build_product(1.0, unit_box()), twisted()})
      for (const Vec3& p : GridSpec::cover(s.domain, 3).points()) {
        const NablaPhiResiduals r = nabla_phi_residuals(s, p);
        CHECK(r.kahler_leaves < 1e-8);
        CHECK(r.fundamental < 1e-8);
      }
  }

  SUBCASE("the product over a Kaehler leaf is cosymplectic") {
    const AcmStructure s = build_product(1.0, unit_box());
    for (const Vec3& p : GridSpec::cover(s.domain, 3).points())
      CHECK(nabla_phi_residuals(s, p).cosymplectic < 1e-10);
  }

  SUBCASE("the z^2 family is not cosymplectic") {
    const AcmStructure s = z2();
    double worst = 0.0;
    for (const Vec3& p : GridSpec::cover(s.domain, 3).points())
      worst = std::max(worst, nabla_phi_residuals(s, p).cosymplectic);
    CHECK(worst > 1e-2);
  }
}

TEST_CASE("curvature commutation with phi") {
  const AcmStructure prod = build_product(1.0, unit_box());
  for (const Vec3& p : GridSpec::cover(prod.domain, 3).points())
    CHECK(curvature_phi_commutation(prod, p) < 1e-9);

  // flat cosymplectic structure: euclidean metric, phi the x,y rotation
  const AcmStructure flat = build_product(0.0, unit_box());
  CHECK(curvature_phi_commutation(flat, {0.3, -0.4, 0.8}) < 1e-14);

  const AcmStructure s = z2();
  double worst = 0.0;
  for (const Vec3& p : GridSpec::cover(s.domain, 3).points())
    worst = std::max(worst, curvature_phi_commutation(s, p));
  CHECK(worst > 1e-3);
}

TEST_CASE("adapted frame on the z^2 family at the unit point") {
  const AdaptedFrameData f = adapted_frame(z2(), {0.0, 0.0, 1.0});
  CHECK(f.lambda == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(f.alpha) < 1e-12);
  CHECK(std::abs(f.beta) < 1e-12);
  CHECK(f.gamma == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(f.diagnostics_max() < 1e-10);
  // E2 is the unit -lambda eigenvector (d/dx direction, positive sign)
  CHECK(f.e2[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(f.e3[1] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("adapted frame is degenerate where A vanishes") {
  const AcmStructure prod = build_product(1.0, unit_box());
  CHECK_THROWS_AS(adapted_frame(prod, {0.1, 0.2, 0.3}), DegenerateA);
}

TEST_CASE("frame gram matrix is the identity across families") {
  for (const auto& s : {z2(0.5), z2(2.0), twisted()})
    for (const Vec3& p : GridSpec::cover(s.domain, 3).points()) {
      const AdaptedFrameData f = adapted_frame(s, p);
      CHECK(f.gram_residual < 1e-10);
      CHECK(f.comm_residual < 1e-8);
      CHECK(f.eigen_residual < 1e-9);
    }
}

TEST_CASE("jacobi identity residuals") {
  SUBCASE("z^2 fixture decomposition at the unit point") {
    const AdaptedFrameData f = adapted_frame(z2(), {0.0, 0.0, 1.0});
    CHECK(std::abs(f.deriv[1][0]) < 1e-12);                            // E2 lambda
    CHECK(f.deriv[0][3] == doctest::Approx(-1.0).epsilon(1e-11));      // E1 gamma
    CHECK(f.gamma * f.lambda == doctest::Approx(1.0).epsilon(1e-11));  // gamma lambda
    const JacobiResiduals r = jacobi_residuals(f);
    CHECK(std::abs(r.r1) < 1e-10);
    CHECK(std::abs(r.r2) < 1e-10);
  }

  SUBCASE("identities hold on all admissible grid points") {
    for (const auto& s : {z2(0.5), z2(1.0), z2(2.0), twisted()})
      for (const Vec3& p : GridSpec::cover(s.domain, 3).points()) {
        const JacobiResiduals r = jacobi_residuals(adapted_frame(s, p));
        CHECK(std::abs(r.r1) < 1e-8);
        CHECK(std::abs(r.r2) < 1e-8);
      }
  }

  SUBCASE("synthetic frame with mismatched coefficients fails") {
    AdaptedFrameData f{};
    f.lambda = 1.0;
    f.gamma = 2.0;  // gamma lambda = 2 with everything else zero
    const JacobiResiduals r = jacobi_residuals(f);
    CHECK(r.r1 == 2.0);
    CHECK(r.r2 == 0.0);
  }
}

TEST_CASE("adapted ricci formulas") {
  SUBCASE("frozen z^2 values at the unit point") {
    const AdaptedRicci ric = ricci_adapted(adapted_frame(z2(), {0.0, 0.0, 1.0}));
    CHECK(ric.s[0][0] == doctest::Approx(-2.0).epsilon(1e-11));
    CHECK(std::abs(ric.s[1][1]) < 1e-11);
    CHECK(ric.s[2][2] == doctest::Approx(-2.0).epsilon(1e-11));
    CHECK(ric.scal == doctest::Approx(-4.0).epsilon(1e-11));
  }

  SUBCASE("lambda -> 0 kills the S11 component") {
    AdaptedFrameData f{};
    f.gamma = 3.0;
    const AdaptedRicci ric = ricci_adapted(f);
    CHECK(ric.s[0][0] == 0.0);
  }

  SUBCASE("two-path agreement, including off-axis structures") {
    for (const auto& s : {z2(0.5), z2(1.0), z2(2.0), twisted()})
      for (const Vec3& p : GridSpec::cover(s.domain, 3).points())
        CHECK(ricci_crosscheck(s, p) < 1e-7);
  }

  SUBCASE("the twisted fixture discriminates the off-diagonal signs") {
    // E3 lambda != 0 here, so a flipped S13 would show up immediately
    const AdaptedFrameData f = adapted_frame(twisted(), {0.37, -0.21, 0.43});
    CHECK(std::abs(f.deriv[2][0]) > 1e-3);
    CHECK(std::abs(f.alpha) > 0.1);
    CHECK(ricci_crosscheck(twisted(), {0.37, -0.21, 0.43}) < 1e-9);
  }
}

TEST_CASE("constant-sectional-curvature residual") {
  const ExprPtr f = parse_expr("z");
  const ExprPtr u = parse_expr("exp(x)");

  SUBCASE("f = z, u = e^x solves the kappa = 0 equation identically") {
    Rng rng(59);
    for (int n = 0; n < 20; ++n) {
      const Vec3 p = rng.point({-1, -1, 0.5}, {1, 1, 2});
      CHECK(constsec_residual(f, u, 0.0, p) < 1e-13);
    }
  }

  SUBCASE("with kappa = 1 only the curvature term survives") {
    const Vec3 p{0.3, 0.0, 1.7};
    const double expect = std::pow(p[2], 3.0) * std::exp(-2.0 * p[0]);
    CHECK(constsec_residual(f, u, 1.0, p) == doctest::Approx(expect).epsilon(1e-12));
  }

  SUBCASE("positivity and variable restrictions are enforced") {
    CHECK_THROWS_AS(constsec_residual(f, u, 0.0, {0.0, 0.0, -1.0}), DomainError);
    CHECK_THROWS_AS(constsec_residual(parse_expr("y"), u, 0.0, {0, 1, 1}), DomainError);
    CHECK_THROWS_AS(constsec_residual(f, parse_expr("z"), 0.0, {0, 0, 1}), DomainError);
  }
}

TEST_CASE("killing eigenfield characterization") {
  const auto grid = GridSpec::cover(z2_box(), 4).points();

  SUBCASE("z^2 family: kappa = 0 and the corollary holds") {
    const TheoremResult r =
        estimate_kappa_and_theorem_residual(z2(), coordinate_field(1), grid);
    CHECK(std::abs(r.kappa_hat) < 1e-9);
    CHECK(r.max_residual < 1e-8);
    CHECK(r.kappa_variance < 1e-10);
    CHECK(r.eigen_residual_max < 1e-9);
    CHECK(r.killing_residual_max < 1e-9);
    CHECK(r.branch == 1);  // A K = +lambda K for K = d/dy
    CHECK(r.corollary_max < 1e-8);
  }

  SUBCASE("product family violates the A != 0 hypothesis") {
    const AcmStructure prod = build_product(0.0, unit_box());
    const auto pts = GridSpec::cover(prod.domain, 3).points();
    CHECK_THROWS_AS(
        estimate_kappa_and_theorem_residual(prod, coordinate_field(0), pts),
        PreconditionFailed);
  }

  SUBCASE("a non-eigen non-Killing field is rejected") {
    CHECK_THROWS_AS(
        estimate_kappa_and_theorem_residual(z2(), coordinate_field(2), grid),
        PreconditionFailed);
  }
}

TEST_CASE("minimality: tr A vanishes on every structure") {
  for (const auto& s : {z2(), build_product(1.0, unit_box()), twisted()})
    for (const Vec3& p : GridSpec::cover(s.domain, 3).points())
      CHECK(a_property_residuals(s, p).trace < 1e-10);
}

TEST_CASE("lambda equals the xi-derivative of ln|K| up to the branch sign") {
  const auto grid = GridSpec::cover(z2_box(), 3).points();
  const TheoremResult r =
      estimate_kappa_and_theorem_residual(z2(), coordinate_field(1), grid);
  // K = d/dy sits on the +lambda branch, and mu = -xi ln|K| held pointwise
  CHECK(r.branch == 1);
  CHECK(r.corollary_max < 1e-8);
  // spot value: lambda = 1/z and xi ln|K| = -1/z at (0,0,1)
  const AdaptedFrameData f = adapted_frame(z2(), {0.0, 0.0, 1.0});
  CHECK(f.lambda == doctest::Approx(1.0).epsilon(1e-11));
}
