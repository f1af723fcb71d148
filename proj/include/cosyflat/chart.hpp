#pragma once

#include <functional>
#include <limits>
#include <vector>

#include "cosyflat/expr.hpp"
#include "cosyflat/jet.hpp"

namespace cosyflat {

/// A coordinate half-space removed from the chart domain, used to keep
/// sampling away from metric singularities.  `below` = true excludes
/// points with p[axis] <= bound, otherwise p[axis] >= bound.
struct HalfSpace {
  int axis = 2;
  bool below = true;
  double bound = 0.0;

  bool excludes(const Vec3& p) const {
    const double c = p[axis];
    return below ? c <= bound : c >= bound;
  }
};

/// Axis-aligned box a single chart lives on, minus excluded half-spaces.
/// Default-constructed boxes are unbounded: a bare field imposes no domain.
struct ChartBox {
  Vec3 lower{-std::numeric_limits<double>::infinity(),
             -std::numeric_limits<double>::infinity(),
             -std::numeric_limits<double>::infinity()};
  Vec3 upper{std::numeric_limits<double>::infinity(),
             std::numeric_limits<double>::infinity(),
             std::numeric_limits<double>::infinity()};
  std::vector<HalfSpace> excluded;

  bool contains(const Vec3& p) const;
  void require_contains(const Vec3& p) const;  // throws DomainError
  bool bounded() const;
};

/// A scalar quantity on the chart, evaluated to an order-3 jet.
/// Immutable after construction; evaluation is pure.
class ScalarField {
 public:
  using Fn = std::function<Jet3(const Vec3&)>;

  ScalarField() : ScalarField(0.0) {}
  explicit ScalarField(double c)
      : fn_([c](const Vec3&) { return Jet3::constant(c); }) {}
  explicit ScalarField(Fn fn) : fn_(std::move(fn)) {}

  static ScalarField from_expr(ExprPtr ast) {
    return ScalarField([ast = std::move(ast)](const Vec3& p) { return eval_expr(ast, p); });
  }
  static ScalarField coordinate(int index) {
    return ScalarField([index](const Vec3& p) { return Jet3::variable(index, p); });
  }

  Jet3 operator()(const Vec3& p) const { return fn_(p); }

 private:
  Fn fn_;
};

using VecJet = std::array<Jet3, 3>;
using Mat3 = std::array<std::array<double, 3>, 3>;

struct VectorFieldDef {
  std::array<ScalarField, 3> comp;
  VecJet eval(const Vec3& p) const {
    return {comp[0](p), comp[1](p), comp[2](p)};
  }
};

struct OneFormField {
  std::array<ScalarField, 3> comp;
  VecJet eval(const Vec3& p) const {
    return {comp[0](p), comp[1](p), comp[2](p)};
  }
};

/// Two-form stored by the ordered basis dx^dy, dx^dz, dy^dz.
struct TwoFormField {
  std::array<ScalarField, 3> coeff;
  VecJet eval(const Vec3& p) const {
    return {coeff[0](p), coeff[1](p), coeff[2](p)};
  }
};

/// Symmetric 3x3 field of metric components on a chart.
struct MetricField {
  // packed symmetric order: xx, xy, xz, yy, yz, zz
  std::array<ScalarField, 6> comp;
  ChartBox domain;

  const ScalarField& at(int i, int j) const {
    return comp[detail::pack2(i, j)];
  }
  ScalarField& at(int i, int j) {
    return comp[detail::pack2(i, j)];
  }

  static MetricField euclidean();
  static MetricField diagonal(ScalarField gxx, ScalarField gyy, ScalarField gzz,
                              ChartBox box);
};

/// Metric components as jets plus the pointwise inverse (jets and plain
/// values) and the determinant of the value matrix.
struct MetricJets {
  std::array<std::array<Jet3, 3>, 3> comp;
  std::array<std::array<Jet3, 3>, 3> inv;
  Mat3 inv_value;
  double det = 0.0;
};

/// Evaluates the metric and its inverse at p.  Throws SingularMetric when a
/// component fails to evaluate or the determinant falls below
/// 1e-12 * max(1, |g|_inf^3).
MetricJets metric_eval(const MetricField& g, const Vec3& p);

/// [X,Y]^i = X^j d_j Y^i - Y^j d_j X^i, carried to jet order 2.
VecJet lie_bracket(const VectorFieldDef& X, const VectorFieldDef& Y, const Vec3& p);

/// Coefficients of d(omega) on (dx^dy, dx^dz, dy^dz), order 2 jets.
VecJet exterior_derivative(const OneFormField& omega, const Vec3& p);

/// Coefficient of d(beta) on dx^dy^dz, order 2 jet.
Jet3 exterior_derivative(const TwoFormField& beta, const Vec3& p);

/// The derivative two-form as a field, for iterating d.
TwoFormField exterior_derivative_field(const OneFormField& omega);

/// Orthonormal frame at a point together with the metric value there.
struct FramePoint {
  std::array<Vec3, 3> e;
  Mat3 metric;
  bool orthonormal = false;
};

/// Gram-Schmidt against the given metric value; deterministic in the input
/// order and span-preserving.  Throws DegenerateFrame when the input Gram
/// determinant is at or below 1e-10.
FramePoint gram_schmidt(const std::array<Vec3, 3>& vectors, const Mat3& g_value);

/// Rectangular sampling grid; points sit at cell centers.
struct GridAxis {
  double min = -1.0;
  double max = 1.0;
  int count = 5;
};

struct GridSpec {
  std::array<GridAxis, 3> axis;

  static GridSpec cover(const ChartBox& box, int count = 5);
  /// Cell-center points in row-major (x outermost, z innermost) order.
  std::vector<Vec3> points() const;
};

// small dense linear algebra helpers shared across modules
double det3(const Mat3& m);
Mat3 invert3(const Mat3& m);  // throws SingularMetric
double dot_g(const Mat3& g, const Vec3& a, const Vec3& b);
double norm_g(const Mat3& g, const Vec3& a);

}  // namespace cosyflat
