#include "cosyflat/chart.hpp"

#include <algorithm>
#include <cmath>

namespace cosyflat {

bool ChartBox::contains(const Vec3& p) const {
  for (int i = 0; i < 3; ++i)
    if (p[i] < lower[i] || p[i] > upper[i]) return false;
  for (const auto& h : excluded)
    if (h.excludes(p)) return false;
  return true;
}

void ChartBox::require_contains(const Vec3& p) const {
  if (!contains(p))
    throw DomainError("point (" + std::to_string(p[0]) + ", " + std::to_string(p[1]) +
                      ", " + std::to_string(p[2]) + ") outside the chart domain");
}

bool ChartBox::bounded() const {
  for (int i = 0; i < 3; ++i)
    if (std::isinf(lower[i]) || std::isinf(upper[i])) return false;
  return true;
}

MetricField MetricField::euclidean() {
  MetricField g;
  g.at(0, 0) = ScalarField(1.0);
  g.at(1, 1) = ScalarField(1.0);
  g.at(2, 2) = ScalarField(1.0);
  return g;
}

MetricField MetricField::diagonal(ScalarField gxx, ScalarField gyy, ScalarField gzz,
                                  ChartBox box) {
  MetricField g;
  g.at(0, 0) = std::move(gxx);
  g.at(1, 1) = std::move(gyy);
  g.at(2, 2) = std::move(gzz);
  g.domain = std::move(box);
  return g;
}

MetricJets metric_eval(const MetricField& g, const Vec3& p) {
  g.domain.require_contains(p);
  MetricJets out;
  try {
    for (int i = 0; i < 3; ++i)
      for (int j = i; j < 3; ++j) {
        Jet3 c = g.at(i, j)(p);
        out.comp[i][j] = c;
        out.comp[j][i] = c;
      }
  } catch (const DivisionByZero&) {
    throw SingularMetric("metric component not evaluable at the point");
  }

  const auto& m = out.comp;
  // adjugate over determinant keeps the inverse exact through jet order 3
  Jet3 det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
             m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
             m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
  double scale = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) scale = std::max(scale, std::abs(m[i][j].v));
  scale = std::max(1.0, scale * scale * scale);
  if (std::abs(det.v) < 1e-12 * scale)
    throw SingularMetric("metric determinant below floor");

  auto cof = [&](int i, int j) {
    const int a = (i + 1) % 3, b = (i + 2) % 3;
    const int c = (j + 1) % 3, d = (j + 2) % 3;
    return m[a][c] * m[b][d] - m[a][d] * m[b][c];
  };
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      out.inv[i][j] = cof(j, i) / det;
      out.inv_value[i][j] = out.inv[i][j].v;
    }
  out.det = det.v;
  return out;
}

VecJet lie_bracket(const VectorFieldDef& X, const VectorFieldDef& Y, const Vec3& p) {
  const VecJet xj = X.eval(p);
  const VecJet yj = Y.eval(p);
  VecJet out;
  for (int i = 0; i < 3; ++i) {
    Jet3 acc;
    for (int j = 0; j < 3; ++j)
      acc = acc + xj[j] * partial(yj[i], j) - yj[j] * partial(xj[i], j);
    out[i] = acc;
  }
  return out;
}

VecJet exterior_derivative(const OneFormField& omega, const Vec3& p) {
  const VecJet w = omega.eval(p);
  return {partial(w[1], 0) - partial(w[0], 1),   // dx^dy
          partial(w[2], 0) - partial(w[0], 2),   // dx^dz
          partial(w[2], 1) - partial(w[1], 2)};  // dy^dz
}

Jet3 exterior_derivative(const TwoFormField& beta, const Vec3& p) {
  const VecJet c = beta.eval(p);
  return partial(c[2], 0) - partial(c[1], 1) + partial(c[0], 2);
}

TwoFormField exterior_derivative_field(const OneFormField& omega) {
  TwoFormField d;
  for (int k = 0; k < 3; ++k)
    d.coeff[k] = ScalarField(
        [omega, k](const Vec3& p) { return exterior_derivative(omega, p)[k]; });
  return d;
}

FramePoint gram_schmidt(const std::array<Vec3, 3>& vectors, const Mat3& g_value) {
  Mat3 gram;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) gram[i][j] = dot_g(g_value, vectors[i], vectors[j]);
  if (!(det3(gram) > 1e-10))
    throw DegenerateFrame("input vectors are not independent enough");

  FramePoint out;
  out.metric = g_value;
  for (int i = 0; i < 3; ++i) {
    Vec3 v = vectors[i];
    for (int j = 0; j < i; ++j) {
      const double c = dot_g(g_value, v, out.e[j]);
      for (int a = 0; a < 3; ++a) v[a] -= c * out.e[j][a];
    }
    const double n = norm_g(g_value, v);
    if (!(n > 1e-12)) throw DegenerateFrame("vector collapsed during orthogonalization");
    for (int a = 0; a < 3; ++a) v[a] /= n;
    out.e[i] = v;
  }
  out.orthonormal = true;
  return out;
}

GridSpec GridSpec::cover(const ChartBox& box, int count) {
  GridSpec g;
  for (int i = 0; i < 3; ++i) g.axis[i] = {box.lower[i], box.upper[i], count};
  return g;
}

std::vector<Vec3> GridSpec::points() const {
  std::vector<Vec3> pts;
  pts.reserve(static_cast<std::size_t>(axis[0].count) * axis[1].count * axis[2].count);
  auto coord = [](const GridAxis& a, int k) {
    return a.min + (k + 0.5) * (a.max - a.min) / a.count;
  };
  for (int i = 0; i < axis[0].count; ++i)
    for (int j = 0; j < axis[1].count; ++j)
      for (int k = 0; k < axis[2].count; ++k)
        pts.push_back({coord(axis[0], i), coord(axis[1], j), coord(axis[2], k)});
  return pts;
}

double det3(const Mat3& m) {
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
         m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

Mat3 invert3(const Mat3& m) {
  const double d = det3(m);
  if (std::abs(d) < 1e-300) throw SingularMetric("3x3 matrix not invertible");
  Mat3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const int a = (j + 1) % 3, b = (j + 2) % 3;
      const int c = (i + 1) % 3, e = (i + 2) % 3;
      r[i][j] = (m[a][c] * m[b][e] - m[a][e] * m[b][c]) / d;
    }
  return r;
}

double dot_g(const Mat3& g, const Vec3& a, const Vec3& b) {
  double s = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) s += g[i][j] * a[i] * b[j];
  return s;
}

double norm_g(const Mat3& g, const Vec3& a) {
  return std::sqrt(std::max(0.0, dot_g(g, a, a)));
}

}  // namespace cosyflat
