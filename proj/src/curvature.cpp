#include "cosyflat/curvature.hpp"

#include <algorithm>
#include <cmath>

namespace cosyflat {

ConnectionJets christoffel(const MetricField& g, const Vec3& p) {
  ConnectionJets out;
  out.g = metric_eval(g, p);
  const auto& m = out.g.comp;
  for (int k = 0; k < 3; ++k)
    for (int i = 0; i < 3; ++i)
      for (int j = i; j < 3; ++j) {
        Jet3 acc;
        for (int l = 0; l < 3; ++l)
          acc = acc + out.g.inv[k][l] *
                          (partial(m[j][l], i) + partial(m[i][l], j) - partial(m[i][j], l));
        acc = acc * 0.5;
        out.gamma[k][i][j] = acc;
        out.gamma[k][j][i] = acc;
      }
  return out;
}

ConnectionPoint connection_point(const ConnectionJets& conn) {
  ConnectionPoint out;
  for (int k = 0; k < 3; ++k)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        const Jet3& G = conn.gamma[k][i][j];
        out.gamma[k][i][j] = G.v;
        for (int a = 0; a < 3; ++a) {
          out.dgamma[a][k][i][j] = G.d(a);
          for (int b = 0; b < 3; ++b) out.d2gamma[a][b][k][i][j] = G.d(a, b);
        }
      }
  return out;
}

CurvatureJets riemann(const ConnectionJets& conn) {
  CurvatureJets out;
  const auto& G = conn.gamma;
  // computed for i < j only; the mirror entry is the exact negation and the
  // diagonal vanishes, which keeps the argument-pair antisymmetry bitwise
  for (int l = 0; l < 3; ++l)
    for (int k = 0; k < 3; ++k) {
      for (int i = 0; i < 3; ++i) {
        Jet3 zero;
        zero.ord = 1;
        out.R[l][k][i][i] = zero;
      }
      for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j) {
          Jet3 acc = partial(G[l][j][k], i) - partial(G[l][i][k], j);
          for (int m = 0; m < 3; ++m)
            acc = acc + G[l][i][m] * G[m][j][k] - G[l][j][m] * G[m][i][k];
          out.R[l][k][i][j] = acc;
          out.R[l][k][j][i] = -acc;
        }
    }
  return out;
}

void ricci_scalar_schouten(CurvatureJets& curv, const ConnectionJets& conn) {
  // Ric_jk = sum_m R^m_{k m j}; this orientation of the trace gives
  // S_11 = -2 lambda^2 on the adapted-frame fixture.
  for (int j = 0; j < 3; ++j)
    for (int k = 0; k < 3; ++k) {
      Jet3 acc;
      for (int m = 0; m < 3; ++m) acc = acc + curv.R[m][k][m][j];
      curv.ric[j][k] = acc;
    }
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      Jet3 acc;
      for (int k = 0; k < 3; ++k) acc = acc + conn.g.inv[i][k] * curv.ric[k][j];
      curv.q[i][j] = acc;
    }
  curv.scal = curv.q[0][0] + curv.q[1][1] + curv.q[2][2];
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      curv.l[i][j] = curv.q[i][j];
      if (i == j) curv.l[i][j] = curv.l[i][j] - curv.scal * 0.25;
    }
  // (nabla_i L)^k_j = d_i L^k_j + Gamma^k_im L^m_j - Gamma^m_ij L^k_m,
  // with the partial taken from exact jets rather than grid differencing
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k)
      for (int j = 0; j < 3; ++j) {
        double acc = curv.l[k][j].d(i);
        for (int m = 0; m < 3; ++m)
          acc += conn.gamma[k][i][m].v * curv.l[m][j].v -
                 conn.gamma[m][i][j].v * curv.l[k][m].v;
        curv.nabla_l[i][k][j] = acc;
      }
}

CurvaturePoint curvature_point(const CurvatureJets& curv) {
  CurvaturePoint out;
  for (int l = 0; l < 3; ++l)
    for (int k = 0; k < 3; ++k)
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) out.R[l][k][i][j] = curv.R[l][k][i][j].v;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      out.ric[i][j] = curv.ric[i][j].v;
      out.q[i][j] = curv.q[i][j].v;
      out.l[i][j] = curv.l[i][j].v;
    }
  out.scal = curv.scal.v;
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k)
      for (int j = 0; j < 3; ++j) out.nabla_l[i][k][j] = curv.nabla_l[i][k][j];
  return out;
}

CurvatureJets curvature_at(const MetricField& g, const Vec3& p) {
  const ConnectionJets conn = christoffel(g, p);
  CurvatureJets curv = riemann(conn);
  ricci_scalar_schouten(curv, conn);
  return curv;
}

namespace {

double cotton_pair(const CurvatureJets& curv, const Mat3& g_value, const Vec3& X,
                   const Vec3& Y) {
  Vec3 V{0.0, 0.0, 0.0};
  for (int k = 0; k < 3; ++k)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        V[k] += X[i] * Y[j] * (curv.nabla_l[i][k][j] - curv.nabla_l[j][k][i]);
  return norm_g(g_value, V);
}

Mat3 metric_values(const MetricJets& g) {
  Mat3 m;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m[i][j] = g.comp[i][j].v;
  return m;
}

}  // namespace

double cotton_residual(const MetricField& g, const Vec3& p, const Vec3& X, const Vec3& Y) {
  const ConnectionJets conn = christoffel(g, p);
  CurvatureJets curv = riemann(conn);
  ricci_scalar_schouten(curv, conn);
  return cotton_pair(curv, metric_values(conn.g), X, Y);
}

CottonScan cotton_scan(const CurvatureJets& curv, const ConnectionJets& conn) {
  CottonScan out;
  const Mat3 gv = metric_values(conn.g);
  const std::array<Vec3, 3> basis{Vec3{1, 0, 0}, Vec3{0, 1, 0}, Vec3{0, 0, 1}};
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j)
      out.raw = std::max(out.raw, cotton_pair(curv, gv, basis[i], basis[j]));
  // tr(L L) is a full contraction, hence chart-invariant
  double tr_ll = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) tr_ll += curv.l[i][j].v * curv.l[j][i].v;
  out.schouten_norm = std::sqrt(std::abs(tr_ll));
  out.normalized = out.raw / (1.0 + out.schouten_norm);
  return out;
}

CottonScan cotton_scan(const MetricField& g, const Vec3& p) {
  const ConnectionJets conn = christoffel(g, p);
  CurvatureJets curv = riemann(conn);
  ricci_scalar_schouten(curv, conn);
  return cotton_scan(curv, conn);
}

std::vector<double> weyl_tensor(int n, const std::vector<double>& R,
                                const std::vector<double>& ric,
                                const std::vector<double>& g_value, double scal) {
  if (n < 4)
    throw DimensionError("the Weyl tensor is only informative in dimension >= 4");
  const std::size_t nn = static_cast<std::size_t>(n);
  if (R.size() != nn * nn * nn * nn || ric.size() != nn * nn || g_value.size() != nn * nn)
    throw DimensionError("component arrays do not match the stated dimension");

  // Q = g^-1 Ric via Gauss elimination on the small value matrix
  std::vector<double> a(g_value);
  std::vector<double> q(ric);  // rows become Q^i_j
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(a[r * nn + col]) > std::abs(a[piv * nn + col])) piv = r;
    if (std::abs(a[piv * nn + col]) < 1e-300)
      throw SingularMetric("metric value matrix not invertible");
    if (piv != col)
      for (int c = 0; c < n; ++c) {
        std::swap(a[piv * nn + c], a[col * nn + c]);
        std::swap(q[piv * nn + c], q[col * nn + c]);
      }
    const double inv = 1.0 / a[col * nn + col];
    for (int c = 0; c < n; ++c) {
      a[col * nn + c] *= inv;
      q[col * nn + c] *= inv;
    }
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      const double f = a[r * nn + col];
      if (f == 0.0) continue;
      for (int c = 0; c < n; ++c) {
        a[r * nn + c] -= f * a[col * nn + c];
        q[r * nn + c] -= f * q[col * nn + c];
      }
    }
  }

  auto G = [&](int i, int j) { return g_value[i * nn + j]; };
  auto Ric = [&](int i, int j) { return ric[i * nn + j]; };
  auto Q = [&](int i, int j) { return q[i * nn + j]; };
  const double c1 = 1.0 / (n - 2);
  const double c2 = scal / ((n - 1.0) * (n - 2.0));

  std::vector<double> C(R.size());
  for (int l = 0; l < n; ++l)
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          const double id_li = l == i ? 1.0 : 0.0;
          const double id_lj = l == j ? 1.0 : 0.0;
          double v = R[((l * nn + k) * nn + i) * nn + j];
          v -= c1 * (G(j, k) * Q(l, i) + Ric(j, k) * id_li - G(i, k) * Q(l, j) -
                     Ric(i, k) * id_lj);
          v += c2 * (G(j, k) * id_li - G(i, k) * id_lj);
          C[((l * nn + k) * nn + i) * nn + j] = v;
        }
  return C;
}

namespace {

// (nabla_X K)^i for constant X, to jet order 1
VecJet covariant_derivative(const ConnectionJets& conn, const VecJet& K, const Vec3& X) {
  VecJet out;
  for (int i = 0; i < 3; ++i) {
    Jet3 acc;
    for (int j = 0; j < 3; ++j) {
      Jet3 term = partial(K[i], j);
      for (int k = 0; k < 3; ++k) term = term + conn.gamma[i][j][k] * K[k];
      acc = acc + term * X[j];
    }
    out[i] = acc;
  }
  return out;
}

}  // namespace

double killing_residual(const MetricField& g, const VectorFieldDef& K, const Vec3& p,
                        const Vec3& X, const Vec3& Y) {
  const ConnectionJets conn = christoffel(g, p);
  const VecJet kj = K.eval(p);
  const VecJet dxk = covariant_derivative(conn, kj, X);
  const VecJet dyk = covariant_derivative(conn, kj, Y);
  double s = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      s += conn.g.comp[i][j].v * (dxk[i].v * Y[j] + X[i] * dyk[j].v);
  return std::abs(s);
}

double killing_scan(const MetricField& g, const VectorFieldDef& K, const Vec3& p) {
  const ConnectionJets conn = christoffel(g, p);
  const VecJet kj = K.eval(p);
  const std::array<Vec3, 3> basis{Vec3{1, 0, 0}, Vec3{0, 1, 0}, Vec3{0, 0, 1}};
  std::array<VecJet, 3> dk;
  for (int i = 0; i < 3; ++i) dk[i] = covariant_derivative(conn, kj, basis[i]);
  double worst = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) {
      double s = 0.0;
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
          s += conn.g.comp[a][b].v * (dk[i][a].v * basis[j][b] + basis[i][a] * dk[j][b].v);
      worst = std::max(worst, std::abs(s));
    }
  return worst;
}

double laplacian(const MetricField& g, const ScalarField& v, const Vec3& p) {
  const ConnectionJets conn = christoffel(g, p);
  const Jet3 vj = v(p);
  double acc = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double hess = vj.d(i, j);
      for (int k = 0; k < 3; ++k) hess -= conn.gamma[k][i][j].v * vj.d(k);
      acc += conn.g.inv_value[i][j] * hess;
    }
  return -acc;
}

double sectional_curvature(const MetricField& g, const Vec3& p, int i, int j) {
  const ConnectionJets conn = christoffel(g, p);
  const CurvatureJets curv = riemann(conn);
  double num = 0.0;
  for (int l = 0; l < 3; ++l) num += curv.R[l][j][i][j].v * conn.g.comp[l][i].v;
  const double gii = conn.g.comp[i][i].v;
  const double gjj = conn.g.comp[j][j].v;
  const double gij = conn.g.comp[i][j].v;
  const double denom = gii * gjj - gij * gij;
  if (std::abs(denom) < 1e-300) throw DegenerateFrame("degenerate coordinate plane");
  return num / denom;
}

}  // namespace cosyflat
