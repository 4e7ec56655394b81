#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "clab/spectra.hpp"

namespace clab {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Gauss-Legendre nodes/weights on [-1, 1] by Newton iteration.
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(n, 0);
  w.assign(n, 0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double pp = 0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1, p1 = 0;
      for (int j = 0; j < n; ++j) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2 * j + 1) * z * p1 - j * p2) / (j + 1);
      }
      pp = n * (z * p0 - p1) / (z * z - 1);
      double dz = p0 / pp;
      z -= dz;
      if (std::fabs(dz) < 1e-15) break;
    }
    x[i] = -z;
    x[n - 1 - i] = z;
    w[i] = 2.0 / ((1 - z * z) * pp * pp);
    w[n - 1 - i] = w[i];
  }
}

using Mat3 = std::array<std::array<double, 3>, 3>;

Mat3 invert3(const Mat3& a, double& det) {
  Mat3 inv{};
  inv[0][0] = a[1][1] * a[2][2] - a[1][2] * a[2][1];
  inv[0][1] = a[0][2] * a[2][1] - a[0][1] * a[2][2];
  inv[0][2] = a[0][1] * a[1][2] - a[0][2] * a[1][1];
  inv[1][0] = a[1][2] * a[2][0] - a[1][0] * a[2][2];
  inv[1][1] = a[0][0] * a[2][2] - a[0][2] * a[2][0];
  inv[1][2] = a[0][2] * a[1][0] - a[0][0] * a[1][2];
  inv[2][0] = a[1][0] * a[2][1] - a[1][1] * a[2][0];
  inv[2][1] = a[0][1] * a[2][0] - a[0][0] * a[2][1];
  inv[2][2] = a[0][0] * a[1][1] - a[0][1] * a[1][0];
  det = a[0][0] * inv[0][0] + a[0][1] * inv[1][0] + a[0][2] * inv[2][0];
  for (auto& row : inv)
    for (auto& v : row) v /= det;
  return inv;
}

struct PointData {
  double omega_norm2;   // |omega|^2 under g_eps
  double domega_norm2;  // |d omega|^2 under g_eps
  double volume;        // sqrt(det g_eps)
};

// Hopf coordinates: g = d eta^2 + cos^2(eta) dxi1^2 + sin^2(eta) dxi2^2,
// flow field X = d/dxi1 + alpha d/dxi2, omega = X^flat / |X|^2.
PointData at_point(double eta, double alpha, double eps) {
  double c = std::cos(eta) * std::cos(eta);
  double s = std::sin(eta) * std::sin(eta);
  double m = c + alpha * alpha * s;
  double s2 = std::sin(2 * eta);

  Mat3 g{};
  g[0][0] = 1;
  g[1][1] = c;
  g[2][2] = s;
  // g_eps = g - (1 - eps^2) (gX)(gX)^T / |X|^2 with X = (0, 1, alpha)
  double gx[3] = {0, c, alpha * s};
  double shrink = (1 - eps * eps) / m;
  Mat3 ge = g;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) ge[i][j] -= shrink * gx[i] * gx[j];

  double det = 0;
  Mat3 gi = invert3(ge, det);
  if (det <= 0) throw std::runtime_error("hopf: metric degenerated numerically");

  // omega = (c dxi1 + alpha s dxi2)/m
  double om[3] = {0, c / m, alpha * s / m};
  double on2 = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) on2 += om[i] * gi[i][j] * om[j];

  // d omega = A d eta ^ dxi1 + B d eta ^ dxi2
  double A = -alpha * alpha * s2 / (m * m);
  double B = alpha * s2 / (m * m);
  double F[3][3] = {{0, A, B}, {-A, 0, 0}, {-B, 0, 0}};
  double dn2 = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) dn2 += 0.5 * F[i][j] * F[a][b] * gi[i][a] * gi[j][b];

  return PointData{on2, dn2, std::sqrt(det)};
}

struct Integrals {
  double omega2;
  double domega2;
};

Integrals integrate(double alpha, double eps, int N) {
  std::vector<double> gx, gw;
  gauss_legendre(N, gx, gw);
  // eta in (0, pi/2); fiber angles by the periodic trapezoid rule, whose
  // weights sum to (2 pi)^2 and are summed in fixed slab order.
  double sum_o = 0, sum_d = 0;
  double angle_w = (2 * kPi / N) * (2 * kPi / N);
  for (int i = 0; i < N; ++i) {
    double eta = (gx[i] + 1) * (kPi / 4);
    double wq = gw[i] * (kPi / 4);
    PointData pd = at_point(eta, alpha, eps);
    double slab_o = 0, slab_d = 0;
    for (int j = 0; j < N; ++j) {
      double row_o = 0, row_d = 0;
      for (int l = 0; l < N; ++l) {
        row_o += pd.omega_norm2 * pd.volume;
        row_d += pd.domega_norm2 * pd.volume;
      }
      slab_o += row_o;
      slab_d += row_d;
    }
    sum_o += wq * angle_w * slab_o;
    sum_d += wq * angle_w * slab_d;
  }
  return Integrals{sum_o, sum_d};
}

}  // namespace

HopfRayleigh hopf_rayleigh(const HopfFormModel& m) {
  if (m.N < 32) throw std::invalid_argument("hopf_rayleigh: N >= 32 per coordinate");
  if (!(m.eps > 0) || m.eps > 1) throw std::invalid_argument("hopf_rayleigh: eps in (0, 1]");
  if (!(m.alpha > 0)) throw std::invalid_argument("hopf_rayleigh: alpha > 0");
  HopfRayleigh out;
  Integrals full = integrate(m.alpha, m.eps, m.N);
  Integrals base = integrate(m.alpha, 1.0, m.N);
  Integrals half = integrate(m.alpha, 1.0, m.N / 2);
  out.R_eps = full.domega2 / full.omega2;
  out.R1 = base.domega2 / base.omega2;
  out.omega_l2 = base.omega2;
  out.domega_l2 = base.domega2;
  out.factorized = m.eps * m.eps * out.R1;
  out.rel_gap = std::fabs(out.R_eps - out.factorized) / out.factorized;
  double r1_half = half.domega2 / half.omega2;
  out.richardson = std::fabs(out.R1 - r1_half) / std::fabs(out.R1);
  if (out.richardson > 1e-6)
    throw std::runtime_error("hopf_rayleigh: quadrature did not converge at this N");
  return out;
}

double hopf_omega_l2_closed(double alpha) {
  // int |omega|^2 dV = 4 pi^2 * int_0^1 du / (1 + (a^2-1) u) / 2 ... = 2 pi^2 ln(a^2)/(a^2-1)
  double a2 = alpha * alpha;
  if (std::fabs(a2 - 1) < 1e-12) return 2 * kPi * kPi;
  return 2 * kPi * kPi * std::log(a2) / (a2 - 1);
}

double hopf_domega_l2_closed(double alpha) {
  // int |d omega|^2 dV = 4 pi^2 (a^2 + 1) / a^2
  double a2 = alpha * alpha;
  return 4 * kPi * kPi * (a2 + 1) / a2;
}

double hopf_ixdomega_residual(double alpha, int samples) {
  double worst = 0;
  for (int i = 1; i < samples; ++i) {
    double eta = (kPi / 2) * i / samples;
    double c = std::cos(eta) * std::cos(eta);
    double s = std::sin(eta) * std::sin(eta);
    double m = c + alpha * alpha * s;
    double s2 = std::sin(2 * eta);
    double A = -alpha * alpha * s2 / (m * m);
    double B = alpha * s2 / (m * m);
    // i_X (A deta^dxi1 + B deta^dxi2) = -(A + alpha B) deta
    worst = std::max(worst, std::fabs(A + alpha * B));
  }
  return worst;
}

double hopf_discrete_d_residual(double alpha, int N) {
  auto P = [&](double eta) {
    double c = std::cos(eta) * std::cos(eta);
    double s = std::sin(eta) * std::sin(eta);
    return c / (c + alpha * alpha * s);
  };
  auto Q = [&](double eta) {
    double c = std::cos(eta) * std::cos(eta);
    double s = std::sin(eta) * std::sin(eta);
    return alpha * s / (c + alpha * alpha * s);
  };
  double h = 1e-5;
  double worst = 0;
  for (int i = 1; i < N; ++i) {
    double eta = (kPi / 2) * i / N;
    double c = std::cos(eta) * std::cos(eta);
    double s = std::sin(eta) * std::sin(eta);
    double m = c + alpha * alpha * s;
    double s2 = std::sin(2 * eta);
    double A = -alpha * alpha * s2 / (m * m);
    double B = alpha * s2 / (m * m);
    double dP = (P(eta + h) - P(eta - h)) / (2 * h);
    double dQ = (Q(eta + h) - Q(eta - h)) / (2 * h);
    double scale = std::max({std::fabs(A), std::fabs(B), 1e-3});
    worst = std::max(worst, std::fabs(dP - A) / scale);
    worst = std::max(worst, std::fabs(dQ - B) / scale);
  }
  return worst;
}

}  // namespace clab
