#pragma once

#include <algorithm>
#include <vector>

#include "msns/grid.hpp"

namespace msns {

/// C^2 piecewise-quintic bump: chi = 1 on [-delta/2, delta/2], 0 outside
/// [-delta, delta], smoothstep-of-order-2 in between. Closed-form first and
/// second derivatives; sup|chi'| = 15/(4 delta) at the midpoint of the ramp.
struct BumpFunction {
  double delta = 0;
  double chi_prime_sup = 0;

  double operator()(double s) const {
    double a = std::abs(s), half = 0.5 * delta;
    if (a <= half) return 1.0;
    if (a >= delta) return 0.0;
    double t = (a - half) / half;
    return 1.0 - t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
  }
  double d1(double s) const {
    double a = std::abs(s), half = 0.5 * delta;
    if (a <= half || a >= delta) return 0.0;
    double t = (a - half) / half;
    double p = -30.0 * t * t * (1.0 - t) * (1.0 - t) / half;
    return s > 0 ? p : -p;
  }
  double d2(double s) const {
    double a = std::abs(s), half = 0.5 * delta;
    if (a <= half || a >= delta) return 0.0;
    double t = (a - half) / half;
    return -60.0 * t * (1.0 - t) * (1.0 - 2.0 * t) / (half * half);
  }
};

/// Builds the bump with delta = min(-L1, L2)/3 and measures sup|chi'| on a
/// fine sample grid followed by a golden-section polish of the ramp.
inline BumpFunction make_bump(const DomainSpec& dom) {
  dom.validate();
  BumpFunction chi;
  chi.delta = std::min(-dom.L1, dom.L2) / 3.0;

  const double lo = 0.5 * chi.delta, hi = chi.delta;
  const int n = 100000;
  double best = 0, sbest = lo;
  for (int k = 0; k <= n; ++k) {
    double s = lo + (hi - lo) * k / n;
    double v = std::abs(chi.d1(s));
    if (v > best) {
      best = v;
      sbest = s;
    }
  }
  double a = std::max(lo, sbest - 2 * (hi - lo) / n);
  double b = std::min(hi, sbest + 2 * (hi - lo) / n);
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - gr * (b - a), d = a + gr * (b - a);
  while (b - a > 1e-15 * chi.delta) {
    if (std::abs(chi.d1(c)) > std::abs(chi.d1(d))) {
      b = d;
      d = c;
      c = b - gr * (b - a);
    } else {
      a = c;
      c = d;
      d = a + gr * (b - a);
    }
  }
  chi.chi_prime_sup = std::abs(chi.d1(0.5 * (a + b)));
  return chi;
}

/// Interface height samples at the nx cell-center abscissae, with the
/// admissibility bound d0 < 1/(2 sup|chi'|) that keeps the transform a
/// diffeomorphism. Contact angle is 90 degrees: h'(0) = h'(W) = 0, realized
/// by reflection ghosts unless explicit endpoint slopes are supplied.
struct HeightField {
  std::vector<double> h;
  double d0 = 0;

  static HeightField zero(const GridSpec& g, const BumpFunction& chi) {
    HeightField f;
    f.h.assign(g.nx, 0.0);
    f.d0 = 0.45 / chi.chi_prime_sup;
    return f;
  }
  double max_abs() const { return sup_norm(h); }
  bool admissible() const { return max_abs() <= d0; }
  double mean(const GridSpec& g) const {
    double s = 0;
    for (double v : h) s += v;
    return s / g.nx;
  }
};

// --- discrete calculus on h (Neumann ghosts; optional endpoint slopes) -----

inline double h_ghost_left(const std::vector<double>& h, double dx,
                           double slope_left) {
  return h.front() - dx * slope_left;
}
inline double h_ghost_right(const std::vector<double>& h, double dx,
                            double slope_right) {
  return h.back() + dx * slope_right;
}

/// h' at the face abscissa xf(i), i in [0, nx]
inline double h_prime_face(const std::vector<double>& h, const GridSpec& g,
                           int i, double sl = 0, double sr = 0) {
  int n = (int)h.size();
  double left = (i == 0) ? h_ghost_left(h, g.dx, sl) : h[i - 1];
  double right = (i == n) ? h_ghost_right(h, g.dx, sr) : h[i];
  return (right - left) / g.dx;
}

/// h' at the cell center xc(i)
inline double h_prime_center(const std::vector<double>& h, const GridSpec& g,
                             int i, double sl = 0, double sr = 0) {
  int n = (int)h.size();
  double left = (i == 0) ? h_ghost_left(h, g.dx, sl) : h[i - 1];
  double right = (i == n - 1) ? h_ghost_right(h, g.dx, sr) : h[i + 1];
  return (right - left) / (2 * g.dx);
}

/// h'' at the cell center xc(i)
inline double h_second_center(const std::vector<double>& h, const GridSpec& g,
                              int i, double sl = 0, double sr = 0) {
  int n = (int)h.size();
  double left = (i == 0) ? h_ghost_left(h, g.dx, sl) : h[i - 1];
  double right = (i == n - 1) ? h_ghost_right(h, g.dx, sr) : h[i + 1];
  return (left - 2 * h[i] + right) / (g.dx * g.dx);
}

/// h'' at the face abscissa xf(i) (average of the adjacent center values,
/// one-sided at the ends)
inline double h_second_face(const std::vector<double>& h, const GridSpec& g,
                            int i, double sl = 0, double sr = 0) {
  int n = (int)h.size();
  if (i == 0) return h_second_center(h, g, 0, sl, sr);
  if (i == n) return h_second_center(h, g, n - 1, sl, sr);
  return 0.5 * (h_second_center(h, g, i - 1, sl, sr) +
                h_second_center(h, g, i, sl, sr));
}

/// Transform coefficient fields at cell centers. In 2-D,
///   DTheta_h = [[1, 0], [h' chi, 1 + h chi']],  J = det = 1 + h chi',
///   DTheta_h^{-T} = [[1, -h' chi / J], [0, 1/J]].
struct HanzawaCoeffs {
  std::vector<double> J;            // nx*ny
  std::vector<double> inv_offdiag;  // (DTheta^{-T})_{12} = -h' chi / J
  std::vector<double> inv_diag;     // (DTheta^{-T})_{22} = 1 / J
  std::vector<double> theta3;       // chi(y) h(x)
  double j_min = 1.0;
};

inline HanzawaCoeffs hanzawa_coeffs(const HeightField& hf,
                                    const BumpFunction& chi,
                                    const GridSpec& g) {
  HanzawaCoeffs c;
  int n = g.ncells();
  c.J.resize(n);
  c.inv_offdiag.resize(n);
  c.inv_diag.resize(n);
  c.theta3.resize(n);
  c.j_min = 1e300;
  for (int j = 0; j < g.ny(); ++j) {
    double y = g.yc(j), cy = chi(y), cpy = chi.d1(y);
    for (int i = 0; i < g.nx; ++i) {
      double h = hf.h[i], hp = h_prime_center(hf.h, g, i);
      double J = 1.0 + h * cpy;
      int id = g.icell(i, j);
      c.J[id] = J;
      c.j_min = std::min(c.j_min, J);
      c.theta3[id] = cy * h;
      if (J <= 0) continue;  // reported below
      c.inv_offdiag[id] = -hp * cy / J;
      c.inv_diag[id] = 1.0 / J;
    }
  }
  if (c.j_min <= 0)
    throw MapNotInvertible("hanzawa_coeffs: min J <= 0, |h| exceeds d0");
  return c;
}

struct InvertibilityReport {
  double max_h = 0;
  double bound = 0;   // 1 / (2 sup|chi'|)
  bool pass = false;
  double margin = 0;  // bound - max_h
  double j_min_lower = 0;  // analytic lower bound 1 - max|h| sup|chi'|
};

inline InvertibilityReport check_invertibility(const HeightField& hf,
                                               const BumpFunction& chi) {
  InvertibilityReport r;
  r.max_h = hf.max_abs();
  r.bound = 1.0 / (2.0 * chi.chi_prime_sup);
  r.pass = r.max_h < r.bound;
  r.margin = r.bound - r.max_h;
  r.j_min_lower = 1.0 - r.max_h * chi.chi_prime_sup;
  return r;
}

/// Pointwise transform coefficients at an arbitrary grid location, given the
/// local h-quantities. Used when evaluating the transformed operators on
/// staggered nodes.
struct CoeffPoint {
  double J = 1, c = 0, b = 1;      // c = h' chi / J, b = 1/J
  double dc_dx = 0, dc_dy = 0, db_dy = 0;
  double chi = 0, chi_p = 0;
};

inline CoeffPoint coeff_point(double h, double hp, double hpp,
                              const BumpFunction& chi, double y) {
  CoeffPoint p;
  double cy = chi(y), cp = chi.d1(y), cpp = chi.d2(y);
  double J = 1.0 + h * cp;
  p.J = J;
  p.chi = cy;
  p.chi_p = cp;
  p.c = hp * cy / J;
  p.b = 1.0 / J;
  // d/dx (h' chi / J) = h'' chi / J - h'^2 chi chi' / J^2
  p.dc_dx = hpp * cy / J - hp * hp * cy * cp / (J * J);
  // d/dy (h' chi / J) = h' chi' / J - h' chi h chi'' / J^2
  p.dc_dy = hp * cp / J - hp * cy * h * cpp / (J * J);
  // d/dy (1/J) = -h chi'' / J^2
  p.db_dy = -h * cpp / (J * J);
  return p;
}

}  // namespace msns
