#pragma once

#include <array>
#include <vector>

#include "msns/state.hpp"

// Evaluation of the geometric quantities and the transformed-operator
// defects on the discrete state. Everything here is data generation: the
// stencils are per-phase one-sided near the interface and the outer
// boundary, and never reach across y = 0.

namespace msns {

struct InterfaceKinematics {
  std::vector<double> nu_x, nu_y, V;  // nx, at cell centers
};

struct BoundaryField {
  std::vector<double> left, right;   // ny (cell rows)
  std::vector<double> bottom, top;   // nx (cell centers)
};

struct StressDefect {
  std::vector<double> par;   // nx+1, at x-face nodes on the interface
  std::vector<double> perp;  // nx, at cell-center nodes
};

struct BulkEtaDefect {
  std::vector<double> g_c;  // nx*ny
  BoundaryField g_n;
};

struct MomentumDefect {
  std::vector<double> f_u1;  // (nx+1)*ny, interior vertical faces
  std::vector<double> f_u2;  // nx*(ny+1), face rows (interface row unused)
};

struct WallDefect {
  std::vector<double> left, right;  // ny (cell rows)
};

struct NonlinearRHS {
  MomentumDefect f_u;
  std::vector<double> g_d;       // nx*ny
  StressDefect g_s;
  std::vector<double> g_sigma;   // nx
  std::vector<double> g_c;       // nx*ny
  std::vector<double> g_kappa;   // nx
  BoundaryField g_n;
  WallDefect g_p;
};

// --- curvature and kinematics ----------------------------------------------

inline std::vector<double> curvature(const HeightField& hf, const GridSpec& g,
                                     double sl = 0, double sr = 0) {
  std::vector<double> k(g.nx);
  for (int i = 0; i < g.nx; ++i) {
    double hp = h_prime_center(hf.h, g, i, sl, sr);
    double hpp = h_second_center(hf.h, g, i, sl, sr);
    k[i] = hpp / std::pow(1.0 + hp * hp, 1.5);
  }
  return k;
}

inline InterfaceKinematics interface_kinematics(const HeightField& hf,
                                                const std::vector<double>& dh_dt,
                                                const GridSpec& g) {
  InterfaceKinematics r;
  r.nu_x.resize(g.nx);
  r.nu_y.resize(g.nx);
  r.V.resize(g.nx);
  for (int i = 0; i < g.nx; ++i) {
    double hp = h_prime_center(hf.h, g, i);
    double s = std::sqrt(1.0 + hp * hp);
    r.nu_x[i] = -hp / s;
    r.nu_y[i] = 1.0 / s;
    r.V[i] = dh_dt[i] / s;
  }
  return r;
}

/// sigma (K(h) - h'') in the cancellation-free expanded form
///   (K - h'') = -h'' t / (sqrt(1+t)(1+sqrt(1+t))) - h'^2 h'' / (1+t)^{3/2},
/// t = h'^2, whose leading term is -(3/2) h'' h'^2.
inline std::vector<double> g_kappa(const HeightField& hf,
                                   const FluidParams& par, const GridSpec& g,
                                   double sl = 0, double sr = 0) {
  std::vector<double> out(g.nx);
  for (int i = 0; i < g.nx; ++i) {
    double hp = h_prime_center(hf.h, g, i, sl, sr);
    double hpp = h_second_center(hf.h, g, i, sl, sr);
    double t = hp * hp;
    double rt = std::sqrt(1.0 + t);
    out[i] = par.sigma *
             (-hpp * t / (rt * (1.0 + rt)) - t * hpp / (rt * rt * rt));
  }
  return out;
}

// --- per-phase derivative machinery ----------------------------------------

namespace detail {

// Extract one column of a cell-sampled field restricted to a phase, in
// increasing-y order.
inline std::vector<double> cell_column(const std::vector<double>& f,
                                       const GridSpec& g, int i, bool upper) {
  int j0 = upper ? g.ny_lo : 0;
  int j1 = upper ? g.ny() : g.ny_lo;
  std::vector<double> col(j1 - j0);
  for (int j = j0; j < j1; ++j) col[j - j0] = f[g.icell(i, j)];
  return col;
}

// dy and dyy of a cell field, all cells, phase-wise one-sided.
inline std::vector<double> dy_cell(const std::vector<double>& f,
                                   const GridSpec& g) {
  std::vector<double> out(g.ncells());
  for (int i = 0; i < g.nx; ++i)
    for (int phase = 0; phase < 2; ++phase) {
      bool up = phase == 1;
      auto col = cell_column(f, g, i, up);
      double d = up ? g.dy_hi : g.dy_lo;
      int j0 = up ? g.ny_lo : 0;
      for (int k = 0; k < (int)col.size(); ++k)
        out[g.icell(i, j0 + k)] = coldiff::d1(col, k, d);
    }
  return out;
}

inline std::vector<double> dyy_cell(const std::vector<double>& f,
                                    const GridSpec& g) {
  std::vector<double> out(g.ncells());
  for (int i = 0; i < g.nx; ++i)
    for (int phase = 0; phase < 2; ++phase) {
      bool up = phase == 1;
      auto col = cell_column(f, g, i, up);
      double d = up ? g.dy_hi : g.dy_lo;
      int j0 = up ? g.ny_lo : 0;
      for (int k = 0; k < (int)col.size(); ++k)
        out[g.icell(i, j0 + k)] = coldiff::d2(col, k, d);
    }
  return out;
}

inline std::vector<double> dx_cell(const std::vector<double>& f,
                                   const GridSpec& g) {
  std::vector<double> out(g.ncells());
  std::vector<double> row(g.nx);
  for (int j = 0; j < g.ny(); ++j) {
    for (int i = 0; i < g.nx; ++i) row[i] = f[g.icell(i, j)];
    for (int i = 0; i < g.nx; ++i)
      out[g.icell(i, j)] = coldiff::d1(row, i, g.dx);
  }
  return out;
}

inline std::vector<double> dxx_cell(const std::vector<double>& f,
                                    const GridSpec& g) {
  std::vector<double> out(g.ncells());
  std::vector<double> row(g.nx);
  for (int j = 0; j < g.ny(); ++j) {
    for (int i = 0; i < g.nx; ++i) row[i] = f[g.icell(i, j)];
    for (int i = 0; i < g.nx; ++i)
      out[g.icell(i, j)] = coldiff::d2(row, i, g.dx);
  }
  return out;
}

// u1 lives on (nx+1) columns of cell rows; same machinery, wider rows.
inline std::vector<double> dy_u1(const std::vector<double>& u1,
                                 const GridSpec& g) {
  std::vector<double> out(g.n_u1());
  for (int i = 0; i <= g.nx; ++i)
    for (int phase = 0; phase < 2; ++phase) {
      bool up = phase == 1;
      int j0 = up ? g.ny_lo : 0;
      int j1 = up ? g.ny() : g.ny_lo;
      std::vector<double> col(j1 - j0);
      for (int j = j0; j < j1; ++j) col[j - j0] = u1[g.iu1(i, j)];
      double d = up ? g.dy_hi : g.dy_lo;
      for (int k = 0; k < (int)col.size(); ++k)
        out[g.iu1(i, j0 + k)] = coldiff::d1(col, k, d);
    }
  return out;
}

inline std::vector<double> dyy_u1(const std::vector<double>& u1,
                                  const GridSpec& g) {
  std::vector<double> out(g.n_u1());
  for (int i = 0; i <= g.nx; ++i)
    for (int phase = 0; phase < 2; ++phase) {
      bool up = phase == 1;
      int j0 = up ? g.ny_lo : 0;
      int j1 = up ? g.ny() : g.ny_lo;
      std::vector<double> col(j1 - j0);
      for (int j = j0; j < j1; ++j) col[j - j0] = u1[g.iu1(i, j)];
      double d = up ? g.dy_hi : g.dy_lo;
      for (int k = 0; k < (int)col.size(); ++k)
        out[g.iu1(i, j0 + k)] = coldiff::d2(col, k, d);
    }
  return out;
}

inline std::vector<double> dx_u1(const std::vector<double>& u1,
                                 const GridSpec& g) {
  std::vector<double> out(g.n_u1());
  std::vector<double> row(g.nx + 1);
  for (int j = 0; j < g.ny(); ++j) {
    for (int i = 0; i <= g.nx; ++i) row[i] = u1[g.iu1(i, j)];
    for (int i = 0; i <= g.nx; ++i)
      out[g.iu1(i, j)] = coldiff::d1(row, i, g.dx);
  }
  return out;
}

inline std::vector<double> dxx_u1(const std::vector<double>& u1,
                                  const GridSpec& g) {
  std::vector<double> out(g.n_u1());
  std::vector<double> row(g.nx + 1);
  for (int j = 0; j < g.ny(); ++j) {
    for (int i = 0; i <= g.nx; ++i) row[i] = u1[g.iu1(i, j)];
    for (int i = 0; i <= g.nx; ++i)
      out[g.iu1(i, j)] = coldiff::d2(row, i, g.dx);
  }
  return out;
}

// u2 columns per phase include the boundary and one-sided interface faces:
// lower slots [0, ny_lo], upper slots [ny_lo+1, ny+1].
inline std::vector<double> u2_column(const std::vector<double>& u2,
                                     const GridSpec& g, int i, bool upper) {
  int s0 = upper ? g.slot_plus() : 0;
  int s1 = upper ? g.ny() + 2 : g.slot_minus() + 1;
  std::vector<double> col(s1 - s0);
  for (int s = s0; s < s1; ++s) col[s - s0] = u2[g.iu2(i, s)];
  return col;
}

// derivative fields over all u2 slots (slot-indexed output)
inline std::vector<double> dy_u2(const std::vector<double>& u2,
                                 const GridSpec& g) {
  std::vector<double> out(g.n_u2());
  for (int i = 0; i < g.nx; ++i)
    for (int phase = 0; phase < 2; ++phase) {
      bool up = phase == 1;
      auto col = u2_column(u2, g, i, up);
      double d = up ? g.dy_hi : g.dy_lo;
      int s0 = up ? g.slot_plus() : 0;
      for (int k = 0; k < (int)col.size(); ++k)
        out[g.iu2(i, s0 + k)] = coldiff::d1(col, k, d);
    }
  return out;
}

inline std::vector<double> dyy_u2(const std::vector<double>& u2,
                                  const GridSpec& g) {
  std::vector<double> out(g.n_u2());
  for (int i = 0; i < g.nx; ++i)
    for (int phase = 0; phase < 2; ++phase) {
      bool up = phase == 1;
      auto col = u2_column(u2, g, i, up);
      double d = up ? g.dy_hi : g.dy_lo;
      int s0 = up ? g.slot_plus() : 0;
      for (int k = 0; k < (int)col.size(); ++k)
        out[g.iu2(i, s0 + k)] = coldiff::d2(col, k, d);
    }
  return out;
}

inline std::vector<double> dx_u2(const std::vector<double>& u2,
                                 const GridSpec& g) {
  std::vector<double> out(g.n_u2());
  std::vector<double> row(g.nx);
  for (int s = 0; s < g.ny() + 2; ++s) {
    for (int i = 0; i < g.nx; ++i) row[i] = u2[g.iu2(i, s)];
    for (int i = 0; i < g.nx; ++i)
      out[g.iu2(i, s)] = coldiff::d1(row, i, g.dx);
  }
  return out;
}

inline std::vector<double> dxx_u2(const std::vector<double>& u2,
                                  const GridSpec& g) {
  std::vector<double> out(g.n_u2());
  std::vector<double> row(g.nx);
  for (int s = 0; s < g.ny() + 2; ++s) {
    for (int i = 0; i < g.nx; ++i) row[i] = u2[g.iu2(i, s)];
    for (int i = 0; i < g.nx; ++i)
      out[g.iu2(i, s)] = coldiff::d2(row, i, g.dx);
  }
  return out;
}

// one-sided interface values of a cell field, per phase, at cell centers
inline void trace_cell(const std::vector<double>& f, const GridSpec& g, int i,
                       double& minus, double& plus) {
  minus = stencil::extrap_face(f[g.icell(i, g.ny_lo - 1)],
                               f[g.icell(i, g.ny_lo - 2)],
                               f[g.icell(i, g.ny_lo - 3)]);
  plus = stencil::extrap_face(f[g.icell(i, g.ny_lo)],
                              f[g.icell(i, g.ny_lo + 1)],
                              f[g.icell(i, g.ny_lo + 2)]);
}

// one-sided d/dy of a cell field at y=0 (cells only, no trace unknowns)
inline void dy_at_iface_cells(const std::vector<double>& f, const GridSpec& g,
                              int i, double& minus, double& plus) {
  plus = stencil::dn_face_from_cells(f[g.icell(i, g.ny_lo)],
                                     f[g.icell(i, g.ny_lo + 1)],
                                     f[g.icell(i, g.ny_lo + 2)], g.dy_hi);
  minus = -stencil::dn_face_from_cells(f[g.icell(i, g.ny_lo - 1)],
                                       f[g.icell(i, g.ny_lo - 2)],
                                       f[g.icell(i, g.ny_lo - 3)], g.dy_lo);
}

// same for a u1 column (face abscissa i)
inline void dy_u1_at_iface(const std::vector<double>& u1, const GridSpec& g,
                           int i, double& minus, double& plus) {
  plus = stencil::dn_face_from_cells(u1[g.iu1(i, g.ny_lo)],
                                     u1[g.iu1(i, g.ny_lo + 1)],
                                     u1[g.iu1(i, g.ny_lo + 2)], g.dy_hi);
  minus = -stencil::dn_face_from_cells(u1[g.iu1(i, g.ny_lo - 1)],
                                       u1[g.iu1(i, g.ny_lo - 2)],
                                       u1[g.iu1(i, g.ny_lo - 3)], g.dy_lo);
}

inline void trace_u1(const std::vector<double>& u1, const GridSpec& g, int i,
                     double& minus, double& plus) {
  minus = stencil::extrap_face(u1[g.iu1(i, g.ny_lo - 1)],
                               u1[g.iu1(i, g.ny_lo - 2)],
                               u1[g.iu1(i, g.ny_lo - 3)]);
  plus = stencil::extrap_face(u1[g.iu1(i, g.ny_lo)], u1[g.iu1(i, g.ny_lo + 1)],
                              u1[g.iu1(i, g.ny_lo + 2)]);
}

// one-sided d/dy of u2 at y=0 from the doubled face rows
inline void dy_u2_at_iface(const std::vector<double>& u2, const GridSpec& g,
                           int i, double& minus, double& plus) {
  plus = stencil::dn_face_from_faces(u2[g.iu2(i, g.slot_plus())],
                                     u2[g.iu2(i, g.slot(g.ny_lo + 1))],
                                     u2[g.iu2(i, g.slot(g.ny_lo + 2))],
                                     g.dy_hi);
  minus = -stencil::dn_face_from_faces(u2[g.iu2(i, g.slot_minus())],
                                       u2[g.iu2(i, g.slot(g.ny_lo - 1))],
                                       u2[g.iu2(i, g.slot(g.ny_lo - 2))],
                                       g.dy_lo);
}

// h sample arrays at centers and faces
struct HSamples {
  std::vector<double> hc, hpc, hppc;  // nx
  std::vector<double> hfv, hpf, hppf;  // nx+1
};

inline HSamples h_samples(const HeightField& hf, const GridSpec& g, double sl,
                          double sr) {
  HSamples s;
  int n = g.nx;
  s.hc.resize(n);
  s.hpc.resize(n);
  s.hppc.resize(n);
  s.hfv.resize(n + 1);
  s.hpf.resize(n + 1);
  s.hppf.resize(n + 1);
  for (int i = 0; i < n; ++i) {
    s.hc[i] = hf.h[i];
    s.hpc[i] = h_prime_center(hf.h, g, i, sl, sr);
    s.hppc[i] = h_second_center(hf.h, g, i, sl, sr);
  }
  for (int i = 0; i <= n; ++i) {
    double left = (i == 0) ? h_ghost_left(hf.h, g.dx, sl) : hf.h[i - 1];
    double right = (i == n) ? h_ghost_right(hf.h, g.dx, sr) : hf.h[i];
    s.hfv[i] = 0.5 * (left + right);
    s.hpf[i] = h_prime_face(hf.h, g, i, sl, sr);
    s.hppf[i] = h_second_face(hf.h, g, i, sl, sr);
  }
  return s;
}

}  // namespace detail

// --- divergence defect ------------------------------------------------------

/// G_d = Tr (grad - grad_h) u = c du1/dy + (1 - b) du2/dy, at cell centers.
inline std::vector<double> g_d(const HeightField& hf, const State& st,
                               const BumpFunction& chi, const GridSpec& g,
                               double sl = 0, double sr = 0) {
  auto hs = detail::h_samples(hf, g, sl, sr);
  auto du1dy = detail::dy_u1(st.u1, g);
  std::vector<double> out(g.ncells());
  for (int j = 0; j < g.ny(); ++j) {
    double y = g.yc(j);
    for (int i = 0; i < g.nx; ++i) {
      auto cp = coeff_point(hs.hc[i], hs.hpc[i], hs.hppc[i], chi, y);
      double d1 = 0.5 * (du1dy[g.iu1(i, j)] + du1dy[g.iu1(i + 1, j)]);
      double d2 = (st.u2[g.iu2(i, g.slot_cell_top(j))] -
                   st.u2[g.iu2(i, g.slot_cell_bottom(j))]) /
                  g.dy(j);
      out[g.icell(i, j)] = cp.c * d1 + (1.0 - cp.b) * d2;
    }
  }
  return out;
}

// --- bulk chemical-potential defects ----------------------------------------

/// G_c = (Lap - Lap_h) eta and G_N = nu . (grad - grad_h) eta on the outer
/// boundary. The coefficient fields of Lap_h - Lap are analytic in
/// (h, h', h'', chi, chi', chi''), so no cancellation occurs at h = 0.
inline BulkEtaDefect g_bulk_eta(const HeightField& hf,
                                const std::vector<double>& eta,
                                const BumpFunction& chi, const GridSpec& g,
                                double sl = 0, double sr = 0) {
  auto hs = detail::h_samples(hf, g, sl, sr);
  auto ey = detail::dy_cell(eta, g);
  auto eyy = detail::dyy_cell(eta, g);
  auto exy = detail::dx_cell(ey, g);
  BulkEtaDefect out;
  out.g_c.resize(g.ncells());
  for (int j = 0; j < g.ny(); ++j) {
    double y = g.yc(j);
    for (int i = 0; i < g.nx; ++i) {
      auto cp = coeff_point(hs.hc[i], hs.hpc[i], hs.hppc[i], chi, y);
      int id = g.icell(i, j);
      // (Lap - Lap_h) f = (dc/dx) f_y + 2 c f_xy - c (dc/dy) f_y - c^2 f_yy
      //                   - b (db/dy) f_y - (b^2 - 1) f_yy
      out.g_c[id] = cp.dc_dx * ey[id] + 2.0 * cp.c * exy[id] -
                    cp.c * cp.dc_dy * ey[id] - cp.c * cp.c * eyy[id] -
                    cp.b * cp.db_dy * ey[id] -
                    (cp.b * cp.b - 1.0) * eyy[id];
    }
  }
  // walls: G_N = -/+ [ (grad - grad_h) eta ]_x = -/+ c eta_y at x = 0 / W
  out.g_n.left.resize(g.ny());
  out.g_n.right.resize(g.ny());
  for (int j = 0; j < g.ny(); ++j) {
    double y = g.yc(j);
    auto cpl = coeff_point(hs.hfv[0], hs.hpf[0], hs.hppf[0], chi, y);
    auto cpr = coeff_point(hs.hfv[g.nx], hs.hpf[g.nx], hs.hppf[g.nx], chi, y);
    double eyl = 1.5 * ey[g.icell(0, j)] - 0.5 * ey[g.icell(1, j)];
    double eyr = 1.5 * ey[g.icell(g.nx - 1, j)] - 0.5 * ey[g.icell(g.nx - 2, j)];
    out.g_n.left[j] = -cpl.c * eyl;
    out.g_n.right[j] = cpr.c * eyr;
  }
  // top and bottom: G_N = +/- (1 - b) eta_y; chi vanishes there, so both are
  // identically zero, but evaluate the formula anyway.
  out.g_n.bottom.resize(g.nx);
  out.g_n.top.resize(g.nx);
  for (int i = 0; i < g.nx; ++i) {
    auto cpb = coeff_point(hs.hc[i], hs.hpc[i], hs.hppc[i], chi, g.dom.L1);
    auto cpt = coeff_point(hs.hc[i], hs.hpc[i], hs.hppc[i], chi, g.dom.L2);
    double eyb = 1.5 * ey[g.icell(i, 0)] - 0.5 * ey[g.icell(i, 1)];
    double eyt =
        1.5 * ey[g.icell(i, g.ny() - 1)] - 0.5 * ey[g.icell(i, g.ny() - 2)];
    out.g_n.bottom[i] = -(1.0 - cpb.b) * eyb;
    out.g_n.top[i] = (1.0 - cpt.b) * eyt;
  }
  return out;
}

// --- kinematic defect on the interface --------------------------------------

/// G_Sigma = -u1|_S h' + h' [[eta_x]] - h'^2 [[eta_y]], at cell centers.
inline std::vector<double> g_sigma(const HeightField& hf, const State& st,
                                   const GridSpec& g, double sl = 0,
                                   double sr = 0) {
  auto ex = detail::dx_cell(st.eta, g);
  std::vector<double> out(g.nx);
  for (int i = 0; i < g.nx; ++i) {
    double hp = h_prime_center(hf.h, g, i, sl, sr);
    double u1m_l, u1p_l, u1m_r, u1p_r;
    detail::trace_u1(st.u1, g, i, u1m_l, u1p_l);
    detail::trace_u1(st.u1, g, i + 1, u1m_r, u1p_r);
    double u1S = 0.25 * (u1m_l + u1p_l + u1m_r + u1p_r);
    double exm, exp_;
    detail::trace_cell(ex, g, i, exm, exp_);
    double eym, eyp;
    detail::dy_at_iface_cells(st.eta, g, i, eym, eyp);
    out[i] = -u1S * hp + hp * (exp_ - exm) - hp * hp * (eyp - eym);
  }
  return out;
}

// --- stress defect on the interface ------------------------------------------

/// The three summands of G_S, split into the tangential component at x-face
/// nodes and the normal component at cell centers. At y = 0 the transform has
/// chi = 1, chi' = 0, so DTheta - I = [[0,0],[h',0]] exactly.
inline StressDefect g_stress(const HeightField& hf, const State& st,
                             const BumpFunction& /*chi*/, const GridSpec& g,
                             const FluidParams& par, double sl = 0,
                             double sr = 0) {
  StressDefect out;
  out.par.assign(g.nx + 1, 0.0);
  out.perp.assign(g.nx, 0.0);

  auto du1dx_rows = detail::dx_u1(st.u1, g);   // at u1 nodes
  auto du2dx_rows = detail::dx_u2(st.u2, g);   // at u2 slots

  // helper evaluating the full G_S vector at one interface sample given the
  // one-sided values there
  auto gs_vec = [&](double hp, double hpp, double dxu1m, double dxu1p,
                    double dyu1m, double dyu1p, double dxu2m, double dxu2p,
                    double dyu2m, double dyu2p, double qm, double qp,
                    std::array<double, 2>& v) {
    double s = std::sqrt(1.0 + hp * hp);
    double nux = -hp / s, nuy = 1.0 / s;
    double K = hpp / (s * s * s);
    // summand 1: [[ mu ((DTheta - I) Du + (.)^T) ]] nu
    auto s1 = [&](double mu, double dxu1, double dyu1) {
      return std::array<double, 2>{mu * hp * dxu1 * nuy,
                                   mu * (hp * dxu1 * nux + 2 * hp * dyu1 * nuy)};
    };
    auto a1p = s1(par.mu_plus, dxu1p, dyu1p);
    auto a1m = s1(par.mu_minus, dxu1m, dyu1m);
    // summand 2: [[ (mu (Du + Du^T) - q I)(e2 - nu) ]]
    double ex = hp / s, eyv = 1.0 - 1.0 / s;
    auto s2 = [&](double mu, double dxu1, double dyu1, double dxu2,
                  double dyu2, double q) {
      double t11 = 2 * mu * dxu1 - q, t12 = mu * (dyu1 + dxu2);
      double t22 = 2 * mu * dyu2 - q;
      return std::array<double, 2>{t11 * ex + t12 * eyv, t12 * ex + t22 * eyv};
    };
    auto a2p = s2(par.mu_plus, dxu1p, dyu1p, dxu2p, dyu2p, qp);
    auto a2m = s2(par.mu_minus, dxu1m, dyu1m, dxu2m, dyu2m, qm);
    // summand 3: sigma (K nu - h'' e2)
    v[0] = (a1p[0] - a1m[0]) + (a2p[0] - a2m[0]) + par.sigma * K * nux;
    v[1] = (a1p[1] - a1m[1]) + (a2p[1] - a2m[1]) +
           par.sigma * (K * nuy - hpp);
  };

  // per-column one-sided interface samples reused by both site families
  std::vector<double> dyu2m_c(g.nx), dyu2p_c(g.nx), qm_c(g.nx), qp_c(g.nx),
      dxu2m_c(g.nx), dxu2p_c(g.nx);
  for (int i = 0; i < g.nx; ++i) {
    detail::dy_u2_at_iface(st.u2, g, i, dyu2m_c[i], dyu2p_c[i]);
    detail::trace_cell(st.p, g, i, qm_c[i], qp_c[i]);
    dxu2m_c[i] = du2dx_rows[g.iu2(i, g.slot_minus())];
    dxu2p_c[i] = du2dx_rows[g.iu2(i, g.slot_plus())];
  }
  std::vector<double> dyu1m_f(g.nx + 1), dyu1p_f(g.nx + 1), dxu1m_f(g.nx + 1),
      dxu1p_f(g.nx + 1);
  for (int i = 0; i <= g.nx; ++i) {
    detail::dy_u1_at_iface(st.u1, g, i, dyu1m_f[i], dyu1p_f[i]);
    // trace of du1/dx along this face column
    double m = stencil::extrap_face(du1dx_rows[g.iu1(i, g.ny_lo - 1)],
                                    du1dx_rows[g.iu1(i, g.ny_lo - 2)],
                                    du1dx_rows[g.iu1(i, g.ny_lo - 3)]);
    double p = stencil::extrap_face(du1dx_rows[g.iu1(i, g.ny_lo)],
                                    du1dx_rows[g.iu1(i, g.ny_lo + 1)],
                                    du1dx_rows[g.iu1(i, g.ny_lo + 2)]);
    dxu1m_f[i] = m;
    dxu1p_f[i] = p;
  }

  // tangential component at interior x-face nodes
  for (int i = 1; i < g.nx; ++i) {
    double hp = h_prime_face(hf.h, g, i, sl, sr);
    double hpp = h_second_face(hf.h, g, i, sl, sr);
    double dxu2m = (st.u2[g.iu2(i, g.slot_minus())] -
                    st.u2[g.iu2(i - 1, g.slot_minus())]) /
                   g.dx;
    double dxu2p = (st.u2[g.iu2(i, g.slot_plus())] -
                    st.u2[g.iu2(i - 1, g.slot_plus())]) /
                   g.dx;
    std::array<double, 2> v;
    gs_vec(hp, hpp, dxu1m_f[i], dxu1p_f[i], dyu1m_f[i], dyu1p_f[i], dxu2m,
           dxu2p, 0.5 * (dyu2m_c[i - 1] + dyu2m_c[i]),
           0.5 * (dyu2p_c[i - 1] + dyu2p_c[i]),
           0.5 * (qm_c[i - 1] + qm_c[i]), 0.5 * (qp_c[i - 1] + qp_c[i]), v);
    out.par[i] = v[0];
  }
  // normal component at cell centers
  for (int i = 0; i < g.nx; ++i) {
    double hp = h_prime_center(hf.h, g, i, sl, sr);
    double hpp = h_second_center(hf.h, g, i, sl, sr);
    std::array<double, 2> v;
    gs_vec(hp, hpp, 0.5 * (dxu1m_f[i] + dxu1m_f[i + 1]),
           0.5 * (dxu1p_f[i] + dxu1p_f[i + 1]),
           0.5 * (dyu1m_f[i] + dyu1m_f[i + 1]),
           0.5 * (dyu1p_f[i] + dyu1p_f[i + 1]), dxu2m_c[i], dxu2p_c[i],
           dyu2m_c[i], dyu2p_c[i], qm_c[i], qp_c[i], v);
    out.perp[i] = v[1];
  }
  return out;
}

// --- wall stress defect (diagnostic only; the solver imposes zero) ----------

inline WallDefect g_wall(const HeightField& hf, const State& st,
                         const BumpFunction& chi, const GridSpec& g,
                         const FluidParams& /*par*/, double sl = 0,
                         double sr = 0) {
  WallDefect out;
  out.left.resize(g.ny());
  out.right.resize(g.ny());
  auto hs = detail::h_samples(hf, g, sl, sr);
  auto du1dy = detail::dy_u1(st.u1, g);
  for (int j = 0; j < g.ny(); ++j) {
    double y = g.yc(j), cy = chi(y), cpy = chi.d1(y);
    double dy_ph = g.dy(j);
    // d/dy u2 at the two columns nearest each wall, extrapolated to the wall
    auto dyu2at = [&](int i) {
      return (st.u2[g.iu2(i, g.slot_cell_top(j))] -
              st.u2[g.iu2(i, g.slot_cell_bottom(j))]) /
             dy_ph;
    };
    double dyu2l = 1.5 * dyu2at(0) - 0.5 * dyu2at(1);
    double dyu2r = 1.5 * dyu2at(g.nx - 1) - 0.5 * dyu2at(g.nx - 2);
    // d/dy of u.nu on the wall: u.nu = -u1 at x=0, +u1 at x=W
    double dyu1l = du1dy[g.iu1(0, j)];
    double dyu1r = du1dy[g.iu1(g.nx, j)];
    double Jl = 1.0 + hs.hfv[0] * cpy, Jr = 1.0 + hs.hfv[g.nx] * cpy;
    out.left[j] = (cy * dyu2l * hs.hpf[0] + cpy * hs.hfv[0] * (-dyu1l)) / Jl;
    out.right[j] =
        (cy * dyu2r * (-hs.hpf[g.nx]) + cpy * hs.hfv[g.nx] * dyu1r) / Jr;
  }
  return out;
}

// --- momentum right-hand side -----------------------------------------------

/// a_pm(h)(u,q) + abar(h,u,eta) on interior staggered nodes. The time-shift
/// term uses the identity  Du . d/dt Theta^{-1} = -chi dh/dt (1/J) du/dy;
/// moving everything to the right-hand side of the fixed-frame momentum
/// equation gives
///   f = mu (Lap_h - Lap) u + (grad - grad_h) q
///       + rho chi dh/dt (1/J) du/dy - rho (u . grad_h) u
///       - (rho+ - rho-) (grad_h eta . grad_h) u .
inline MomentumDefect conv_terms(const HeightField& hf,
                                 const std::vector<double>& dh_dt,
                                 const State& st, const BumpFunction& chi,
                                 const GridSpec& g, const FluidParams& par,
                                 bool general_density, double sl = 0,
                                 double sr = 0) {
  auto hs = detail::h_samples(hf, g, sl, sr);
  MomentumDefect out;
  out.f_u1.assign(g.n_u1(), 0.0);
  out.f_u2.assign(g.nx * (g.ny() + 1), 0.0);

  auto u1y = detail::dy_u1(st.u1, g);
  auto u1yy = detail::dyy_u1(st.u1, g);
  auto u1x = detail::dx_u1(st.u1, g);
  auto u1xx = detail::dxx_u1(st.u1, g);
  auto u1xy = detail::dx_u1(u1y, g);
  auto u2y = detail::dy_u2(st.u2, g);
  auto u2yy = detail::dyy_u2(st.u2, g);
  auto u2x = detail::dx_u2(st.u2, g);
  auto u2xx = detail::dxx_u2(st.u2, g);
  auto u2xy = detail::dx_u2(u2y, g);
  auto py = detail::dy_cell(st.p, g);
  auto ey = detail::dy_cell(st.eta, g);
  auto ex = detail::dx_cell(st.eta, g);

  double drho = par.rho_plus - par.rho_minus;
  bool with_density = general_density || drho != 0.0;

  // defect of the Laplacian applied to sampled derivative values
  auto lap_defect = [&](const CoeffPoint& cp, double fy, double fyy,
                        double fxy) {
    return -cp.dc_dx * fy - 2.0 * cp.c * fxy + cp.c * cp.dc_dy * fy +
           cp.c * cp.c * fyy + cp.b * cp.db_dy * fy +
           (cp.b * cp.b - 1.0) * fyy;
  };

  // u1 nodes (interior vertical faces)
  for (int j = 0; j < g.ny(); ++j) {
    double y = g.yc(j);
    bool up = g.upper_cell(j);
    double mu = up ? par.mu_plus : par.mu_minus;
    double rho = up ? par.rho_plus : par.rho_minus;
    for (int i = 1; i < g.nx; ++i) {
      auto cp = coeff_point(hs.hfv[i], hs.hpf[i], hs.hppf[i], chi, y);
      int id = g.iu1(i, j);
      double dhdt_f = 0.5 * (dh_dt[std::max(i - 1, 0)] +
                             dh_dt[std::min(i, g.nx - 1)]);
      double qy = 0.5 * (py[g.icell(i - 1, j)] + py[g.icell(i, j)]);
      double u2h = 0.25 * (st.u2[g.iu2(i - 1, g.slot_cell_bottom(j))] +
                           st.u2[g.iu2(i, g.slot_cell_bottom(j))] +
                           st.u2[g.iu2(i - 1, g.slot_cell_top(j))] +
                           st.u2[g.iu2(i, g.slot_cell_top(j))]);
      double f = mu * lap_defect(cp, u1y[id], u1yy[id], u1xy[id]) +
                 cp.c * qy;
      f += rho * cp.chi * dhdt_f * cp.b * u1y[id];
      f -= rho * (st.u1[id] * (u1x[id] - cp.c * u1y[id]) +
                  u2h * cp.b * u1y[id]);
      if (with_density) {
        double exv = 0.5 * (ex[g.icell(i - 1, j)] + ex[g.icell(i, j)]);
        double eyv = 0.5 * (ey[g.icell(i - 1, j)] + ey[g.icell(i, j)]);
        double G1 = exv - cp.c * eyv, G2 = cp.b * eyv;
        f -= drho * (G1 * (u1x[id] - cp.c * u1y[id]) + G2 * cp.b * u1y[id]);
      }
      out.f_u1[id] = f;
    }
  }

  // u2 nodes (interior horizontal faces, skipping the interface row)
  for (int jf = 1; jf < g.ny(); ++jf) {
    if (jf == g.ny_lo) continue;
    bool up = jf > g.ny_lo;
    double y = g.yf(jf);
    double mu = up ? par.mu_plus : par.mu_minus;
    double rho = up ? par.rho_plus : par.rho_minus;
    double d = up ? g.dy_hi : g.dy_lo;
    int s = g.slot(jf);
    for (int i = 0; i < g.nx; ++i) {
      auto cp = coeff_point(hs.hc[i], hs.hpc[i], hs.hppc[i], chi, y);
      int id = g.iu2(i, s);
      double qy = (st.p[g.icell(i, jf)] - st.p[g.icell(i, jf - 1)]) / d;
      double u1h = 0.25 * (st.u1[g.iu1(i, jf - 1)] + st.u1[g.iu1(i + 1, jf - 1)] +
                           st.u1[g.iu1(i, jf)] + st.u1[g.iu1(i + 1, jf)]);
      double f = mu * lap_defect(cp, u2y[id], u2yy[id], u2xy[id]) +
                 (1.0 - cp.b) * qy;
      f += rho * cp.chi * dh_dt[i] * cp.b * u2y[id];
      f -= rho * (u1h * (u2x[id] - cp.c * u2y[id]) +
                  st.u2[id] * cp.b * u2y[id]);
      if (with_density) {
        double exv = 0.5 * (ex[g.icell(i, jf - 1)] + ex[g.icell(i, jf)]);
        double eyv = 0.5 * (ey[g.icell(i, jf - 1)] + ey[g.icell(i, jf)]);
        double G1 = exv - cp.c * eyv, G2 = cp.b * eyv;
        f -= drho * (G1 * (u2x[id] - cp.c * u2y[id]) + G2 * cp.b * u2y[id]);
      }
      out.f_u2[jf * g.nx + i] = f;
    }
  }
  return out;
}

/// All components of the transformed-system right-hand side at one state.
inline NonlinearRHS nonlinear_rhs(const State& st,
                                  const std::vector<double>& dh_dt,
                                  const BumpFunction& chi, const GridSpec& g,
                                  const FluidParams& par, bool general_density,
                                  double sl = 0, double sr = 0) {
  NonlinearRHS r;
  r.f_u = conv_terms(st.h, dh_dt, st, chi, g, par, general_density, sl, sr);
  r.g_d = g_d(st.h, st, chi, g, sl, sr);
  r.g_s = g_stress(st.h, st, chi, g, par, sl, sr);
  r.g_sigma = g_sigma(st.h, st, g, sl, sr);
  auto bulk = g_bulk_eta(st.h, st.eta, chi, g, sl, sr);
  r.g_c = std::move(bulk.g_c);
  r.g_n = std::move(bulk.g_n);
  r.g_kappa = g_kappa(st.h, par, g, sl, sr);
  r.g_p = g_wall(st.h, st, chi, g, par, sl, sr);
  return r;
}

}  // namespace msns
