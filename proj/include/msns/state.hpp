#pragma once

#include <vector>

#include "msns/geometry.hpp"

namespace msns {

/// One time level of the coupled problem on the fixed reference frame.
/// u2 uses the slot layout of GridSpec (doubled interface face row); u1S_m /
/// u1S_p are the one-sided interface traces of the tangential velocity kept
/// by the solver.
struct State {
  std::vector<double> u1;             // (nx+1) * ny
  std::vector<double> u1S_m, u1S_p;   // nx+1
  std::vector<double> u2;             // nx * (ny+2) slots
  std::vector<double> p;              // nx * ny
  std::vector<double> jump_p;         // nx
  HeightField h;
  std::vector<double> eta;            // nx * ny
  std::vector<double> etaS;           // nx
  double t = 0;

  static State zero(const GridSpec& g, const BumpFunction& chi) {
    State s;
    s.u1.assign(g.n_u1(), 0.0);
    s.u1S_m.assign(g.nx + 1, 0.0);
    s.u1S_p.assign(g.nx + 1, 0.0);
    s.u2.assign(g.n_u2(), 0.0);
    s.p.assign(g.ncells(), 0.0);
    s.jump_p.assign(g.nx, 0.0);
    s.h = HeightField::zero(g, chi);
    s.eta.assign(g.ncells(), 0.0);
    s.etaS.assign(g.nx, 0.0);
    return s;
  }
};

// --- one-sided stencils shared by evaluation code --------------------------
// All are exact on quadratics. "d" is the uniform sample spacing; cell-row
// samples sit at d/2, 3d/2, 5d/2 from the interface/boundary, face-row
// samples at 0, d, 2d.
namespace stencil {

// value at the face from the three nearest cell-row samples
inline double extrap_face(double f0, double f1, double f2) {
  return (15.0 * f0 - 10.0 * f1 + 3.0 * f2) / 8.0;
}
// d/dn at the face from cell-row samples, n pointing from the face into the
// phase (so for the upper phase this is +d/dy, for the lower phase -d/dy)
inline double dn_face_from_cells(double f0, double f1, double f2, double d) {
  return (-2.0 * f0 + 3.0 * f1 - f2) / d;
}
// d/dn at the face from face-row samples f0 (on the face), f1, f2
inline double dn_face_from_faces(double f0, double f1, double f2, double d) {
  return (-3.0 * f0 + 4.0 * f1 - f2) / (2.0 * d);
}
// d/dn at the face given the trace value t on the face and the two nearest
// cell-row samples (used by the solver rows; kept here so evaluation and
// assembly share one definition)
inline constexpr double trace_c0(double d) { return -8.0 / (3.0 * d); }
inline constexpr double trace_c1(double d) { return 3.0 / d; }
inline constexpr double trace_c2(double d) { return -1.0 / (3.0 * d); }
inline double dn_face_from_trace(double t, double f1, double f2, double d) {
  return trace_c0(d) * t + trace_c1(d) * f1 + trace_c2(d) * f2;
}
// second derivative at the first cell-row node, with the trace value t on
// the adjacent face: quadratic fit through (0,t), (d/2,f0), (3d/2,f1)
inline constexpr double d2_trace_ct(double d) { return 8.0 / (3.0 * d * d); }
inline constexpr double d2_trace_c0(double d) { return -4.0 / (d * d); }
inline constexpr double d2_trace_c1(double d) { return 4.0 / (3.0 * d * d); }

}  // namespace stencil

/// Per-phase finite differences for fields sampled on cell rows of one
/// column (uniform spacing within the phase); one-sided at the phase edges.
/// `f` is indexed 0..n-1 from the phase edge nearest the interface/boundary.
namespace coldiff {

inline double d1(const std::vector<double>& f, int k, double d) {
  int n = (int)f.size();
  if (k == 0) return (-3 * f[0] + 4 * f[1] - f[2]) / (2 * d);
  if (k == n - 1) return (3 * f[n - 1] - 4 * f[n - 2] + f[n - 3]) / (2 * d);
  return (f[k + 1] - f[k - 1]) / (2 * d);
}
inline double d2(const std::vector<double>& f, int k, double d) {
  int n = (int)f.size();
  if (k == 0) return (2 * f[0] - 5 * f[1] + 4 * f[2] - f[3]) / (d * d);
  if (k == n - 1)
    return (2 * f[n - 1] - 5 * f[n - 2] + 4 * f[n - 3] - f[n - 4]) / (d * d);
  return (f[k + 1] - 2 * f[k] + f[k - 1]) / (d * d);
}

}  // namespace coldiff

}  // namespace msns
