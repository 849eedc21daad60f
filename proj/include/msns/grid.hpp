#pragma once

#include <cmath>

#include "msns/common.hpp"

namespace msns {

/// Physical constants of the two fluids. Phase "+" occupies the upper half
/// of the reference frame (y > 0), phase "-" the lower half.
struct FluidParams {
  double rho_plus = 1.0;
  double rho_minus = 1.0;
  double mu_plus = 1.0;
  double mu_minus = 1.0;
  double sigma = 1.0;

  void validate() const {
    if (!(rho_plus > 0 && rho_minus > 0 && mu_plus > 0 && mu_minus > 0 &&
          sigma > 0))
      throw ValidationError("FluidParams: all constants must be positive");
  }
  bool equal_density() const { return rho_plus == rho_minus; }
};

/// Capillary geometry: the reference interface is (0,W) x {0}, the container
/// is (0,W) x (L1,L2) with L1 < 0 < L2.
struct DomainSpec {
  double W = 1.0;
  double L1 = -1.0;
  double L2 = 1.0;

  void validate() const {
    if (!(W > 0)) throw ValidationError("DomainSpec: W must be > 0");
    if (!(L1 < 0 && 0 < L2))
      throw ValidationError("DomainSpec: need L1 < 0 < L2");
  }
};

/// Staggered (MAC) grid. Uniform spacing within each vertical slab; the face
/// row y = 0 is grid-aligned with the reference interface. Cell rows
/// j in [0,ny_lo) lie below the interface, rows [ny_lo,ny) above.
struct GridSpec {
  int nx = 0;
  int ny_lo = 0;
  int ny_hi = 0;
  double dx = 0, dy_lo = 0, dy_hi = 0;
  DomainSpec dom;

  static GridSpec make(const DomainSpec& d, int nx, int ny_lo, int ny_hi) {
    d.validate();
    if (nx < 4 || ny_lo < 4 || ny_hi < 4)
      throw ValidationError("GridSpec: need nx, ny_lo, ny_hi >= 4");
    GridSpec g;
    g.nx = nx;
    g.ny_lo = ny_lo;
    g.ny_hi = ny_hi;
    g.dom = d;
    g.dx = d.W / nx;
    g.dy_lo = -d.L1 / ny_lo;
    g.dy_hi = d.L2 / ny_hi;
    return g;
  }

  int ny() const { return ny_lo + ny_hi; }
  int ncells() const { return nx * ny(); }

  double xc(int i) const { return (i + 0.5) * dx; }
  double xf(int i) const { return i * dx; }
  // cell-row center height
  double yc(int j) const {
    return j < ny_lo ? dom.L1 + (j + 0.5) * dy_lo : (j - ny_lo + 0.5) * dy_hi;
  }
  // face-row height, j in [0, ny]; yf(ny_lo) == 0 exactly
  double yf(int j) const {
    return j <= ny_lo ? dom.L1 + j * dy_lo : (j - ny_lo) * dy_hi;
  }
  bool upper_cell(int j) const { return j >= ny_lo; }
  double dy(int j) const { return j < ny_lo ? dy_lo : dy_hi; }
  double cell_vol(int j) const { return dx * dy(j); }

  // --- staggered layouts -------------------------------------------------
  // u1 lives on vertical faces (xf(i), yc(j)), i in [0,nx], j in [0,ny).
  int n_u1() const { return (nx + 1) * ny(); }
  int iu1(int i, int j) const { return j * (nx + 1) + i; }

  // u2 lives on horizontal faces (xc(i), yf(j)); the interface face row
  // j == ny_lo carries doubled one-sided values (minus below, plus above),
  // so there are ny()+2 slot rows.
  int n_u2() const { return nx * (ny() + 2); }
  int slot_minus() const { return ny_lo; }
  int slot_plus() const { return ny_lo + 1; }
  // slot of a plain face row, valid for j != ny_lo
  int slot(int j) const { return j < ny_lo ? j : j + 1; }
  // slot seen from a given cell: bottom face of cell j / top face of cell j
  int slot_cell_bottom(int j) const {
    return j == ny_lo ? slot_plus() : slot(j);
  }
  int slot_cell_top(int j) const {
    return j + 1 == ny_lo ? slot_minus() : slot(j + 1);
  }
  int iu2(int i, int s) const { return s * nx + i; }

  int icell(int i, int j) const { return j * nx + i; }
};

}  // namespace msns
