#pragma once
// Square-lattice geometry: Brillouin-zone paths and propagating
// diffraction-order enumeration.

#include <vector>

#include "cda/core.hpp"

namespace cda {

struct SquareLattice {
    double a;  // lattice constant, units of lambda_a
    double unit_cell_area() const { return a * a; }
};

// In-plane wavevector.  For propagating incidence |kpar| < k and kz is real;
// for Brillouin-zone use no propagation requirement holds.
struct KParallel {
    double kx = 0.0;
    double ky = 0.0;

    double norm() const { return std::hypot(kx, ky); }
    // Out-of-plane wavenumber; requires |kpar| < k.
    double kz(double k) const;
    double theta(double k) const { return std::asin(std::min(norm() / k, 1.0)); }
    double phi() const { return (kx == 0.0 && ky == 0.0) ? 0.0 : std::atan2(ky, kx); }
};

struct DiffractionOrder {
    int mx = 0;
    int my = 0;
    double qx = 0.0;     // reciprocal vector (2 pi / a) * m
    double qy = 0.0;
    double kappa = 0.0;  // out-of-plane wavenumber, real positive (propagating)
};

// Gamma -> X -> M -> Gamma piecewise-linear path with points_per_segment
// samples per segment; duplicate corner points removed.
std::vector<KParallel> bz_path(double a, int points_per_segment);

// All propagating diffraction orders |kpar + q_m| < k.  Throws
// ThresholdDegeneracy if any order sits within 1e-9 k of its threshold.
std::vector<DiffractionOrder> propagating_orders(double a, double k,
                                                 const KParallel& kpar);

}  // namespace cda
