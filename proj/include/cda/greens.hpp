#pragma once
// Free-space dyadic Green's function: the elementary kernel of every lattice
// sum and of the finite-array interaction matrix.  G carries units 1/length;
// consumers always use the dimensionless combination lambda*G.

#include "cda/core.hpp"

namespace cda {

// G_ij(r) = e^{ikr}/(4 pi r) [ (1 + (ikr-1)/(kr)^2) delta_ij
//                            + (-1 + (3-3ikr)/(kr)^2) r_i r_j / r^2 ].
// Complex symmetric; even in r.  Throws DomainError for |r| < 1e-6 lambda
// (coincident-point physics lives in the self-term convention, not here).
CTensor3 dyadic_green(double k, const Vec3& r);

// Imaginary self-term G(0,0) = (i/(3 lambda)) delta_ij with lambda = 2 pi / k;
// the real part (Lamb shift) is absorbed into the resonance by convention.
CTensor3 self_green_imag(double k);

}  // namespace cda
