#pragma once
// Infinite-array linear response: bare/effective polarizability, p/s
// polarization bases, 2x2 scattering matrices, intensity R/T and the
// multi-order scattered-field expansion.

#include <vector>

#include "cda/cooperative.hpp"
#include "cda/core.hpp"
#include "cda/lattice.hpp"

namespace cda {

struct EmitterParams {
    double gamma = 1.0;     // radiative width (internal unit)
    double gamma_nr = 0.0;  // non-radiative width, units gamma
    double lambda_a = 1.0;  // resonance wavelength (internal unit)
};

// Forward (+, transmitted side) and backward (-, reflected side) polarization
// triplets for incidence angles (theta, phi); cartesian components.
struct PolBasis {
    double theta = 0.0, phi = 0.0;
    Vec3 e_k, e_p_plus, e_s_plus;    // forward: wavevector, p, s
    Vec3 e_kp, e_p_minus, e_s_minus; // backward (e_s_minus == e_s_plus)
};

enum class Regime { single_order, multi_order };

struct ScatterResult {
    KParallel kpar;
    double delta = 0.0;
    Eigen::Matrix2cd s_plus;   // forward scattering matrix, (p,s) basis
    Eigen::Matrix2cd s_minus;  // backward
    Eigen::Matrix2d transmission;  // T_mn = |delta_mn + S+_mn|^2
    Eigen::Matrix2d reflection;    // R_mn = |S-_mn|^2
    Regime regime = Regime::single_order;
};

// Bare polarizability alpha = -(3/4 pi^2) (gamma/2) / (delta + i(gamma+gamma_nr)/2),
// in units of eps0 lambda_a^3.
Complex bare_polarizability(const EmitterParams& p, double delta);

// Effective polarizability tensor (units eps0 lambda^3):
//   alpha_e = -(3/4 pi^2)(gamma/2) [ (delta - Delta) + (i/2)(gamma+gamma_nr+Gamma) ]^-1
// inverted on the xy-block (+) z-scalar structure.  Throws SingularResponse
// if a block is singular.
CTensor3 effective_polarizability(const CooperativeResponse& coop,
                                  const EmitterParams& p, double delta);

// SM polarization bases; theta in [0, pi/2).
PolBasis pol_basis(double theta, double phi);

// 2x2 scattering matrices S+-_mn = i pi (lambda/a)^2 (k/kz) e+-_m . alpha_e . e+_n
// (alpha_e dimensionless in eps0 lambda^3) and the intensity R/T matrices.
// Single-order regime only.
ScatterResult scattering_matrix(const CooperativeResponse& coop,
                                const EmitterParams& p, double delta,
                                double theta, double phi);

// Resonant amplitude with non-radiative loss: S = -(Gamma+gamma)/(Gamma+gamma+gamma_nr).
Complex lossy_resonance_amplitude(double gamma_scalar, double gamma,
                                  double gamma_nr);

// One diffraction order of the scattered field of the infinite array.
struct OrderAmplitude {
    DiffractionOrder order;
    CVec3 amp_above;  // plane-wave amplitude for z > 0
    CVec3 amp_below;  // for z < 0 (z-mixing sign flipped)
};

// Per-order plane-wave amplitudes for incident polarization e_in (unit).
std::vector<OrderAmplitude> scattered_order_amplitudes(double a, double k,
                                                       const KParallel& kpar,
                                                       const CTensor3& alpha_e,
                                                       const CVec3& e_in);

// Scattered field at r as the sum of propagating-order plane waves.
CVec3 scattered_field_orders(double a, double k, const KParallel& kpar,
                             const CTensor3& alpha_e, const CVec3& e_in,
                             const Vec3& r);

}  // namespace cda
