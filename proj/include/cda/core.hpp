#pragma once
// Unit conventions, small linear-algebra aliases, the 3x3 symmetric
// eigensolver and principal-value quadrature shared by all modules.
//
// Units (fixed internally, documented at every I/O boundary):
//   lengths in lambda_a (resonance wavelength), lambda_a = 1
//   rates/energies in gamma (single-emitter radiative width), gamma = 1
//   field amplitudes in incident peak amplitude E0
//   Markov convention: the wavelength entering lattice sums equals lambda_a,
//   so the wavenumber is k = 2*pi.

#include <array>
#include <complex>
#include <numbers>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "cda/errors.hpp"

namespace cda {

using Complex = std::complex<double>;
using CVec3 = Eigen::Vector3cd;
using CTensor3 = Eigen::Matrix3cd;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

inline constexpr double kPi = std::numbers::pi;
// Wavenumber in internal units (lambda_a = 1).
inline constexpr double kWavenumber = 2.0 * std::numbers::pi;
inline constexpr Complex kImag{0.0, 1.0};

struct SymEigen3 {
    std::array<double, 3> values{};  // ascending
    Mat3 vectors;                    // columns, orthonormal
};

// Eigendecomposition of a real symmetric 3x3 matrix.  Throws
// ContractViolation if m is not symmetric within 1e-10 relative.
SymEigen3 sym_eigen3(const Mat3& m);

// Principal-value integral  PV int f(u)/(pole - u) du  over the sampled grid
// by pole subtraction: trapezoid of [f(u) - f(pole)]/(pole - u) plus the
// analytic log term f(pole)*log|(pole - u_min)/(pole - u_max)|.
// Grid must be strictly increasing with >= 4 points; pole strictly inside.
double pv_integral(std::span<const double> u, std::span<const double> f,
                   double pole);

}  // namespace cda
