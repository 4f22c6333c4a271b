#pragma once
// Direct numerical solver for finite arrays: dense 3N x 3N coupled-dipole
// system, Gaussian-beam sources, total-field evaluation, numerical R/T
// extraction, disorder/defect studies, and the saturation estimate.

#include <cstdint>
#include <optional>
#include <vector>

#include "cda/core.hpp"
#include "cda/scatter.hpp"

namespace cda {

struct FiniteArray {
    std::vector<Vec3> positions;  // units lambda
    EmitterParams params;
    double delta = 0.0;  // detuning, units gamma
    // provenance
    int nx = 0, ny = 0;
    double a = 0.0;
    std::uint64_t displacement_seed = 0;
    std::vector<int> removed_sites;
};

// N_x x N_y perfect square lattice centered on the origin in the z = 0 plane.
FiniteArray make_lattice_array(int nx, int ny, double a,
                               const EmitterParams& params, double delta);

struct BeamSpec {
    double w0 = 1.0;       // waist, units lambda (paraxial: w0 >= 1/2)
    double theta = 0.0;    // incidence angle in the xz-plane
    char polarization = 'x';  // 'p' | 's' ('x' | 'y' at normal incidence)
    double amplitude = 1.0;   // E0 internal unit

    double rayleigh_range() const { return kPi * w0 * w0; }
    // waist-vs-array rule: w0 <= 0.3 a sqrt(N) cos(theta)
    bool waist_rule_ok(int n_sites, double a) const {
        return w0 <= 0.3 * a * std::sqrt(static_cast<double>(n_sites)) *
                         std::cos(theta) + 1e-12;
    }
};

// Paraxial Gaussian beam in the rotated frame x' = x cos t - z sin t, y' = y,
// z' = z cos t + x sin t, focus at the origin; polarization
// e_p = cos t e_x - sin t e_z, e_s = -e_y.
CVec3 gaussian_beam(const BeamSpec& beam, double k, const Vec3& r);

struct DipoleSolution {
    std::vector<CVec3> local_fields;    // E_n solving the system
    std::vector<CVec3> dipoles;         // p_n = alpha~ E_n (units eps0 lambda^3 E0)
    std::vector<CVec3> incident_fields; // E0(r_n)
    Complex alpha;                      // dimensionless polarizability used
    double residual = 0.0;              // relative linear-system residual
};

// M = I - 4 pi^2 alpha~ lambda G, zero diagonal blocks (self-term excluded).
Eigen::MatrixXcd build_system(const FiniteArray& array, double k);

// Solve the Lippmann-Schwinger system for a Gaussian-beam source.
DipoleSolution solve_dipoles(const FiniteArray& array, const BeamSpec& beam,
                             double k);
// Plane-wave source with wavevector direction (sin t, 0, cos t) and given
// polarization vector.
DipoleSolution solve_dipoles_plane_wave(const FiniteArray& array, double theta,
                                        const CVec3& pol, double k);

// Total field E(r) = E0(r) + 4 pi^2 sum_n lambda G(r, r_n) alpha~ E_n.
CVec3 field_at(const DipoleSolution& sol, const FiniteArray& array,
               const BeamSpec& beam, double k, const Vec3& r);
// Scattered part only.
CVec3 scattered_field_at(const DipoleSolution& sol, const FiniteArray& array,
                         double k, const Vec3& r);

struct RTResult {
    double transmission = 0.0;
    double reflection = 0.0;
    bool waist_warning = false;  // waist rule violated: edge diffraction
};

// T_num = <|E_tot/E_inc|^2> over one lambda along the transmitted-beam axis
// near z = +6 lambda; R_num from the scattered amplitude on the
// reflected-beam axis at z = -6 lambda.
RTResult extract_rt(const FiniteArray& array, const BeamSpec& beam, double k);

struct DisorderStats {
    double mean = 0.0;        // ensemble mean of the per-sample shift
    double std_error = 0.0;   // standard error of the mean
    double predicted = 0.0;   // 4 pi^2 (dr/lambda)^2 Delta_est(perfect)
    double delta_perfect = 0.0;  // uniform-phase-mode estimate, perfect array
    int n_samples = 0;
    std::vector<double> samples;
};

// Monte-Carlo statistics of the disorder-induced cooperative shift.
// Per-sample estimator: uniform-phase (kpar = 0) mode energy
//   Delta_est = -(3/2) (1/N) sum_{m != n} Re[lambda G_xx(r_m - r_n)].
// Displacements are independent Gaussians (std dr) per component; in-plane by
// default, 3D with three_d = true (the SM average <dDelta> = 4pi^2 (dr/l)^2 Delta
// uses the 3D Laplacian identity).  antithetic pairs (+d, -d) cancel the
// odd-order noise and sharpen the mean at fixed sample count.
DisorderStats disorder_ensemble(int nx, int ny, double a, double dr,
                                int n_samples, std::uint64_t seed,
                                bool three_d = false, bool antithetic = false);

struct DefectResult {
    RTResult perfect;
    RTResult defected;
    double d_transmission = 0.0;
    double d_reflection = 0.0;
};

// R/T change when the listed sites are removed from the lattice.
DefectResult defect_study(int nx, int ny, double a, double delta,
                          const std::vector<int>& removed_sites,
                          const BeamSpec& beam, double k);

struct SaturationResult {
    double p0 = 0.0;        // power fraction absorbed by the central atom
    double n_photons = 0.0; // N = 1/P0
    double w_sat = 0.0;     // N (Gamma+gamma), units hbar omega_a gamma
    double gamma_total = 0.0;  // Gamma + gamma at this spacing
    double p_sum = 0.0;     // sum_n P_n (Riemann check, -> 1 for w0 >> a)
};

// SM saturation estimate at normal incidence, delta = Delta, gamma_nr = 0:
// P_n = a^2/((pi/2) w0^2) exp(-2 (a^2/w0^2)(nx^2+ny^2)).
SaturationResult saturation_estimate(double a, double w0);

}  // namespace cda
