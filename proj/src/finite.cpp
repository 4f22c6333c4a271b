#include "cda/finite.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "cda/cooperative.hpp"
#include "cda/greens.hpp"

namespace cda {

namespace {

constexpr int kMaxSites = 5000;  // dense-memory guard (3N <= 15000 unknowns)

// Deterministic standard normal via Box-Muller on mt19937_64 uniforms;
// avoids library-dependent normal_distribution streams.
class NormalRng {
  public:
    explicit NormalRng(std::uint64_t seed) : eng_(seed) {}
    double operator()() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = 0.0;
        do {
            u1 = uniform();
        } while (u1 <= 1e-300);
        const double u2 = uniform();
        const double mag = std::sqrt(-2.0 * std::log(u1));
        spare_ = mag * std::sin(2.0 * kPi * u2);
        have_spare_ = true;
        return mag * std::cos(2.0 * kPi * u2);
    }

  private:
    double uniform() {
        return (eng_() >> 11) * (1.0 / 9007199254740992.0);  // 53-bit
    }
    std::mt19937_64 eng_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace

FiniteArray make_lattice_array(int nx, int ny, double a,
                               const EmitterParams& params, double delta) {
    if (nx < 1 || ny < 1 || !(a > 0.0))
        throw DomainError("make_lattice_array: bad lattice spec");
    if (nx * ny > kMaxSites)
        throw DomainError(
            "make_lattice_array: site count exceeds dense-solver guard (5000); "
            "tiling/iterative modes are out of scope");
    FiniteArray arr;
    arr.nx = nx;
    arr.ny = ny;
    arr.a = a;
    arr.params = params;
    arr.delta = delta;
    arr.positions.reserve(static_cast<std::size_t>(nx) * ny);
    for (int i = 0; i < nx; ++i) {
        for (int j = 0; j < ny; ++j) {
            arr.positions.emplace_back((i - (nx - 1) / 2.0) * a,
                                       (j - (ny - 1) / 2.0) * a, 0.0);
        }
    }
    return arr;
}

CVec3 gaussian_beam(const BeamSpec& beam, double k, const Vec3& r) {
    if (!(beam.w0 >= 0.5 * 2.0 * kPi / k))
        throw DomainError("gaussian_beam: w0 < lambda/2 breaks paraxiality");
    const double ct = std::cos(beam.theta), st = std::sin(beam.theta);
    const double xp = r(0) * ct - r(2) * st;
    const double yp = r(1);
    const double zp = r(2) * ct + r(0) * st;

    const double zr = beam.rayleigh_range();
    const double w = beam.w0 * std::sqrt(1.0 + (zp / zr) * (zp / zr));
    const double rho2 = xp * xp + yp * yp;
    const double gouy = std::atan(zp / zr);
    double curvature_phase = 0.0;
    if (zp != 0.0) {
        const double rc = zp * (1.0 + (zr / zp) * (zr / zp));
        curvature_phase = k * rho2 / (2.0 * rc);
    }
    const double amp = beam.amplitude * (beam.w0 / w) * std::exp(-rho2 / (w * w));
    const Complex field = amp * std::exp(kImag * (k * zp + curvature_phase - gouy));

    Vec3 pol;
    switch (beam.polarization) {
        case 'p':
        case 'x':
            pol = Vec3(ct, 0.0, -st);
            break;
        case 's':
        case 'y':
            pol = Vec3(0.0, -1.0, 0.0);
            break;
        default:
            throw DomainError("gaussian_beam: polarization must be p/s/x/y");
    }
    return field * pol.cast<Complex>();
}

Eigen::MatrixXcd build_system(const FiniteArray& array, double k) {
    const int n = static_cast<int>(array.positions.size());
    if (n > kMaxSites)
        throw DomainError("build_system: site count exceeds dense-solver guard");
    const double lambda = 2.0 * kPi / k;
    const Complex alpha = bare_polarizability(array.params, array.delta);
    const Complex coupling = 4.0 * kPi * kPi * alpha * lambda;

    Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(3 * n, 3 * n);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const CTensor3 g = dyadic_green(k, array.positions[j] - array.positions[i]);
            // G(r) is even: the (j,i) block equals the (i,j) block
            m.block<3, 3>(3 * j, 3 * i) -= coupling * g;
            m.block<3, 3>(3 * i, 3 * j) -= coupling * g;
        }
    }
    return m;
}

namespace {

DipoleSolution solve_with_source(const FiniteArray& array, double k,
                                 const std::vector<CVec3>& source) {
    const int n = static_cast<int>(array.positions.size());
    const Eigen::MatrixXcd m = build_system(array, k);
    Eigen::VectorXcd e0(3 * n);
    for (int i = 0; i < n; ++i) e0.segment<3>(3 * i) = source[i];

    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(m);
    const Eigen::VectorXcd e = lu.solve(e0);
    const double res = (m * e - e0).norm() / std::max(e0.norm(), 1e-300);

    DipoleSolution sol;
    sol.alpha = bare_polarizability(array.params, array.delta);
    sol.residual = res;
    sol.local_fields.resize(n);
    sol.dipoles.resize(n);
    sol.incident_fields = source;
    for (int i = 0; i < n; ++i) {
        sol.local_fields[i] = e.segment<3>(3 * i);
        sol.dipoles[i] = sol.alpha * sol.local_fields[i];
    }
    return sol;
}

}  // namespace

DipoleSolution solve_dipoles(const FiniteArray& array, const BeamSpec& beam,
                             double k) {
    std::vector<CVec3> src(array.positions.size());
    for (std::size_t i = 0; i < array.positions.size(); ++i)
        src[i] = gaussian_beam(beam, k, array.positions[i]);
    return solve_with_source(array, k, src);
}

DipoleSolution solve_dipoles_plane_wave(const FiniteArray& array, double theta,
                                        const CVec3& pol, double k) {
    const Vec3 kvec(k * std::sin(theta), 0.0, k * std::cos(theta));
    std::vector<CVec3> src(array.positions.size());
    for (std::size_t i = 0; i < array.positions.size(); ++i)
        src[i] = std::exp(kImag * kvec.dot(array.positions[i])) * pol;
    return solve_with_source(array, k, src);
}

CVec3 scattered_field_at(const DipoleSolution& sol, const FiniteArray& array,
                         double k, const Vec3& r) {
    const double lambda = 2.0 * kPi / k;
    CVec3 field = CVec3::Zero();
    for (std::size_t i = 0; i < array.positions.size(); ++i) {
        field += lambda * (dyadic_green(k, r - array.positions[i]) *
                           sol.local_fields[i]);
    }
    return 4.0 * kPi * kPi * sol.alpha * field;
}

CVec3 field_at(const DipoleSolution& sol, const FiniteArray& array,
               const BeamSpec& beam, double k, const Vec3& r) {
    return gaussian_beam(beam, k, r) + scattered_field_at(sol, array, k, r);
}

RTResult extract_rt(const FiniteArray& array, const BeamSpec& beam, double k) {
    RTResult out;
    out.waist_warning =
        !beam.waist_rule_ok(static_cast<int>(array.positions.size()), array.a);

    const DipoleSolution sol = solve_dipoles(array, beam, k);
    const double lambda = 2.0 * kPi / k;
    const Vec3 axis_fwd(std::sin(beam.theta), 0.0, std::cos(beam.theta));
    const Vec3 axis_bwd(std::sin(beam.theta), 0.0, -std::cos(beam.theta));

    const int n_avg = 21;
    double t_sum = 0.0, r_sum = 0.0;
    for (int i = 0; i < n_avg; ++i) {
        // one wavelength centered on |z| = 6 lambda along the beam axes
        const double d = (6.0 - 0.5 + static_cast<double>(i) / (n_avg - 1)) * lambda;
        const Vec3 r_fwd = d * axis_fwd;
        const Vec3 r_bwd = d * axis_bwd;
        const CVec3 e_inc = gaussian_beam(beam, k, r_fwd);
        const CVec3 e_tot = e_inc + scattered_field_at(sol, array, k, r_fwd);
        const CVec3 e_ref = scattered_field_at(sol, array, k, r_bwd);
        t_sum += e_tot.squaredNorm() / e_inc.squaredNorm();
        r_sum += e_ref.squaredNorm() / e_inc.squaredNorm();
    }
    out.transmission = t_sum / n_avg;
    out.reflection = r_sum / n_avg;
    return out;
}

namespace {

// Uniform-phase (kpar = 0) mode-energy estimate of the cooperative shift
// for an explicit set of positions.
double delta_estimate(const std::vector<Vec3>& pos, double k) {
    const double lambda = 2.0 * kPi / k;
    const std::size_t n = pos.size();
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const Vec3 d = pos[j] - pos[i];
            acc += 2.0 * (lambda * dyadic_green(k, d)(0, 0)).real();
        }
    }
    return -1.5 * acc / static_cast<double>(n);
}

}  // namespace

DisorderStats disorder_ensemble(int nx, int ny, double a, double dr,
                                int n_samples, std::uint64_t seed,
                                bool three_d, bool antithetic) {
    if (!(dr >= 0.0) || dr > 0.05 * a)
        throw DomainError("disorder_ensemble: require 0 <= dr <= 0.05 a");
    if (n_samples < 1) throw DomainError("disorder_ensemble: n_samples < 1");

    const double k = kWavenumber;
    const FiniteArray perfect = make_lattice_array(nx, ny, a, {}, 0.0);
    DisorderStats stats;
    stats.delta_perfect = delta_estimate(perfect.positions, k);
    // second-order Gaussian average with the Helmholtz identity
    // laplacian(G) = -k^2 G: each pair term acquires -(k dr)^2, so the mean
    // estimator shift is -4 pi^2 (dr/lambda)^2 Delta_perfect.
    stats.predicted = -4.0 * kPi * kPi * dr * dr * stats.delta_perfect;
    stats.n_samples = n_samples;

    if (dr == 0.0) {
        stats.samples.assign(n_samples, 0.0);
        return stats;
    }

    NormalRng rng(seed);
    const std::size_t n = perfect.positions.size();
    std::vector<Vec3> displaced(n);
    std::vector<Vec3> shifts(n);
    stats.samples.reserve(n_samples);
    for (int s = 0; s < n_samples; ++s) {
        for (std::size_t i = 0; i < n; ++i) {
            shifts[i] = Vec3(dr * rng(), dr * rng(), three_d ? dr * rng() : 0.0);
        }
        double sample = 0.0;
        const int reps = antithetic ? 2 : 1;
        for (int rep = 0; rep < reps; ++rep) {
            const double sign = (rep == 0) ? 1.0 : -1.0;
            for (std::size_t i = 0; i < n; ++i)
                displaced[i] = perfect.positions[i] + sign * shifts[i];
            sample += delta_estimate(displaced, k) - stats.delta_perfect;
        }
        stats.samples.push_back(sample / reps);
    }

    double mean = 0.0;
    for (double v : stats.samples) mean += v;
    mean /= n_samples;
    double var = 0.0;
    for (double v : stats.samples) var += (v - mean) * (v - mean);
    var = (n_samples > 1) ? var / (n_samples - 1) : 0.0;
    stats.mean = mean;
    stats.std_error = std::sqrt(var / n_samples);
    return stats;
}

DefectResult defect_study(int nx, int ny, double a, double delta,
                          const std::vector<int>& removed_sites,
                          const BeamSpec& beam, double k) {
    const FiniteArray perfect = make_lattice_array(nx, ny, a, {}, delta);
    FiniteArray defected = perfect;
    defected.removed_sites = removed_sites;
    for (int idx : removed_sites) {
        if (idx < 0 || idx >= static_cast<int>(perfect.positions.size()))
            throw DomainError("defect_study: removed site outside lattice");
    }
    std::vector<Vec3> kept;
    for (int i = 0; i < static_cast<int>(perfect.positions.size()); ++i) {
        if (std::find(removed_sites.begin(), removed_sites.end(), i) ==
            removed_sites.end())
            kept.push_back(perfect.positions[i]);
    }
    defected.positions = kept;

    DefectResult res;
    res.perfect = extract_rt(perfect, beam, k);
    res.defected = extract_rt(defected, beam, k);
    res.d_transmission = res.defected.transmission - res.perfect.transmission;
    res.d_reflection = res.defected.reflection - res.perfect.reflection;
    return res;
}

SaturationResult saturation_estimate(double a, double w0) {
    if (!(w0 >= 0.5))
        throw DomainError("saturation_estimate: w0 < lambda/2 is non-paraxial");
    if (!(a > 0.0 && a < 1.0))
        throw DomainError("saturation_estimate: need 0 < a < lambda");

    SaturationResult res;
    res.p0 = a * a / ((kPi / 2.0) * w0 * w0);
    res.n_photons = 1.0 / res.p0;
    // Gamma + gamma at normal incidence from the closed form
    res.gamma_total = (3.0 / (4.0 * kPi)) / (a * a);
    res.w_sat = res.n_photons * res.gamma_total;

    // Riemann check of the SM Gaussian: sum_n P_n -> 1
    const int nmax = static_cast<int>(std::ceil(6.0 * w0 / a)) + 1;
    double p_sum = 0.0;
    for (int ix = -nmax; ix <= nmax; ++ix)
        for (int iy = -nmax; iy <= nmax; ++iy)
            p_sum += res.p0 * std::exp(-2.0 * (a * a / (w0 * w0)) *
                                       (static_cast<double>(ix) * ix +
                                        static_cast<double>(iy) * iy));
    res.p_sum = p_sum;
    return res;
}

}  // namespace cda
