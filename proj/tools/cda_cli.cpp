// Command-line driver: reproduces each figure's underlying data as CSV
// tables with embedded run metadata.  See README for the column schemas.

#include <atomic>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "cda/cli_io.hpp"
#include "cda/cooperative.hpp"
#include "cda/finite.hpp"
#include "cda/scatter.hpp"

namespace {

using namespace cda;

constexpr const char* kArtifactVersion = "1.0.0";
constexpr const char* kUnitsStatement =
    "lengths in lambda_a; rates/energies in gamma; k = 2*pi";

double deg2rad(double deg) { return deg * kPi / 180.0; }

// Deterministic-order parallel map: results land at their input index no
// matter which worker finishes first.
void parallel_for(std::size_t n, int jobs,
                  const std::function<void(std::size_t)>& fn) {
    jobs = std::max(1, jobs);
    if (jobs == 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    const int n_threads = std::min<std::size_t>(jobs, n);
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

struct CommandContext {
    RunConfig cfg;
    std::string command;

    double a() const { return cfg.get_double("a", 0.2); }
    double delta() const { return cfg.get_double("delta", 0.0); }
    double tol() const { return cfg.get_double("tol", 1e-3); }
    int jobs() const {
        const int hw = static_cast<int>(std::thread::hardware_concurrency());
        return cfg.get_int("jobs", std::max(1, hw));
    }
    EmitterParams params() const {
        EmitterParams p;
        p.gamma_nr = cfg.get_double("gamma-nr", 0.0);
        if (p.gamma_nr < 0.0) throw DomainError("gamma-nr must be >= 0");
        return p;
    }
    std::string out_path() const { return cfg.get("out", command + ".csv"); }

    void stamp(ResultTable& table) const {
        table.add_meta("artifact_version", kArtifactVersion);
        table.add_meta("command", command);
        char hash[32];
        std::snprintf(hash, sizeof(hash), "%016llx",
                      static_cast<unsigned long long>(cfg.hash()));
        table.add_meta("config_hash", hash);
        table.add_meta("units", kUnitsStatement);
        for (const auto& [k, v] : cfg.entries()) table.add_meta("config." + k, v);
    }

    void write(ResultTable& table, double max_convergence_error,
               double max_cross_check) const {
        table.add_meta("convergence_max_error", format_g12(max_convergence_error));
        if (max_cross_check >= 0.0)
            table.add_meta("gamma_cross_check_max", format_g12(max_cross_check));
        table.write_csv_file(out_path());
        table.write_json_sidecar(out_path() + ".json");
        std::cout << "wrote " << out_path() << " (" << table.n_rows()
                  << " rows)\n";
    }
};

// ---- sweep-lattice ------------------------------------------------------

int cmd_sweep_lattice(const CommandContext& ctx) {
    const double a_min = ctx.cfg.get_double("a-min", 0.1);
    const double a_max = ctx.cfg.get_double("a-max", 0.98);
    const double a_step = ctx.cfg.get_double("a-step", 0.005);
    if (!(a_min > 0.0 && a_max > a_min && a_step > 0.0))
        throw DomainError("sweep-lattice: need 0 < a-min < a-max, a-step > 0");
    const EmitterParams params = ctx.params();
    const double delta = ctx.delta();

    std::vector<double> grid;
    for (double a = a_min; a <= a_max + 1e-12; a += a_step) {
        if (std::abs(a - 1.0) < 1e-3) continue;  // diffraction threshold
        grid.push_back(a);
    }

    struct Row {
        double t = 0, r = 0, dlt = 0, gma = 0, conv = 0;
        bool ok = false;
    };
    std::vector<Row> rows(grid.size());
    parallel_for(grid.size(), ctx.jobs(), [&](std::size_t i) {
        try {
            CooperativeResponse coop =
                cooperative_response(grid[i], kWavenumber, {0.0, 0.0}, ctx.tol());
            // exact radiative width keeps T+R = 1 at machine level
            coop.gamma_tensor =
                gamma_reciprocal(grid[i], kWavenumber, {0.0, 0.0});
            const ScatterResult sm =
                scattering_matrix(coop, params, delta, 0.0, 0.0);
            rows[i] = {sm.transmission(0, 0), sm.reflection(0, 0),
                       coop.delta_tensor(0, 0), coop.gamma_tensor(0, 0),
                       coop.report.error_estimate, true};
        } catch (const Error&) {
            rows[i].ok = false;  // flagged row; sweep continues
        }
    });

    ResultTable table({"a", "T", "R", "Delta", "Gamma"},
                      {"lambda", "1", "1", "gamma", "gamma"});
    ctx.stamp(table);
    double conv = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (rows[i].ok) {
            table.add_row({grid[i], rows[i].t, rows[i].r, rows[i].dlt,
                           rows[i].gma});
            conv = std::max(conv, rows[i].conv);
        } else {
            table.add_failed_row(3, {grid[i]});
        }
    }
    ctx.write(table, conv, -1.0);
    return 0;
}

// ---- map-detuning -------------------------------------------------------

int cmd_map_detuning(const CommandContext& ctx) {
    const double a_min = ctx.cfg.get_double("a-min", 0.1);
    const double a_max = ctx.cfg.get_double("a-max", 0.98);
    const int a_n = ctx.cfg.get_int("a-n", 160);
    const double d_min = ctx.cfg.get_double("delta-min", -15.0);
    const double d_max = ctx.cfg.get_double("delta-max", 15.0);
    const int d_n = ctx.cfg.get_int("delta-n", 120);
    if (a_n < 2 || d_n < 2) throw DomainError("map-detuning: grid too small");
    const EmitterParams params = ctx.params();

    std::vector<double> a_grid;
    for (int i = 0; i < a_n; ++i) {
        const double a = a_min + (a_max - a_min) * i / (a_n - 1.0);
        if (std::abs(a - 1.0) < 1e-3) continue;
        a_grid.push_back(a);
    }

    struct Column {
        double dlt = 0, gma = 0, conv = 0;
        std::vector<double> r, t;
        bool ok = false;
    };
    std::vector<Column> cols(a_grid.size());
    parallel_for(a_grid.size(), ctx.jobs(), [&](std::size_t i) {
        try {
            // one lattice sum per a column; detuning only moves the Lorentzian
            const CooperativeResponse coop =
                cooperative_response(a_grid[i], kWavenumber, {0.0, 0.0}, ctx.tol());
            Column& c = cols[i];
            c.dlt = coop.delta_tensor(0, 0);
            c.gma = coop.gamma_tensor(0, 0);
            c.conv = coop.report.error_estimate;
            for (int j = 0; j < d_n; ++j) {
                const double d = d_min + (d_max - d_min) * j / (d_n - 1.0);
                const ScatterResult sm =
                    scattering_matrix(coop, params, d, 0.0, 0.0);
                c.r.push_back(sm.reflection(0, 0));
                c.t.push_back(sm.transmission(0, 0));
            }
            c.ok = true;
        } catch (const Error&) {
            cols[i].ok = false;
        }
    });

    ResultTable table({"a", "delta", "R", "T", "Delta_a", "Gamma_a"},
                      {"lambda", "gamma", "1", "1", "gamma", "gamma"});
    ctx.stamp(table);
    double conv = 0.0;
    for (std::size_t i = 0; i < a_grid.size(); ++i) {
        if (!cols[i].ok) {
            table.add_failed_row(3, {a_grid[i]});
            continue;
        }
        conv = std::max(conv, cols[i].conv);
        for (int j = 0; j < d_n; ++j) {
            const double d = d_min + (d_max - d_min) * j / (d_n - 1.0);
            table.add_row({a_grid[i], d, cols[i].r[j], cols[i].t[j],
                           cols[i].dlt, cols[i].gma});
        }
    }
    ctx.write(table, conv, -1.0);
    return 0;
}

// ---- angle-map ----------------------------------------------------------

struct AnglePoint {
    double r_ss = 0, r_pp = 0, r_sp = 0, d_ss = 0, d_pp = 0, conv = 0,
           cross = 0;
    bool ok = false;
};

// One (kx, ky) evaluation inside the light cone, kx >= ky >= 0 octant.
AnglePoint angle_point(double a, double kx, double ky, double delta,
                       const EmitterParams& params, double tol) {
    AnglePoint out;
    const KParallel kpar{kx, ky};
    const double theta = std::asin(kpar.norm() / kWavenumber);
    const double phi = kpar.phi();
    const CooperativeResponse coop =
        cooperative_response(a, kWavenumber, kpar, tol);
    const ScatterResult sm = scattering_matrix(coop, params, delta, theta, phi);
    const PolBasis basis = pol_basis(theta, phi);
    out.r_pp = sm.reflection(0, 0);
    out.r_ss = sm.reflection(1, 1);
    out.r_sp = std::max(sm.reflection(0, 1), sm.reflection(1, 0));
    out.d_ss = basis.e_s_plus.dot(coop.delta_tensor * basis.e_s_plus);
    out.d_pp = basis.e_p_plus.dot(coop.delta_tensor * basis.e_p_plus);
    out.conv = coop.report.error_estimate;
    out.cross = coop.report.cross_check_discrepancy;
    out.ok = true;
    return out;
}

int cmd_angle_map(const CommandContext& ctx) {
    const double a = ctx.a();
    const double delta = ctx.delta();
    const int n = ctx.cfg.get_int("grid-n", 81);
    const double kfrac = ctx.cfg.get_double("kpar-max", 0.98);
    if (n < 3 || n % 2 == 0)
        throw DomainError("angle-map: grid-n must be odd and >= 3");
    if (!(kfrac > 0.0 && kfrac < 1.0))
        throw DomainError("angle-map: kpar-max must lie in (0, 1)");
    const EmitterParams params = ctx.params();

    std::vector<double> axis(n);
    for (int i = 0; i < n; ++i)
        axis[i] = kfrac * kWavenumber * (2.0 * i / (n - 1.0) - 1.0);
    const int h = n / 2;  // axis[h] == 0

    // D4 symmetry of the square lattice: evaluate the kx >= ky >= 0 octant
    // and mirror (R and the p/s-projected Delta are invariant under the
    // symmetry that maps the point into the octant).
    std::vector<std::pair<int, int>> octant;
    for (int i = h; i < n; ++i)
        for (int j = h; j <= i; ++j)
            if (std::hypot(axis[i], axis[j]) <= kfrac * kWavenumber + 1e-12)
                octant.emplace_back(i, j);

    std::vector<AnglePoint> pts(octant.size());
    parallel_for(octant.size(), ctx.jobs(), [&](std::size_t q) {
        try {
            pts[q] = angle_point(a, axis[octant[q].first],
                                 axis[octant[q].second], delta, params,
                                 ctx.tol());
        } catch (const Error&) {
            pts[q].ok = false;
        }
    });

    std::vector<std::vector<int>> lookup(n, std::vector<int>(n, -1));
    for (std::size_t q = 0; q < octant.size(); ++q)
        lookup[octant[q].first][octant[q].second] = static_cast<int>(q);

    ResultTable table({"kx", "ky", "R_ss", "R_pp", "R_sp", "Delta_ss",
                       "Delta_pp"},
                      {"k", "k", "1", "1", "1", "gamma", "gamma"});
    ctx.stamp(table);
    double conv = 0.0, cross = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            // map into the octant: |kx| >= |ky| >= 0
            int oi = h + std::abs(i - h), oj = h + std::abs(j - h);
            if (oj > oi) std::swap(oi, oj);
            const int q = lookup[oi][oj];
            if (q < 0) {
                // outside the light-cone disk
                table.add_failed_row(
                    2, {axis[i] / kWavenumber, axis[j] / kWavenumber});
                continue;
            }
            const AnglePoint& p = pts[static_cast<std::size_t>(q)];
            if (!p.ok) {
                table.add_failed_row(
                    3, {axis[i] / kWavenumber, axis[j] / kWavenumber});
                continue;
            }
            table.add_row({axis[i] / kWavenumber, axis[j] / kWavenumber,
                           p.r_ss, p.r_pp, p.r_sp, p.d_ss, p.d_pp});
            conv = std::max(conv, p.conv);
            cross = std::max(cross, p.cross);
        }
    }
    ctx.write(table, conv, cross);
    return 0;
}

// ---- bands --------------------------------------------------------------

int cmd_bands(const CommandContext& ctx) {
    const double a = ctx.a();
    const int pps = ctx.cfg.get_int("points-per-segment", 40);
    if (pps < 2) throw DomainError("bands: points-per-segment must be >= 2");

    const std::vector<KParallel> path = bz_path(a, pps);
    const BandStructure bs = band_structure(a, kWavenumber, path, ctx.tol());

    ResultTable table({"index", "kx", "ky", "in_light_cone", "Delta_1",
                       "Delta_2", "Delta_3", "Gamma_1", "Gamma_2", "Gamma_3",
                       "polz_1", "polz_2", "polz_3"},
                      {"1", "1/lambda", "1/lambda", "bool", "gamma", "gamma",
                       "gamma", "gamma", "gamma", "gamma", "1", "1", "1"});
    ctx.stamp(table);
    table.add_meta("z_band", std::to_string(bs.z_band + 1));
    table.add_meta("path", "Gamma-X-M-Gamma");
    for (std::size_t i = 0; i < path.size(); ++i) {
        if (!bs.valid[i]) {
            // a diffraction order grazes the rim exactly: Delta diverges
            table.add_failed_row(
                3, {static_cast<double>(i), path[i].kx, path[i].ky});
            continue;
        }
        table.add_row({static_cast<double>(i), path[i].kx, path[i].ky,
                       bs.inside_light_cone[i] ? 1.0 : 0.0,
                       bs.delta_bands[0][i], bs.delta_bands[1][i],
                       bs.delta_bands[2][i], bs.gamma_bands[0][i],
                       bs.gamma_bands[1][i], bs.gamma_bands[2][i],
                       std::abs(bs.polarizations[0][i](2)),
                       std::abs(bs.polarizations[1][i](2)),
                       std::abs(bs.polarizations[2][i](2))});
    }
    ctx.write(table, 0.0, -1.0);
    return 0;
}

// ---- beam ---------------------------------------------------------------

int cmd_beam(const CommandContext& ctx) {
    const double a = ctx.a();
    const int nx = ctx.cfg.get_int("nx", 26);
    const int ny = ctx.cfg.get_int("ny", 26);
    BeamSpec beam;
    beam.w0 = ctx.cfg.get_double("waist", 1.56);
    beam.theta = deg2rad(ctx.cfg.get_double("theta", 0.0));
    const std::string pol = ctx.cfg.get("pol", "s");
    if (pol != "p" && pol != "s") throw DomainError("beam: pol must be p or s");
    beam.polarization = pol[0];

    const FiniteArray arr =
        make_lattice_array(nx, ny, a, ctx.params(), ctx.delta());
    const DipoleSolution sol = solve_dipoles(arr, beam, kWavenumber);
    const RTResult rt = extract_rt(arr, beam, kWavenumber);

    const int map_n = ctx.cfg.get_int("map-n", 61);
    const double extent =
        ctx.cfg.get_double("map-extent", std::max(nx * a, 8.0) * 0.75);
    ResultTable table({"x", "z", "intensity"}, {"lambda", "lambda", "E0^2"});
    ctx.stamp(table);
    table.add_meta("T_num", format_g12(rt.transmission));
    table.add_meta("R_num", format_g12(rt.reflection));
    table.add_meta("waist_warning", rt.waist_warning ? "1" : "0");
    table.add_meta("residual", format_g12(sol.residual));

    std::vector<std::vector<double>> rows(
        static_cast<std::size_t>(map_n) * map_n);
    parallel_for(rows.size(), ctx.jobs(), [&](std::size_t q) {
        const int i = static_cast<int>(q) / map_n;
        const int j = static_cast<int>(q) % map_n;
        const double x = -extent + 2.0 * extent * i / (map_n - 1.0);
        const double z = -extent + 2.0 * extent * j / (map_n - 1.0);
        // avoid evaluating on top of a dipole
        double zs = z;
        if (std::abs(zs) < 0.05) zs = (zs >= 0.0 ? 0.05 : -0.05);
        const CVec3 e = field_at(sol, arr, beam, kWavenumber, Vec3(x, 0.0, zs));
        rows[q] = {x, zs, e.squaredNorm() / (beam.amplitude * beam.amplitude)};
    });
    for (const auto& r : rows) table.add_row(r);
    ctx.write(table, 0.0, -1.0);
    return 0;
}

// ---- disorder -----------------------------------------------------------

int cmd_disorder(const CommandContext& ctx) {
    const double a = ctx.cfg.get_double("a", 0.3);
    const int nx = ctx.cfg.get_int("nx", 16);
    const int ny = ctx.cfg.get_int("ny", 16);
    const double dr_frac = ctx.cfg.get_double("dr", 0.02);  // units of a
    const int samples = ctx.cfg.get_int("samples", 200);
    const std::uint64_t seed = ctx.cfg.get_seed("seed", 1);
    const bool three_d = ctx.cfg.get_int("three-d", 0) != 0;
    const bool antithetic = ctx.cfg.get_int("antithetic", 1) != 0;

    const DisorderStats stats = disorder_ensemble(
        nx, ny, a, dr_frac * a, samples, seed, three_d, antithetic);

    ResultTable table({"sample", "shift"}, {"1", "gamma"});
    ctx.stamp(table);
    table.add_meta("mean_shift", format_g12(stats.mean));
    table.add_meta("std_error", format_g12(stats.std_error));
    table.add_meta("predicted_shift", format_g12(stats.predicted));
    table.add_meta("delta_perfect", format_g12(stats.delta_perfect));
    for (std::size_t i = 0; i < stats.samples.size(); ++i)
        table.add_row({static_cast<double>(i), stats.samples[i]});
    ctx.write(table, 0.0, -1.0);
    return 0;
}

// ---- saturation ---------------------------------------------------------

int cmd_saturation(const CommandContext& ctx) {
    const double a = ctx.cfg.get_double("a", 0.49);
    const double w0 = ctx.cfg.get_double("waist", 1.5);
    const SaturationResult s = saturation_estimate(a, w0);

    ResultTable table({"a", "waist", "P0", "N_photons", "Gamma_plus_gamma",
                       "W_sat", "P_sum"},
                      {"lambda", "lambda", "1", "photons", "gamma",
                       "hbar*omega*gamma", "1"});
    ctx.stamp(table);
    table.add_row({a, w0, s.p0, s.n_photons, s.gamma_total, s.w_sat, s.p_sum});
    ctx.write(table, 0.0, -1.0);
    return 0;
}

// ---- kk-check -----------------------------------------------------------

int cmd_kk(const CommandContext& ctx) {
    const double x = ctx.cfg.get_double("x", 0.5);
    const double u_min = ctx.cfg.get_double("u-min", 0.01);
    const double u_max = ctx.cfg.get_double("u-max", 4.0);

    GammaSamples s;
    s.u = kk_default_grid(u_min, u_max);
    for (double u : s.u)
        s.gamma.push_back(gamma_reciprocal(u, kWavenumber, {0.0, 0.0})(0, 0));

    const KKResult rec = kk_reconstruct_delta(s, x);
    const double direct =
        cooperative_response(x, kWavenumber, {0.0, 0.0}, ctx.tol())
            .delta_tensor(0, 0);
    const double rel_err =
        std::abs(rec.value - direct) / std::max(std::abs(direct), 1e-12);

    ResultTable table({"x", "Delta_reconstructed", "Delta_direct",
                       "truncation_error", "rel_error"},
                      {"lambda", "gamma", "gamma", "gamma", "1"});
    ctx.stamp(table);
    table.add_meta("n_samples", std::to_string(s.u.size()));
    table.add_row({x, rec.value, direct, rec.truncation_error, rel_err});
    ctx.write(table, rec.truncation_error, -1.0);
    return 0;
}

// ---- wiring -------------------------------------------------------------

void add_common_flags(CLI::App* cmd, CommandContext& ctx) {
    auto bind = [&ctx, cmd](const std::string& flag, const std::string& key,
                            const std::string& help) {
        cmd->add_option_function<std::string>(
            flag, [&ctx, key](const std::string& v) { ctx.cfg.set(key, v); },
            help);
    };
    bind("--a", "a", "lattice spacing a/lambda");
    bind("--delta", "delta", "detuning delta/gamma");
    bind("--gamma-nr", "gamma-nr", "non-radiative width, units gamma");
    bind("--theta", "theta", "incidence angle, degrees");
    bind("--phi", "phi", "azimuthal angle, degrees");
    bind("--pol", "pol", "polarization: p or s");
    bind("--waist", "waist", "beam waist w0/lambda");
    bind("--nx", "nx", "array sites along x");
    bind("--ny", "ny", "array sites along y");
    bind("--tol", "tol", "lattice-sum tolerance");
    bind("--seed", "seed", "RNG seed");
    bind("--out", "out", "output CSV path");
    bind("--jobs", "jobs", "worker threads");
    cmd->add_option_function<std::string>(
        "--config",
        [&ctx](const std::string& path) { ctx.cfg.load_file(path); },
        "key = value config file (flags override file values)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Coupled-dipole scattering engine for 2D square atom arrays"};
    app.require_subcommand(1);

    struct Entry {
        const char* name;
        const char* help;
        int (*run)(const CommandContext&);
    };
    const Entry entries[] = {
        {"sweep-lattice", "T/R/Delta/Gamma vs a at normal incidence",
         cmd_sweep_lattice},
        {"map-detuning", "R over the (a, delta) plane", cmd_map_detuning},
        {"angle-map", "R_ss/R_pp/R_sp over the light-cone disk", cmd_angle_map},
        {"bands", "surface-mode bands along Gamma-X-M-Gamma", cmd_bands},
        {"beam", "finite-array Gaussian-beam field map and R/T", cmd_beam},
        {"disorder", "Monte-Carlo resonance-shift statistics", cmd_disorder},
        {"saturation", "single-photon saturation estimate", cmd_saturation},
        {"kk-check", "Kramers-Kronig self-consistency of Delta vs Gamma",
         cmd_kk},
    };

    std::vector<CommandContext> contexts(std::size(entries));
    for (std::size_t i = 0; i < std::size(entries); ++i) {
        CLI::App* sub = app.add_subcommand(entries[i].name, entries[i].help);
        contexts[i].command = entries[i].name;
        add_common_flags(sub, contexts[i]);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    for (std::size_t i = 0; i < std::size(entries); ++i) {
        if (!app.get_subcommands().empty() &&
            app.get_subcommands()[0]->get_name() == entries[i].name) {
            try {
                const std::string pol = contexts[i].cfg.get("pol", "s");
                if (pol != "p" && pol != "s")
                    throw DomainError("pol must be 'p' or 's'");
                return entries[i].run(contexts[i]);
            } catch (const DomainError& e) {
                std::cerr << "config error: " << e.what() << "\n";
                return 2;
            } catch (const ContractViolation& e) {
                std::cerr << "config error: " << e.what() << "\n";
                return 2;
            } catch (const Error& e) {
                std::cerr << "numeric failure: " << e.what() << "\n";
                return 3;
            }
        }
    }
    std::cerr << "config error: no subcommand given\n";
    return 2;
}
