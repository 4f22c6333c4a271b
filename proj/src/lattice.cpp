#include "cda/lattice.hpp"

#include <cmath>

namespace cda {

double KParallel::kz(double k) const {
    const double kp = norm();
    if (!(kp < k)) throw DomainError("KParallel::kz: evanescent |kpar| >= k");
    return std::sqrt(k * k - kp * kp);
}

std::vector<KParallel> bz_path(double a, int points_per_segment) {
    if (!(a > 0.0)) throw DomainError("bz_path: a must be positive");
    if (points_per_segment < 2)
        throw DomainError("bz_path: need at least 2 points per segment");

    const double g = kPi / a;
    const KParallel G{0.0, 0.0}, X{g, 0.0}, M{g, g};
    const KParallel corners[4] = {G, X, M, G};

    std::vector<KParallel> path;
    for (int s = 0; s < 3; ++s) {
        // skip the shared corner on all segments but the first
        const int i0 = (s == 0) ? 0 : 1;
        for (int i = i0; i < points_per_segment; ++i) {
            const double t = static_cast<double>(i) / (points_per_segment - 1);
            path.push_back({corners[s].kx + t * (corners[s + 1].kx - corners[s].kx),
                            corners[s].ky + t * (corners[s + 1].ky - corners[s].ky)});
        }
    }
    return path;
}

std::vector<DiffractionOrder> propagating_orders(double a, double k,
                                                 const KParallel& kpar) {
    if (!(a > 0.0)) throw DomainError("propagating_orders: a must be positive");
    if (!(kpar.norm() < k))
        throw DomainError("propagating_orders: |kpar| must be below k");

    const double lambda = 2.0 * kPi / k;
    const int mmax = static_cast<int>(std::ceil(2.0 * a / lambda)) + 1;
    const double g = 2.0 * kPi / a;

    std::vector<DiffractionOrder> orders;
    for (int mx = -mmax; mx <= mmax; ++mx) {
        for (int my = -mmax; my <= mmax; ++my) {
            const double vx = kpar.kx + g * mx;
            const double vy = kpar.ky + g * my;
            const double vn = std::hypot(vx, vy);
            if (std::abs(vn - k) < 1e-9 * k) {
                throw ThresholdDegeneracy(
                    "propagating_orders: order at diffraction threshold");
            }
            if (vn < k) {
                orders.push_back({mx, my, g * mx, g * my,
                                  std::sqrt(k * k - vn * vn)});
            }
        }
    }
    return orders;
}

}  // namespace cda
