#include "cda/core.hpp"

#include <algorithm>
#include <cmath>

namespace cda {

SymEigen3 sym_eigen3(const Mat3& m) {
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
        throw ContractViolation("sym_eigen3: input not symmetric within 1e-10");
    }
    Eigen::SelfAdjointEigenSolver<Mat3> es;
    es.compute(0.5 * (m + m.transpose()));
    SymEigen3 out;
    for (int i = 0; i < 3; ++i) out.values[i] = es.eigenvalues()(i);
    out.vectors = es.eigenvectors();
    return out;
}

namespace {

// Linear interpolation of f on the grid u at point x (x inside range).
double interp(std::span<const double> u, std::span<const double> f, double x) {
    auto it = std::lower_bound(u.begin(), u.end(), x);
    std::size_t i = static_cast<std::size_t>(it - u.begin());
    if (i == 0) return f[0];
    if (i >= u.size()) return f[u.size() - 1];
    const double t = (x - u[i - 1]) / (u[i] - u[i - 1]);
    return (1.0 - t) * f[i - 1] + t * f[i];
}

}  // namespace

double pv_integral(std::span<const double> u, std::span<const double> f,
                   double pole) {
    if (u.size() < 4) throw DomainError("pv_integral: grid shorter than 4 points");
    if (u.size() != f.size())
        throw DomainError("pv_integral: grid/value size mismatch");
    for (std::size_t i = 1; i < u.size(); ++i) {
        if (!(u[i] > u[i - 1]))
            throw DomainError("pv_integral: grid not strictly increasing");
    }
    if (!(pole > u.front() && pole < u.back()))
        throw DomainError("pv_integral: pole outside grid range");

    const double fx = interp(u, f, pole);
    // local derivative for the removable point at u == pole
    const double h = 1e-6 * (u.back() - u.front());
    const double dfx = (interp(u, f, std::min(pole + h, u.back())) -
                        interp(u, f, std::max(pole - h, u.front()))) /
                       (2.0 * h);

    std::vector<double> g(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double d = pole - u[i];
        g[i] = (std::abs(d) > 1e-13) ? (f[i] - fx) / d : -dfx;
    }
    double integral = 0.0;
    for (std::size_t i = 1; i < u.size(); ++i) {
        integral += 0.5 * (g[i] + g[i - 1]) * (u[i] - u[i - 1]);
    }
    integral += fx * std::log(std::abs((pole - u.front()) / (pole - u.back())));
    return integral;
}

}  // namespace cda
