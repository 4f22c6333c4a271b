#include "cda/greens.hpp"

#include <cmath>

namespace cda {

CTensor3 dyadic_green(double k, const Vec3& r) {
    if (!(k > 0.0)) throw DomainError("dyadic_green: k must be positive");
    const double rn = r.norm();
    const double lambda = 2.0 * kPi / k;
    if (rn < 1e-6 * lambda)
        throw DomainError("dyadic_green: |r| below near-singular guard");

    const double kr = k * rn;
    const Complex e = std::exp(kImag * kr) / (4.0 * kPi * rn);
    const Complex A = e * (1.0 + (kImag * kr - 1.0) / (kr * kr));
    const Complex B = e * (-1.0 + (3.0 - 3.0 * kImag * kr) / (kr * kr));
    const Vec3 rh = r / rn;

    CTensor3 g = A * CTensor3::Identity();
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) g(i, j) += B * rh(i) * rh(j);
    return g;
}

CTensor3 self_green_imag(double k) {
    if (!(k > 0.0)) throw DomainError("self_green_imag: k must be positive");
    const double lambda = 2.0 * kPi / k;
    return (kImag / (3.0 * lambda)) * CTensor3::Identity();
}

}  // namespace cda
