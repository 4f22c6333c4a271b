#include "cda/scatter.hpp"

#include <cmath>

namespace cda {

Complex bare_polarizability(const EmitterParams& p, double delta) {
    return -(3.0 / (4.0 * kPi * kPi)) * (p.gamma / 2.0) /
           Complex(delta, (p.gamma + p.gamma_nr) / 2.0);
}

CTensor3 effective_polarizability(const CooperativeResponse& coop,
                                  const EmitterParams& p, double delta) {
    // bracket B = (delta - Delta) + (i/2)(gamma + gamma_nr + Gamma)
    CTensor3 b = CTensor3::Zero();
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            const double dij = (i == j) ? 1.0 : 0.0;
            b(i, j) = delta * dij - coop.delta_tensor(i, j) +
                      0.5 * kImag *
                          ((p.gamma + p.gamma_nr) * dij + coop.gamma_tensor(i, j));
        }
    }
    // invert on the xy-block (+) z-scalar structure
    const Complex det2 = b(0, 0) * b(1, 1) - b(0, 1) * b(1, 0);
    const double scale = b.cwiseAbs().maxCoeff();
    if (!(std::abs(det2) > 1e-14 * scale * scale) ||
        !(std::abs(b(2, 2)) > 1e-14 * scale))
        throw SingularResponse("effective_polarizability: singular bracket");

    CTensor3 inv = CTensor3::Zero();
    inv(0, 0) = b(1, 1) / det2;
    inv(1, 1) = b(0, 0) / det2;
    inv(0, 1) = -b(0, 1) / det2;
    inv(1, 0) = -b(1, 0) / det2;
    inv(2, 2) = 1.0 / b(2, 2);
    return -(3.0 / (4.0 * kPi * kPi)) * (p.gamma / 2.0) * inv;
}

PolBasis pol_basis(double theta, double phi) {
    if (!(theta >= 0.0 && theta < kPi / 2.0))
        throw DomainError("pol_basis: theta must lie in [0, pi/2)");
    PolBasis b;
    b.theta = theta;
    b.phi = phi;
    const double st = std::sin(theta), ct = std::cos(theta);
    const double sp = std::sin(phi), cp = std::cos(phi);
    b.e_k = Vec3(st * cp, st * sp, ct);
    b.e_p_plus = Vec3(ct * cp, ct * sp, -st);
    b.e_s_plus = Vec3(sp, -cp, 0.0);
    b.e_kp = Vec3(st * cp, st * sp, -ct);
    b.e_p_minus = Vec3(-ct * cp, -ct * sp, -st);
    b.e_s_minus = b.e_s_plus;
    return b;
}

ScatterResult scattering_matrix(const CooperativeResponse& coop,
                                const EmitterParams& p, double delta,
                                double theta, double phi) {
    const double k = kWavenumber;
    const KParallel kpar{k * std::sin(theta) * std::cos(phi),
                         k * std::sin(theta) * std::sin(phi)};
    if (std::abs(kpar.kx - coop.kpar.kx) > 1e-9 * k ||
        std::abs(kpar.ky - coop.kpar.ky) > 1e-9 * k)
        throw DomainError("scattering_matrix: coop evaluated at different kpar");
    if (propagating_orders(coop.a, k, kpar).size() != 1)
        throw WrongRegime(
            "scattering_matrix: multi-order regime, use scattered_field_orders");

    const CTensor3 alpha_e = effective_polarizability(coop, p, delta);
    const PolBasis basis = pol_basis(theta, phi);
    const double kz = kpar.kz(k);
    const Complex pref = kImag * kPi / (coop.a * coop.a) * (k / kz);

    const Vec3 fwd[2] = {basis.e_p_plus, basis.e_s_plus};
    const Vec3 bwd[2] = {basis.e_p_minus, basis.e_s_minus};

    ScatterResult res;
    res.kpar = kpar;
    res.delta = delta;
    res.regime = Regime::single_order;
    for (int m = 0; m < 2; ++m) {
        for (int n = 0; n < 2; ++n) {
            const CVec3 an = alpha_e * fwd[n].cast<Complex>();
            res.s_plus(m, n) = pref * fwd[m].cast<Complex>().dot(an);
            res.s_minus(m, n) = pref * bwd[m].cast<Complex>().dot(an);
            res.transmission(m, n) =
                std::norm((m == n ? 1.0 : 0.0) + res.s_plus(m, n));
            res.reflection(m, n) = std::norm(res.s_minus(m, n));
        }
    }
    return res;
}

Complex lossy_resonance_amplitude(double gamma_scalar, double gamma,
                                  double gamma_nr) {
    const double total = gamma_scalar + gamma;
    if (!(total > 0.0))
        throw DomainError("lossy_resonance_amplitude: Gamma + gamma must be positive");
    return Complex(-total / (total + gamma_nr), 0.0);
}

std::vector<OrderAmplitude> scattered_order_amplitudes(double a, double k,
                                                       const KParallel& kpar,
                                                       const CTensor3& alpha_e,
                                                       const CVec3& e_in) {
    const double lambda = 2.0 * kPi / k;
    std::vector<OrderAmplitude> out;
    const CVec3 src = alpha_e * e_in;
    for (const DiffractionOrder& m : propagating_orders(a, k, kpar)) {
        const double vx = kpar.kx + m.qx;
        const double vy = kpar.ky + m.qy;
        const Complex pref =
            kImag * kPi * (lambda * lambda / (a * a)) * (k / m.kappa);
        OrderAmplitude oa;
        oa.order = m;
        for (int sign : {+1, -1}) {
            const Vec3 v(vx, vy, sign * m.kappa);
            CVec3 amp = CVec3::Zero();
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j)
                    amp(i) += pref *
                              ((i == j ? 1.0 : 0.0) - v(i) * v(j) / (k * k)) *
                              src(j);
            (sign > 0 ? oa.amp_above : oa.amp_below) = amp;
        }
        out.push_back(oa);
    }
    return out;
}

CVec3 scattered_field_orders(double a, double k, const KParallel& kpar,
                             const CTensor3& alpha_e, const CVec3& e_in,
                             const Vec3& r) {
    CVec3 field = CVec3::Zero();
    for (const OrderAmplitude& oa :
         scattered_order_amplitudes(a, k, kpar, alpha_e, e_in)) {
        const double vx = kpar.kx + oa.order.qx;
        const double vy = kpar.ky + oa.order.qy;
        const Complex phase = std::exp(
            kImag * (vx * r(0) + vy * r(1) + oa.order.kappa * std::abs(r(2))));
        field += phase * (r(2) >= 0.0 ? oa.amp_above : oa.amp_below);
    }
    return field;
}

}  // namespace cda
