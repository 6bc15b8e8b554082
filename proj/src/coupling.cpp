#include "nfs/coupling.hpp"

#include <array>
#include <cmath>

namespace nfs {

namespace {

using CVec3 = std::array<cplx, 3>;

double dot3(const Vec3 &a, const Vec3 &b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

Vec3 cross3(const Vec3 &a, const Vec3 &b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

void require_unit(const Vec3 &v, const char *what) {
    if (std::abs(std::sqrt(dot3(v, v)) - 1.0) > 1e-12)
        throw ConfigError(std::string(what) + " must be a unit vector");
}

// Spherical basis vector e_q (q = -1, 0, +1) about the quantization axis.
CVec3 spherical_unit(const Vec3 &quant, int q) {
    if (q == 0) return {quant[0], quant[1], quant[2]};
    const Vec3 trial = std::abs(quant[2]) < 0.9 ? axis::z : axis::x;
    const double proj = dot3(trial, quant);
    Vec3 u1{trial[0] - proj * quant[0], trial[1] - proj * quant[1], trial[2] - proj * quant[2]};
    const double n = std::sqrt(dot3(u1, u1));
    for (auto &c : u1) c /= n;
    const Vec3 u2 = cross3(quant, u1);
    const double s = 1.0 / std::sqrt(2.0);
    CVec3 e;
    for (std::size_t i = 0; i < 3; ++i) {
        e[i] = q > 0 ? -s * cplx(u1[i], u2[i]) : s * cplx(u1[i], -u2[i]);
    }
    return e;
}

// a . conj(e)
cplx project_conj(const Vec3 &a, const CVec3 &e) {
    return a[0] * std::conj(e[0]) + a[1] * std::conj(e[1]) + a[2] * std::conj(e[2]);
}

}  // namespace

LineCoupling coupling_matrix(const TransitionLine &line, const Vec3 &field_direction,
                             const Vec3 &beam_direction, double spin_excited, double f_lm,
                             const PolarizationBasis &basis) {
    require_unit(field_direction, "field direction");
    require_unit(beam_direction, "beam direction");
    require_unit(basis.sigma, "sigma polarization");
    require_unit(basis.pi, "pi polarization");
    if (std::abs(dot3(basis.sigma, beam_direction)) > 1e-12 ||
        std::abs(dot3(basis.pi, beam_direction)) > 1e-12 ||
        std::abs(dot3(basis.sigma, basis.pi)) > 1e-12)
        throw ConfigError("polarization basis must be orthonormal and transverse to the beam");
    if (std::abs(line.delta_m) > 1) throw ConfigError("only magnetic dipole lines are supported");

    const CVec3 e_q = spherical_unit(field_direction, line.delta_m);
    const Vec3 h_sigma = cross3(beam_direction, basis.sigma);
    const Vec3 h_pi = cross3(beam_direction, basis.pi);

    const double scale = 3.0 * f_lm / (2.0 * spin_excited + 1.0);
    const double amp = std::sqrt(scale * line.weight);

    LineCoupling out;
    out.current = {amp * project_conj(h_sigma, e_q), amp * project_conj(h_pi, e_q)};
    // drop rounding dust so geometry-forbidden couplings are exactly zero
    auto clean = [](cplx v) {
        return cplx(std::abs(v.real()) < 1e-15 ? 0.0 : v.real(),
                    std::abs(v.imag()) < 1e-15 ? 0.0 : v.imag());
    };
    out.current = {clean(out.current.sigma), clean(out.current.pi)};
    out.matrix = Matrix2c::outer(out.current, out.current);
    return out;
}

}  // namespace nfs
