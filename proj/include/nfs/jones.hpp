#pragma once

// Two-component polarization algebra in the (sigma, pi) basis.
//
// The beam travels along +y. sigma is x-polarized, pi is z-polarized.
// Circular states are e_plus = (e_sigma + i e_pi)/sqrt2 and
// e_minus = (e_sigma - i e_pi)/sqrt2; this is the only place the sign is fixed.

#include <array>
#include <complex>
#include <stdexcept>
#include <string>

namespace nfs {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr cplx kI{0.0, 1.0};

class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct PolVector {
    cplx sigma{};
    cplx pi{};

    static constexpr PolVector e_sigma() { return {1.0, 0.0}; }
    static constexpr PolVector e_pi() { return {0.0, 1.0}; }
    static PolVector e_plus();
    static PolVector e_minus();
    /// Real linear polarization alpha*e_sigma + beta*e_pi.
    static constexpr PolVector linear(double alpha, double beta) { return {alpha, beta}; }

    double norm_sq() const { return std::norm(sigma) + std::norm(pi); }

    PolVector &operator+=(const PolVector &o) {
        sigma += o.sigma;
        pi += o.pi;
        return *this;
    }
    friend PolVector operator+(PolVector a, const PolVector &b) { return a += b; }
    friend PolVector operator-(const PolVector &a, const PolVector &b) {
        return {a.sigma - b.sigma, a.pi - b.pi};
    }
    friend PolVector operator*(cplx s, const PolVector &v) { return {s * v.sigma, s * v.pi}; }
    friend bool operator==(const PolVector &, const PolVector &) = default;
};

/// Hermitian inner product <a|b> = a^dagger b.
inline cplx dot(const PolVector &a, const PolVector &b) {
    return std::conj(a.sigma) * b.sigma + std::conj(a.pi) * b.pi;
}

/// Components in the circular basis: v = plus*e_plus + minus*e_minus.
struct CircularComponents {
    cplx plus{};
    cplx minus{};
};

CircularComponents to_circular(const PolVector &v);
PolVector from_circular(const CircularComponents &c);

/// 2x2 complex matrix acting on PolVector, row-major (sigma, pi).
struct Matrix2c {
    std::array<cplx, 4> m{};

    static constexpr Matrix2c zero() { return {}; }
    static constexpr Matrix2c identity() { return {{1.0, 0.0, 0.0, 1.0}}; }
    /// u v^dagger
    static Matrix2c outer(const PolVector &u, const PolVector &v);

    cplx operator()(int r, int c) const { return m[static_cast<std::size_t>(2 * r + c)]; }

    PolVector apply(const PolVector &v) const {
        return {m[0] * v.sigma + m[1] * v.pi, m[2] * v.sigma + m[3] * v.pi};
    }
    Matrix2c &operator+=(const Matrix2c &o) {
        for (std::size_t i = 0; i < 4; ++i) m[i] += o.m[i];
        return *this;
    }
    friend Matrix2c operator+(Matrix2c a, const Matrix2c &b) { return a += b; }
    double max_abs() const;
};

std::string to_string(const PolVector &v);

}  // namespace nfs
