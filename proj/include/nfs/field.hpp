#pragma once

// Time-gridded slowly varying field envelopes and the passive optical
// elements acting on them.

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "nfs/jones.hpp"

namespace nfs {

/// Uniform grid in dimensionless time tau = t / mean_lifetime.
struct TimeGrid {
    double tau_start = 0.0;
    double step = 1e-3;
    std::size_t samples = 0;

    static constexpr double kDefaultStep = 1e-3;
    static constexpr double kDefaultEnd = 3.55;

    /// samples = floor((tau_end - tau_start)/step) + 1.
    static TimeGrid uniform(double tau_start, double tau_end, double step);
    /// Default grid [0, 3.55] with step 1e-3.
    static TimeGrid standard() { return uniform(0.0, kDefaultEnd, kDefaultStep); }
    /// Grid on [0, tau_end] whose step is the largest value <= nominal_step that
    /// divides `quantum` exactly.
    static TimeGrid aligned(double tau_end, double nominal_step, double quantum);

    double tau(std::size_t n) const { return tau_start + step * static_cast<double>(n); }
    double tau_end() const { return tau(samples == 0 ? 0 : samples - 1); }
    /// Nearest sample index to tau, clamped to the grid.
    std::size_t nearest_index(double tau) const;
    /// Number of steps equal to `interval`; throws if not an integer multiple.
    std::size_t steps_for(double interval) const;
    bool operator==(const TimeGrid &o) const;
    void validate() const;
};

/// A delta(tau - tau0)-weighted field component kept out of the grid.
struct Impulse {
    PolVector amplitude{};
    double tau = 0.0;
};

/// Two-component field sampled on a TimeGrid plus symbolic impulses.
///
/// Components are stored as separate sigma and pi arrays. Impulses represent
/// the broadband prompt pulse and are never rasterized.
class FieldEnvelope {
public:
    FieldEnvelope() = default;
    explicit FieldEnvelope(TimeGrid grid);
    /// Impulse-only field.
    static FieldEnvelope pulse(TimeGrid grid, const PolVector &pol, double tau = 0.0);

    const TimeGrid &grid() const { return grid_; }
    std::size_t size() const { return sigma_.size(); }

    std::span<cplx> sigma() { return sigma_; }
    std::span<cplx> pi() { return pi_; }
    std::span<const cplx> sigma() const { return sigma_; }
    std::span<const cplx> pi() const { return pi_; }

    PolVector at(std::size_t n) const { return {sigma_[n], pi_[n]}; }
    void set(std::size_t n, const PolVector &v) {
        sigma_[n] = v.sigma;
        pi_[n] = v.pi;
    }

    const std::vector<Impulse> &impulses() const { return impulses_; }
    void add_impulse(const Impulse &imp);
    void clear_impulses() { impulses_.clear(); }
    /// Gridded part only.
    FieldEnvelope gridded() const;

    /// Squared L2 norm of the gridded samples.
    double norm_sq() const;

    FieldEnvelope &operator+=(const FieldEnvelope &o);
    FieldEnvelope &operator*=(cplx s);
    friend FieldEnvelope operator+(FieldEnvelope a, const FieldEnvelope &b) { return a += b; }
    friend FieldEnvelope operator*(cplx s, FieldEnvelope f) { return f *= s; }

private:
    TimeGrid grid_{};
    std::vector<cplx> sigma_;
    std::vector<cplx> pi_;
    std::vector<Impulse> impulses_;
};

void require_same_grid(const FieldEnvelope &a, const FieldEnvelope &b);

/// |E_sigma|^2 + |E_pi|^2 per sample. Impulses are excluded (time-gated prompt).
std::vector<double> intensity(const FieldEnvelope &field);
std::vector<double> component_intensity(std::span<const cplx> component);

enum class PolAxis { sigma, pi };

/// Ideal linear polarizer.
FieldEnvelope project(const FieldEnvelope &field, PolAxis axis);
/// Ideal polarizer onto an arbitrary normalized state.
FieldEnvelope project(const FieldEnvelope &field, const PolVector &state);

/// Lossless splitter (1, i; i, 1)/sqrt2 applied to the input pair.
std::pair<FieldEnvelope, FieldEnvelope> beam_splitter(const FieldEnvelope &a,
                                                      const FieldEnvelope &b);

/// Multiplies the field by -1.
FieldEnvelope mirror(const FieldEnvelope &field);

/// Delays by delta_tau (an integer number of grid steps). Impulses move with it.
FieldEnvelope time_delay(const FieldEnvelope &field, double delta_tau);

/// Keeps samples with t in [t0_ns, t1_ns]. Impulses are dropped whenever
/// t0_ns > 0 or they fall outside the window.
FieldEnvelope time_gate(const FieldEnvelope &field, double t0_ns, double t1_ns,
                        double lifetime_ns);

inline constexpr double kOpenGate = std::numeric_limits<double>::infinity();

}  // namespace nfs
