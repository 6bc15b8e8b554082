#pragma once

// Running convolution with a single-line nuclear response kernel.
//
// For one transition line with frequency omega the integrator evaluates
//
//   u(tau_n) = int_{tau_first}^{tau_n} K(tau_n, t) s(t) dt,
//   K(tau, t) = exp(-i omega (theta(tau) - theta(t)) - (tau - t)/2),
//
// with theta the accumulated field-on time of the switching schedule, by the
// step recurrence u_n = R_n u_{n-1} + sum_k w_k s_{n-1+o+k}. The weights
// integrate the kernel exactly against a Lagrange interpolant of s, so the
// fast exponential and phase factors carry no discretization error.

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nfs/field.hpp"
#include "nfs/schedule.hpp"

namespace nfs {

enum class QuadratureRule {
    /// Cumulative trapezoid on the full integrand.
    trapezoid,
    /// Exponential weights, piecewise linear interpolant.
    exp_linear,
    /// Exponential weights, four-point cubic interpolant.
    exp_cubic,
    /// Exponential weights, six-point quintic interpolant.
    exp_quintic,
};

std::string_view to_string(QuadratureRule rule);
/// Accepts trapezoid, exp-linear, exp-cubic, exp-quintic.
QuadratureRule parse_quadrature(std::string_view name);
/// Number of interpolation points of the rule.
std::size_t stencil_size(QuadratureRule rule);

/// Inclusive index range over which a sampled integrand is smooth.
/// Integration steps that straddle a segment boundary contribute nothing.
struct Segment {
    std::size_t first = 0;
    std::size_t last = 0;
};

/// Maximal runs of samples where the field is not identically zero.
std::vector<Segment> support_segments(const FieldEnvelope &field);

/// Per-grid accumulated field-on time and step classification, shared by all
/// lines of one target.
class PhaseClock {
public:
    enum class Step : unsigned char { on, off, mixed };

    PhaseClock(const TimeGrid &grid, const SwitchSchedule &schedule);

    const TimeGrid &grid() const { return grid_; }
    const SwitchSchedule &schedule() const { return schedule_; }
    double theta(std::size_t n) const { return theta_[n]; }
    /// Kind of the step ending at sample n (n >= 1).
    Step step(std::size_t n) const { return steps_[n]; }
    /// Indices n of steps that are not plain field-on steps.
    const std::vector<std::size_t> &irregular_steps() const { return irregular_; }

private:
    TimeGrid grid_;
    SwitchSchedule schedule_;
    std::vector<double> theta_;
    std::vector<Step> steps_;
    std::vector<std::size_t> irregular_;
};

class LineIntegrator {
public:
    LineIntegrator(const PhaseClock &clock, double omega, QuadratureRule rule);

    /// Fills u[n] for every n >= segments.front().first; earlier entries are
    /// set to zero. `s` and `u` span the whole grid.
    void integrate(std::span<const cplx> s, std::span<const Segment> segments,
                   std::span<cplx> u) const;

    double omega() const { return omega_; }

private:
    /// Weights for the step ending at n; `offset` = stencil start - (n - 1).
    std::vector<cplx> compute_weights(std::size_t n, PhaseClock::Step kind, long offset,
                                      std::size_t points) const;
    const std::vector<cplx> &weights_for(std::size_t n, long offset, std::size_t points) const;
    const std::vector<cplx> &plain_weights(PhaseClock::Step kind, long offset,
                                           std::size_t points) const;
    cplx step_decay(std::size_t n) const;
    cplx stencil_sum(std::span<const cplx> s, std::size_t n, const Segment &seg) const;

    const PhaseClock &clock_;
    double omega_;
    QuadratureRule rule_;
    std::size_t points_;
    cplx decay_on_{};
    cplx decay_off_{};
    mutable std::map<std::pair<std::size_t, long>, std::vector<cplx>> cache_on_, cache_off_;
    mutable std::vector<cplx> scratch_;
    mutable std::vector<cplx> mixed_;
};

}  // namespace nfs
