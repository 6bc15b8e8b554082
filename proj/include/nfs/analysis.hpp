#pragma once

#include <optional>
#include <span>

#include "nfs/field.hpp"

namespace nfs {

struct TimeWindow {
    double tau_begin = 0.0;
    double tau_end = 0.0;
    double length() const { return tau_end - tau_begin; }
};

struct VisibilityOptions {
    TimeWindow window{};
    /// Multiply by e^{+tau} before looking for extrema.
    bool envelope_correct = true;
    /// Period of the intensity beat. When set, windows shorter than two
    /// periods are rejected.
    std::optional<double> beat_period;
};

/// Fringe contrast (Imax - Imin)/(Imax + Imin) of an intensity trace.
///
/// Every local extremum inside the window is compared with the opposite
/// envelope linearly interpolated between its neighbouring extrema of the
/// other kind; extrema are refined by a parabola through three samples. The
/// result is the median of these local contrasts, 0 when the trace has no
/// interior extremum pair. Throws ConfigError for windows that are too short.
double visibility(std::span<const double> intensity, const TimeGrid &grid,
                  const VisibilityOptions &opts);

/// Relative shift between two beat traces, in units of the beat period
/// 2*pi/omega (omega being the Delta M = 0 line offset, so the intensity beats
/// at 2*omega). Traces are envelope-corrected, detrended with a moving average
/// over one intensity period, and cross-correlated. The result is folded into
/// (-0.25, 0.25]; fringes versus anti-fringes give +-0.25.
/// Throws ConfigError on zero-variance traces.
double fringe_shift(std::span<const double> first, std::span<const double> second,
                    const TimeGrid &grid, const TimeWindow &window, double omega);

}  // namespace nfs
