#include "nfs/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace nfs {

namespace {

struct Extremum {
    double pos;
    double value;
};

struct IndexRange {
    std::size_t first;
    std::size_t last;  // inclusive
};

IndexRange window_indices(const TimeGrid &grid, std::size_t size, const TimeWindow &w) {
    if (!(w.tau_end > w.tau_begin)) throw ConfigError("analysis window must have positive length");
    if (size == 0) throw ConfigError("empty trace");
    const double lo = (w.tau_begin - grid.tau_start) / grid.step;
    const double hi = (w.tau_end - grid.tau_start) / grid.step;
    const double first = std::max(0.0, std::ceil(lo - 1e-9));
    const double last = std::min(static_cast<double>(size - 1), std::floor(hi + 1e-9));
    if (last < first + 2) throw ConfigError("analysis window holds fewer than three samples");
    return {static_cast<std::size_t>(first), static_cast<std::size_t>(last)};
}

// Vertex of the parabola through (-1, a), (0, b), (1, c).
Extremum refine(double center, double step, double a, double b, double c) {
    const double curv = a - 2.0 * b + c;
    if (curv == 0.0) return {center, b};
    const double p = std::clamp(0.5 * (a - c) / curv, -1.0, 1.0);
    return {center + p * step, b - 0.25 * (a - c) * p};
}

double interpolate(const Extremum &l, const Extremum &r, double x) {
    if (r.pos == l.pos) return 0.5 * (l.value + r.value);
    const double t = (x - l.pos) / (r.pos - l.pos);
    return l.value + t * (r.value - l.value);
}

double median(std::vector<double> v) {
    const std::size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
    double m = v[mid];
    if (v.size() % 2 == 0) {
        const double lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
        m = 0.5 * (m + lower);
    }
    return m;
}

// Local contrast of each extremum against the interpolated opposite envelope.
void collect_contrasts(const std::vector<Extremum> &self, const std::vector<Extremum> &other,
                       bool self_is_max, std::vector<double> &out) {
    std::size_t j = 0;
    for (const auto &e : self) {
        while (j < other.size() && other[j].pos < e.pos) ++j;
        if (j == 0 || j >= other.size()) continue;
        const double opposite = std::max(0.0, interpolate(other[j - 1], other[j], e.pos));
        const double value = std::max(0.0, e.value);
        const double hi = self_is_max ? value : opposite;
        const double lo = self_is_max ? opposite : value;
        if (hi + lo > 0.0) out.push_back(std::clamp((hi - lo) / (hi + lo), 0.0, 1.0));
    }
}

std::vector<double> corrected(std::span<const double> trace, const TimeGrid &grid,
                              const IndexRange &r, bool envelope_correct) {
    std::vector<double> y;
    y.reserve(r.last - r.first + 1);
    for (std::size_t n = r.first; n <= r.last; ++n)
        y.push_back(envelope_correct ? trace[n] * std::exp(grid.tau(n)) : trace[n]);
    return y;
}

}  // namespace

double visibility(std::span<const double> trace, const TimeGrid &grid,
                  const VisibilityOptions &opts) {
    if (trace.size() != grid.samples) throw ConfigError("trace length does not match its grid");
    if (opts.beat_period && opts.window.length() < 2.0 * *opts.beat_period)
        throw ConfigError("visibility window shorter than two beat periods");
    const IndexRange r = window_indices(grid, trace.size(), opts.window);
    const std::vector<double> y = corrected(trace, grid, r, opts.envelope_correct);

    std::vector<Extremum> maxima, minima;
    for (std::size_t i = 1; i + 1 < y.size(); ++i) {
        const double a = y[i - 1], b = y[i], c = y[i + 1];
        const double center = grid.tau(r.first + i);
        if (b > a && b >= c) maxima.push_back(refine(center, grid.step, a, b, c));
        else if (b < a && b <= c) minima.push_back(refine(center, grid.step, a, b, c));
    }
    std::vector<double> contrasts;
    collect_contrasts(maxima, minima, true, contrasts);
    collect_contrasts(minima, maxima, false, contrasts);
    if (contrasts.empty()) return 0.0;
    return median(std::move(contrasts));
}

double fringe_shift(std::span<const double> first, std::span<const double> second,
                    const TimeGrid &grid, const TimeWindow &window, double omega) {
    if (first.size() != grid.samples || second.size() != grid.samples)
        throw ConfigError("traces must share one grid");
    if (!(omega > 0.0)) throw ConfigError("beat frequency must be positive");
    const IndexRange r = window_indices(grid, grid.samples, window);
    const double period = 2.0 * kPi / omega;
    const double intensity_period = 0.5 * period;

    const auto a_raw = corrected(first, grid, r, true);
    const auto b_raw = corrected(second, grid, r, true);
    const std::size_t half = static_cast<std::size_t>(std::lround(0.5 * intensity_period / grid.step));
    if (a_raw.size() < 4 * half + 3)
        throw ConfigError("fringe window shorter than two intensity beat periods");

    // centered moving average over one intensity period
    auto detrend = [&](const std::vector<double> &y) {
        std::vector<double> prefix(y.size() + 1, 0.0);
        for (std::size_t i = 0; i < y.size(); ++i) prefix[i + 1] = prefix[i] + y[i];
        std::vector<double> out;
        for (std::size_t i = half; i + half < y.size(); ++i) {
            const double mean = (prefix[i + half + 1] - prefix[i - half]) / static_cast<double>(2 * half + 1);
            out.push_back(y[i] - mean);
        }
        double scale = 0.0, level = 0.0;
        for (std::size_t i = 0; i < y.size(); ++i) level += std::abs(y[i]);
        level /= static_cast<double>(y.size());
        for (double v : out) scale += v * v;
        scale = std::sqrt(scale / static_cast<double>(out.size()));
        if (!(scale > 1e-12 * level) || !(scale > 0.0))
            throw ConfigError("degenerate trace: no beat variance in the fringe window");
        for (double &v : out) v /= scale;
        return out;
    };
    const auto a = detrend(a_raw);
    const auto b = detrend(b_raw);

    const long max_lag = static_cast<long>(std::ceil(intensity_period / grid.step));
    const long n = static_cast<long>(a.size());
    if (n <= 2 * max_lag) throw ConfigError("fringe window too short for the lag search");
    auto corr = [&](long lag) {
        double acc = 0.0;
        long count = 0;
        for (long i = std::max(0L, -lag); i < n && i + lag < n; ++i) {
            acc += a[static_cast<std::size_t>(i)] * b[static_cast<std::size_t>(i + lag)];
            ++count;
        }
        return acc / static_cast<double>(count);
    };
    long best = 0;
    double best_val = -1e300;
    std::vector<double> values(static_cast<std::size_t>(2 * max_lag + 3));
    for (long lag = -max_lag - 1; lag <= max_lag + 1; ++lag)
        values[static_cast<std::size_t>(lag + max_lag + 1)] = corr(lag);
    for (long lag = -max_lag; lag <= max_lag; ++lag) {
        const double v = values[static_cast<std::size_t>(lag + max_lag + 1)];
        if (v > best_val) {
            best_val = v;
            best = lag;
        }
    }
    const double cl = values[static_cast<std::size_t>(best + max_lag)];
    const double cc = values[static_cast<std::size_t>(best + max_lag + 1)];
    const double cr = values[static_cast<std::size_t>(best + max_lag + 2)];
    const Extremum peak = refine(static_cast<double>(best), 1.0, cl, cc, cr);

    double shift = peak.pos * grid.step / period;
    shift -= 0.5 * std::round(shift / 0.5);
    if (shift <= -0.25) shift += 0.5;
    return shift;
}

}  // namespace nfs
