#include "nfs/quadrature.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>

#include "nfs/simd/kernels.hpp"

namespace nfs {

namespace {

using Gauss = boost::math::quadrature::gauss<double, 20>;

// Lagrange basis polynomial k through the integer nodes offset..offset+m-1.
double lagrange(double y, long offset, std::size_t m, std::size_t k) {
    const double yk = static_cast<double>(offset + static_cast<long>(k));
    double v = 1.0;
    for (std::size_t j = 0; j < m; ++j) {
        if (j == k) continue;
        const double yj = static_cast<double>(offset + static_cast<long>(j));
        v *= (y - yj) / (yk - yj);
    }
    return v;
}

}  // namespace

std::string_view to_string(QuadratureRule rule) {
    switch (rule) {
    case QuadratureRule::trapezoid: return "trapezoid";
    case QuadratureRule::exp_linear: return "exp-linear";
    case QuadratureRule::exp_cubic: return "exp-cubic";
    case QuadratureRule::exp_quintic: return "exp-quintic";
    }
    return "unknown";
}

QuadratureRule parse_quadrature(std::string_view name) {
    for (auto r : {QuadratureRule::trapezoid, QuadratureRule::exp_linear, QuadratureRule::exp_cubic,
                   QuadratureRule::exp_quintic})
        if (to_string(r) == name) return r;
    throw ConfigError("unknown quadrature rule '" + std::string(name) +
                      "' (expected trapezoid, exp-linear, exp-cubic or exp-quintic)");
}

std::size_t stencil_size(QuadratureRule rule) {
    switch (rule) {
    case QuadratureRule::trapezoid:
    case QuadratureRule::exp_linear: return 2;
    case QuadratureRule::exp_cubic: return 4;
    case QuadratureRule::exp_quintic: return 6;
    }
    return 2;
}

std::vector<Segment> support_segments(const FieldEnvelope &field) {
    std::vector<Segment> out;
    const auto sg = field.sigma();
    const auto pg = field.pi();
    bool open = false;
    for (std::size_t n = 0; n < field.size(); ++n) {
        const bool nonzero = sg[n] != cplx{} || pg[n] != cplx{};
        if (nonzero && !open) {
            out.push_back({n, n});
            open = true;
        } else if (nonzero) {
            out.back().last = n;
        } else {
            open = false;
        }
    }
    return out;
}

// ---- PhaseClock ----------------------------------------------------------------

PhaseClock::PhaseClock(const TimeGrid &grid, const SwitchSchedule &schedule)
    : grid_(grid), schedule_(schedule), theta_(grid.samples), steps_(grid.samples, Step::on) {
    for (std::size_t n = 0; n < grid.samples; ++n) theta_[n] = schedule.phase_time(grid.tau(n));
    const double h = grid.step;
    for (std::size_t n = 1; n < grid.samples; ++n) {
        const double d = theta_[n] - theta_[n - 1];
        Step kind = Step::mixed;
        if (schedule.instants_in(grid.tau(n - 1), grid.tau(n)).empty()) {
            if (std::abs(d - h) <= 1e-9 * h) kind = Step::on;
            else if (std::abs(d) <= 1e-9 * h) kind = Step::off;
        }
        steps_[n] = kind;
        if (kind != Step::on) irregular_.push_back(n);
    }
}

// ---- LineIntegrator --------------------------------------------------------------

LineIntegrator::LineIntegrator(const PhaseClock &clock, double omega, QuadratureRule rule)
    : clock_(clock), omega_(omega), rule_(rule), points_(stencil_size(rule)) {
    const double h = clock.grid().step;
    decay_on_ = std::exp(cplx(-0.5 * h, -omega * h));
    decay_off_ = std::exp(cplx(-0.5 * h, 0.0));
}

cplx LineIntegrator::step_decay(std::size_t n) const {
    switch (clock_.step(n)) {
    case PhaseClock::Step::on: return decay_on_;
    case PhaseClock::Step::off: return decay_off_;
    case PhaseClock::Step::mixed: break;
    }
    const double d = clock_.theta(n) - clock_.theta(n - 1);
    return std::exp(cplx(-0.5 * clock_.grid().step, -omega_ * d));
}

std::vector<cplx> LineIntegrator::compute_weights(std::size_t n, PhaseClock::Step kind, long offset,
                                                  std::size_t points) const {
    const double h = clock_.grid().step;
    if (rule_ == QuadratureRule::trapezoid) {
        const cplx r = kind == PhaseClock::Step::on    ? decay_on_
                       : kind == PhaseClock::Step::off ? decay_off_
                                                       : step_decay(n);
        return {0.5 * h * r, cplx(0.5 * h)};
    }
    const double a = clock_.grid().tau(n - 1);
    const double theta_end = clock_.theta(n);

    // Phase lag theta(tau_n) - theta(t) at t = a + y h.
    auto lag = [&](double y) {
        switch (kind) {
        case PhaseClock::Step::on: return (1.0 - y) * h;
        case PhaseClock::Step::off: return 0.0;
        case PhaseClock::Step::mixed: break;
        }
        return theta_end - clock_.schedule().phase_time(a + y * h);
    };
    std::vector<double> cuts{0.0};
    if (kind == PhaseClock::Step::mixed)
        for (double t : clock_.schedule().instants_in(a, a + h)) cuts.push_back((t - a) / h);
    cuts.push_back(1.0);

    std::vector<cplx> w(points);
    for (std::size_t k = 0; k < points; ++k) {
        cplx total{};
        for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
            auto kernel = [&](double y) {
                return std::exp(cplx(-0.5 * (1.0 - y) * h, -omega_ * lag(y))) *
                       lagrange(y, offset, points, k);
            };
            const double re = Gauss::integrate([&](double y) { return kernel(y).real(); }, cuts[c],
                                               cuts[c + 1]);
            const double im = Gauss::integrate([&](double y) { return kernel(y).imag(); }, cuts[c],
                                               cuts[c + 1]);
            total += cplx(re, im);
        }
        w[k] = h * total;
    }
    return w;
}

const std::vector<cplx> &LineIntegrator::weights_for(std::size_t n, long offset,
                                                     std::size_t points) const {
    const auto kind = clock_.step(n);
    if (kind == PhaseClock::Step::mixed) {
        mixed_ = compute_weights(n, kind, offset, points);
        return mixed_;
    }
    return plain_weights(kind, offset, points);
}

const std::vector<cplx> &LineIntegrator::plain_weights(PhaseClock::Step kind, long offset,
                                                       std::size_t points) const {
    auto &cache = kind == PhaseClock::Step::on ? cache_on_ : cache_off_;
    const auto key = std::make_pair(points, offset);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, compute_weights(1, kind, offset, points)).first;
    return it->second;
}

cplx LineIntegrator::stencil_sum(std::span<const cplx> s, std::size_t n, const Segment &seg) const {
    const std::size_t len = seg.last - seg.first + 1;
    const std::size_t m = std::min(points_, len);
    const long preferred = static_cast<long>(n - 1) - static_cast<long>(m / 2 - 1);
    const long lo = static_cast<long>(seg.first);
    const long hi = static_cast<long>(seg.last) - static_cast<long>(m) + 1;
    const long start = std::clamp(preferred, lo, hi);
    const auto &w = weights_for(n, start - static_cast<long>(n - 1), m);
    cplx acc{};
    for (std::size_t k = 0; k < m; ++k) acc += w[k] * s[static_cast<std::size_t>(start) + k];
    return acc;
}

void LineIntegrator::integrate(std::span<const cplx> s, std::span<const Segment> segments,
                               std::span<cplx> u) const {
    const std::size_t total = clock_.grid().samples;
    if (s.size() != total || u.size() != total) throw ConfigError("integrand length does not match grid");
    std::fill(u.begin(), u.end(), cplx{});
    if (segments.empty()) return;

    scratch_.assign(total, cplx{});
    auto &f = scratch_;
    const auto &irregular = clock_.irregular_steps();
    const bool vector_path = rule_ != QuadratureRule::trapezoid;

    for (const auto &seg : segments) {
        if (seg.last <= seg.first) continue;
        const std::size_t len = seg.last - seg.first + 1;
        std::size_t fir_lo = seg.last + 1, fir_hi = seg.last;  // empty by default
        if (vector_path && len >= points_) {
            const std::size_t m = points_;
            fir_lo = seg.first + m / 2;
            fir_hi = seg.last + 1 - m / 2;
            if (fir_lo <= fir_hi) {
                const long offset = -static_cast<long>(m / 2 - 1);
                // weights of a plain field-on step; irregular steps are patched below
                const auto &w = plain_weights(PhaseClock::Step::on, offset, m);
                simd::active().fir(s.data() + (fir_lo - 1 - (m / 2 - 1)), w.data(), m,
                                   f.data() + fir_lo, fir_hi - fir_lo + 1);
            }
        }
        for (std::size_t n = seg.first + 1; n <= seg.last; ++n) {
            if (n >= fir_lo && n <= fir_hi) {
                n = fir_hi;
                continue;
            }
            f[n] = stencil_sum(s, n, seg);
        }
        if (fir_lo <= fir_hi) {
            auto it = std::lower_bound(irregular.begin(), irregular.end(), fir_lo);
            for (; it != irregular.end() && *it <= fir_hi; ++it) f[*it] = stencil_sum(s, *it, seg);
        }
    }

    const std::size_t first = segments.front().first;
    for (std::size_t n = first + 1; n < total; ++n) u[n] = step_decay(n) * u[n - 1] + f[n];
}

}  // namespace nfs
