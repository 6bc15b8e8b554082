#include "nfs/kernel.hpp"

#include <cmath>
#include <sstream>

#include "nfs/simd/kernels.hpp"

namespace nfs {

namespace {

std::vector<TransitionLine> coupled_lines(const TargetConfig &target) {
    std::vector<TransitionLine> out;
    for (auto &line : target.lines())
        if (line.couples()) out.push_back(line);
    return out;
}

std::size_t impulse_index(const TimeGrid &grid, double tau) {
    const double r = (tau - grid.tau_start) / grid.step;
    const double k = std::round(r);
    if (std::abs(r - k) > 1e-6 || k < 0.0) {
        std::ostringstream os;
        os << "impulse at tau=" << tau << " does not fall on a grid sample";
        throw ConfigError(os.str());
    }
    return static_cast<std::size_t>(k);
}

// First order of a delta pulse with amplitude a at sample ni, times `scale`.
void delta_first_order(const std::vector<TransitionLine> &lines, const PhaseClock &clock,
                       const PolVector &a, std::size_t ni, cplx scale, FieldEnvelope &out) {
    const auto &grid = clock.grid();
    const double tau_i = grid.tau(ni);
    const double theta_i = clock.theta(ni);
    for (const auto &line : lines) {
        const cplx amp = scale * dot(line.current, a);
        if (amp == cplx{}) continue;
        const cplx js = amp * line.current.sigma;
        const cplx jp = amp * line.current.pi;
        auto sg = out.sigma();
        auto pg = out.pi();
        for (std::size_t n = ni; n < grid.samples; ++n) {
            const cplx k = std::exp(cplx(-0.5 * (grid.tau(n) - tau_i),
                                         -line.omega * (clock.theta(n) - theta_i)));
            sg[n] += js * k;
            pg[n] += jp * k;
        }
    }
}

class OrderStepper {
public:
    OrderStepper(const std::vector<TransitionLine> &lines, const PhaseClock &clock,
                 QuadratureRule rule)
        : lines_(lines), s_(clock.grid().samples), u_(clock.grid().samples) {
        integrators_.reserve(lines.size());
        for (const auto &line : lines) integrators_.emplace_back(clock, line.omega, rule);
    }

    /// E^(p) from E^(p-1) restricted to `segments`.
    FieldEnvelope next(const FieldEnvelope &prev, std::span<const Segment> segments) {
        FieldEnvelope out(prev.grid());
        const auto &k = simd::active();
        const std::size_t n = prev.size();
        for (std::size_t l = 0; l < lines_.size(); ++l) {
            const PolVector &j = lines_[l].current;
            k.combine2(std::conj(j.sigma), prev.sigma().data(), std::conj(j.pi), prev.pi().data(),
                       s_.data(), n);
            integrators_[l].integrate(s_, segments, u_);
            if (j.sigma != cplx{}) k.axpy(j.sigma, u_.data(), out.sigma().data(), n);
            if (j.pi != cplx{}) k.axpy(j.pi, u_.data(), out.pi().data(), n);
        }
        return out;
    }

private:
    const std::vector<TransitionLine> &lines_;
    std::vector<LineIntegrator> integrators_;
    std::vector<cplx> s_, u_;
};

}  // namespace

std::vector<TransitionLine> TargetConfig::lines() const {
    return transition_table(hyperfine, isotope, f_lm);
}

void TargetConfig::validate() const {
    if (!(xi >= 0.0) || !std::isfinite(xi)) throw ConfigError("effective thickness xi must be >= 0");
    if (!(f_lm > 0.0 && f_lm <= 1.0)) throw ConfigError("Lamb-Mossbauer factor must lie in (0, 1]");
    if (p_max < 1) throw ConfigError("maximum scattering order must be >= 1");
    hyperfine.validate();
    isotope.validate();
}

std::string PropagationResult::convergence_message() const {
    std::ostringstream os;
    os.precision(3);
    if (term_norms.size() <= 1) return "first-order approximation (series truncated by request)";
    os << (converged ? "converged" : "NOT converged") << ": last-term ratio " << std::scientific
       << convergence_ratio << " after " << term_norms.size() << " orders";
    return os.str();
}

cplx current_factor(const TransitionLine &line, double tau, const SwitchSchedule &schedule) {
    return std::exp(cplx(-0.5 * tau, -line.omega * schedule.phase_time(tau)));
}

PropagationResult propagate_general(const TargetConfig &target, const FieldEnvelope &input,
                                    const PropagationOptions &opts) {
    target.validate();
    const TimeGrid &grid = input.grid();
    grid.validate();
    const auto lines = coupled_lines(target);
    const PhaseClock clock(grid, target.schedule);
    OrderStepper stepper(lines, clock, opts.rule);
    const std::size_t p_max = static_cast<std::size_t>(target.p_max);
    const std::size_t last = grid.samples - 1;

    std::vector<FieldEnvelope> orders(p_max, FieldEnvelope(grid));
    auto run_source = [&](FieldEnvelope first, std::size_t start) {
        const Segment tail[] = {{start, last}};
        orders[0] += first;
        for (std::size_t p = 1; p < p_max; ++p) {
            first = stepper.next(first, tail);
            orders[p] += first;
        }
    };

    if (target.xi > 0.0 && !lines.empty()) {
        const FieldEnvelope gridded = input.gridded();
        const auto segments = support_segments(gridded);
        if (!segments.empty()) run_source(stepper.next(gridded, segments), segments.front().first);
        for (const auto &imp : input.impulses()) {
            if (imp.tau > grid.tau_end() + 0.5 * grid.step) continue;
            const std::size_t ni = impulse_index(grid, imp.tau);
            FieldEnvelope first(grid);
            delta_first_order(lines, clock, imp.amplitude, ni, 1.0, first);
            run_source(std::move(first), ni);
        }
    }

    PropagationResult result;
    FieldEnvelope scattered(grid);
    double coef = 1.0;
    for (std::size_t p = 1; p <= p_max; ++p) {
        coef *= -target.xi / static_cast<double>(p);
        FieldEnvelope term = orders[p - 1];
        term *= coef;
        result.term_norms.push_back(std::sqrt(term.norm_sq()));
        scattered += term;
        if (opts.keep_terms) result.terms.push_back(std::move(term));
    }
    const double total = std::sqrt(scattered.norm_sq());
    if (p_max == 1 || total == 0.0) {
        result.convergence_ratio = 0.0;
        result.converged = true;
    } else {
        result.convergence_ratio = result.term_norms.back() / total;
        result.converged = result.convergence_ratio < opts.tolerance;
    }
    result.field = input;
    result.field += scattered;
    return result;
}

PropagationResult propagate_delta(const TargetConfig &target, const PolVector &input,
                                  const TimeGrid &grid, const PropagationOptions &opts,
                                  double tau_in) {
    return propagate_general(target, FieldEnvelope::pulse(grid, input, tau_in), opts);
}

std::vector<LineField> first_order_by_line(const TargetConfig &target, const PolVector &input,
                                           const TimeGrid &grid, double tau_in) {
    target.validate();
    const PhaseClock clock(grid, target.schedule);
    const std::size_t ni = impulse_index(grid, tau_in);
    std::vector<LineField> out;
    for (const auto &line : coupled_lines(target)) {
        LineField lf{line, FieldEnvelope(grid)};
        delta_first_order({line}, clock, input, ni, -target.xi, lf.field);
        out.push_back(std::move(lf));
    }
    return out;
}

}  // namespace nfs
