#include "nfs/experiments.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace nfs {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool same_direction(const Vec3 &a, const Vec3 &b) {
    return std::abs(a[0] - b[0]) < 1e-12 && std::abs(a[1] - b[1]) < 1e-12 &&
           std::abs(a[2] - b[2]) < 1e-12;
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(10);
    os << v;
    return os.str();
}

SpectrumView field_view(std::string name, const FieldEnvelope &field) {
    SpectrumView v;
    v.name = std::move(name);
    v.intensities["total"] = intensity(field);
    v.intensities["sigma"] = component_intensity(field.sigma());
    v.intensities["pi"] = component_intensity(field.pi());
    v.field = field.gridded();
    return v;
}

// Diagnostics never abort a run; an unusable window or a flat trace is
// recorded as NaN together with the reason.
double safe_visibility(SpectrumResult &r, const std::string &key, const std::vector<double> &trace,
                       const TimeWindow &window, double omega) {
    try {
        VisibilityOptions o;
        o.window = window;
        if (omega > 0.0) o.beat_period = kPi / omega;
        return visibility(trace, r.grid, o);
    } catch (const ConfigError &e) {
        r.metadata[key + "_note"] = e.what();
        return kNaN;
    }
}

double safe_shift(SpectrumResult &r, const std::string &key, const std::vector<double> &a,
                  const std::vector<double> &b, const TimeWindow &window, double omega) {
    try {
        return fringe_shift(a, b, r.grid, window, omega);
    } catch (const ConfigError &e) {
        r.metadata[key + "_note"] = e.what();
        return kNaN;
    }
}

void record_convergence(SpectrumResult &r, const std::string &name, const PropagationResult &p) {
    r.diagnostics["convergence_ratio_" + name] = p.convergence_ratio;
    r.diagnostics["orders_" + name] = static_cast<double>(p.term_norms.size());
    r.metadata["convergence_" + name] = p.convergence_message();
    r.converged = r.converged && p.converged;
}

SpectrumResult make_result(const TimeGrid &grid, const TargetConfig &t) {
    SpectrumResult r;
    r.grid = grid;
    r.lifetime_ns = t.isotope.mean_lifetime_ns;
    return r;
}

}  // namespace

const SpectrumView &SpectrumResult::view(const std::string &name) const {
    for (const auto &v : views)
        if (v.name == name) return v;
    throw std::out_of_range("no view named " + name);
}

const std::vector<double> &SpectrumResult::trace(const std::string &view_name,
                                                 const std::string &key) const {
    return view(view_name).intensities.at(key);
}

// ---- single target ---------------------------------------------------------------

SpectrumResult run_single_target(const TargetConfig &target, const PolVector &input,
                                 const TimeGrid &grid, const PropagationOptions &opts) {
    const auto prop = propagate_delta(target, input, grid, opts);
    SpectrumResult r = make_result(grid, target);
    r.views.push_back(field_view("main", prop.field));
    record_convergence(r, "target", prop);
    const double omega = 0.5 * target.hyperfine.delta_m0_separation();
    if (omega > 0.0) {
        const TimeWindow w{std::min(2.0 * kPi / omega, 0.5 * grid.tau_end()), grid.tau_end()};
        r.diagnostics["visibility"] = safe_visibility(r, "visibility", r.trace("main", "total"), w, omega);
        r.metadata["window_tau"] = fmt(w.tau_begin) + ":" + fmt(w.tau_end);
    }
    return r;
}

// ---- scheme 1 --------------------------------------------------------------------

Scheme1Config Scheme1Config::published_defaults() {
    Scheme1Config c;
    c.target1.xi = 7.0;
    c.target1.p_max = 19;
    c.target1.hyperfine = HyperfineConfig::from_splittings(48.0, -27.0, axis::z);
    c.target2 = c.target1;
    c.target2.hyperfine = HyperfineConfig::from_splittings(28.0, -16.0, axis::y);
    return c;
}

Scheme1Config Scheme1Config::control() const {
    Scheme1Config c = *this;
    c.faraday = false;
    c.target2.hyperfine = target1.hyperfine;
    return c;
}

Scheme1Config Scheme1Config::scaled(double factor) const {
    Scheme1Config c = *this;
    c.target1.hyperfine = target1.hyperfine.scaled(factor);
    c.target2.hyperfine = target2.hyperfine.scaled(factor);
    return c;
}

TimeWindow Scheme1Config::window() const {
    const double life = target1.isotope.mean_lifetime_ns;
    const auto w = window_ns.value_or(std::make_pair(shutter_close_ns + 10.0, 190.0));
    return {w.first / life, w.second / life};
}

void Scheme1Config::validate() const {
    target1.validate();
    target2.validate();
    if (!(shutter_open_ns >= 0.0 && shutter_close_ns > shutter_open_ns))
        throw ConfigError("shutter needs 0 <= open < close");
    if (!same_direction(target1.hyperfine.direction, axis::z))
        throw ConfigError("scheme 1: target-1 field must point along z");
    const Vec3 want2 = faraday ? kBeamDirection : axis::z;
    if (!same_direction(target2.hyperfine.direction, want2))
        throw ConfigError(faraday ? "scheme 1: target-2 field must point along the beam (y)"
                                  : "scheme 1 control: target-2 field must point along z");
    if (faraday && !allow_field_mismatch && target1.hyperfine.field_tesla &&
        target2.hyperfine.field_tesla) {
        const double want = matching_field(*target1.hyperfine.field_tesla, matching_case, target1.isotope);
        const double have = *target2.hyperfine.field_tesla;
        if (std::abs(have - want) > 1e-3 * want)
            throw ConfigError("scheme 1: B2 = " + fmt(have) + " T violates the matching condition (" +
                              fmt(want) + " T); pass the override to run anyway");
    }
}

SpectrumResult run_scheme1(const Scheme1Config &cfg, const TimeGrid &grid,
                           const PropagationOptions &opts) {
    cfg.validate();
    const double life = cfg.target1.isotope.mean_lifetime_ns;
    const auto r1 = propagate_delta(cfg.target1, cfg.input, grid, opts);
    const FieldEnvelope gated = time_gate(r1.field, cfg.shutter_open_ns, cfg.shutter_close_ns, life);
    const auto r2 = propagate_general(cfg.target2, gated, opts);

    SpectrumResult r = make_result(grid, cfg.target1);
    r.views.push_back(field_view("target1", r1.field));
    SpectrumView behind2;
    behind2.name = "target2";
    behind2.intensities["total"] = intensity(r2.field);
    behind2.intensities["sigma"] = intensity(project(r2.field, PolAxis::sigma));
    behind2.intensities["pi"] = intensity(project(r2.field, PolAxis::pi));
    behind2.field = r2.field.gridded();
    r.views.push_back(std::move(behind2));
    record_convergence(r, "target1", r1);
    record_convergence(r, "target2", r2);

    const double omega = 0.5 * cfg.target1.hyperfine.delta_m0_separation();
    const TimeWindow w = cfg.window();
    r.diagnostics["omega_beat"] = omega;
    r.diagnostics["visibility_target1"] =
        safe_visibility(r, "visibility_target1", r.trace("target1", "total"), w, omega);
    r.diagnostics["visibility_target2"] =
        safe_visibility(r, "visibility_target2", r.trace("target2", "total"), w, omega);
    r.diagnostics["visibility_sigma"] =
        safe_visibility(r, "visibility_sigma", r.trace("target2", "sigma"), w, omega);
    r.diagnostics["visibility_pi"] =
        safe_visibility(r, "visibility_pi", r.trace("target2", "pi"), w, omega);
    r.diagnostics["fringe_shift"] = safe_shift(r, "fringe_shift", r.trace("target2", "sigma"),
                                               r.trace("target2", "pi"), w, omega);
    r.metadata["window_ns"] = fmt(w.tau_begin * life) + ":" + fmt(w.tau_end * life);
    r.metadata["shutter_ns"] = fmt(cfg.shutter_open_ns) + ":" + fmt(cfg.shutter_close_ns);
    r.metadata["geometry"] = cfg.faraday ? "faraday" : "parallel-z control";
    return r;
}

// ---- scheme 2 --------------------------------------------------------------------

std::pair<double, double> alpha_beta_of_delay(double delta_tau) {
    if (!(delta_tau >= 0.0)) throw ConfigError("time delay must be >= 0");
    return {std::sqrt(1.0 / (std::exp(-delta_tau) + 1.0)), std::sqrt(1.0 / (std::exp(delta_tau) + 1.0))};
}

Scheme2Config Scheme2Config::external(double omega2, double phi, double xi, int p_max,
                                      bool auto_alpha) {
    if (!(omega2 > 0.0)) throw ConfigError("omega2 must be positive");
    if (!(phi >= 0.0)) throw ConfigError("phase phi must be >= 0");
    Scheme2Config c;
    const auto iso = IsotopeConstants::iron57();
    c.target1.xi = xi;
    c.target1.p_max = p_max;
    c.target1.hyperfine = HyperfineConfig::from_omega2(omega2, axis::z, iso);
    c.target2 = c.target1;
    c.target2.hyperfine = HyperfineConfig::from_omega2(omega2, axis::x, iso);
    c.delta_tau = phi / omega2;
    if (auto_alpha) std::tie(c.alpha, c.beta) = alpha_beta_of_delay(c.delta_tau);
    return c;
}

Scheme2Config Scheme2Config::storage(double omega2, std::vector<SwitchWindow> windows, double xi,
                                     int p_max) {
    Scheme2Config c = external(omega2, 0.0, xi, p_max, false);
    c.mode = DelayMode::storage;
    c.target2.schedule = SwitchSchedule(std::move(windows));
    return c;
}

std::vector<SwitchWindow> Scheme2Config::default_storage_windows(double omega2, bool second_window) {
    const double q = kPi / (2.0 * omega2);
    std::vector<SwitchWindow> w{{q, 2.0 * q}};
    if (second_window) w.push_back({4.0 * q, 5.0 * q});
    return w;
}

double Scheme2Config::omega2() const { return 0.5 * target1.hyperfine.delta_m0_separation(); }

TimeWindow Scheme2Config::window(const TimeGrid &grid) const {
    if (analysis_window) return *analysis_window;
    double begin = 0.0;
    if (mode == DelayMode::external) begin = 2.0 * delta_tau;
    else if (!target2.schedule.empty()) begin = 2.0 * target2.schedule.windows().back().tau_on;
    if (begin <= 0.0) begin = 2.0 * kPi / std::max(omega2(), 1e-300);
    return {std::min(begin, 0.5 * grid.tau_end()), grid.tau_end()};
}

void Scheme2Config::validate() const {
    target1.validate();
    target2.validate();
    if (std::abs(alpha * alpha + beta * beta - 1.0) > 1e-12)
        throw ConfigError("scheme 2: alpha^2 + beta^2 must equal 1");
    if (!same_direction(target1.hyperfine.direction, axis::z))
        throw ConfigError("scheme 2: B1 must point along z");
    if (!same_direction(target2.hyperfine.direction, axis::x))
        throw ConfigError("scheme 2: B2 must point along x");
    const auto &h1 = target1.hyperfine;
    const auto &h2 = target2.hyperfine;
    const double scale = std::max({1.0, std::abs(h1.eps_ground), std::abs(h1.eps_excited)});
    if (std::abs(h1.eps_ground - h2.eps_ground) > 1e-9 * scale ||
        std::abs(h1.eps_excited - h2.eps_excited) > 1e-9 * scale)
        throw ConfigError("scheme 2: both targets need equal splittings");
    if (!(delta_tau >= 0.0)) throw ConfigError("scheme 2: delay must be >= 0");
    if (mode == DelayMode::storage) {
        if (target2.schedule.empty()) throw ConfigError("storage mode needs a switching schedule on target 2");
        if (delta_tau != 0.0) throw ConfigError("storage mode excludes an external delay");
    }
}

TimeGrid scheme2_grid(const Scheme2Config &cfg, double tau_end, double nominal_step) {
    if (cfg.mode == DelayMode::external && cfg.delta_tau > 0.0)
        return TimeGrid::aligned(tau_end, nominal_step, cfg.delta_tau);
    return TimeGrid::uniform(0.0, tau_end, nominal_step);
}

SpectrumResult run_scheme2(const Scheme2Config &cfg, const TimeGrid &grid,
                           const PropagationOptions &opts) {
    cfg.validate();
    const FieldEnvelope in = FieldEnvelope::pulse(grid, PolVector::linear(cfg.alpha, cfg.beta));
    const auto [split1, split2] = beam_splitter(in, FieldEnvelope(grid));
    const auto r1 = propagate_general(cfg.target1, project(split1, PolAxis::sigma), opts);
    const auto r2 = propagate_general(cfg.target2, project(split2, PolAxis::pi), opts);
    FieldEnvelope arm2 = r2.field;
    if (cfg.mode == DelayMode::external) arm2 = time_delay(arm2, cfg.delta_tau);
    const auto [out1, out2] = beam_splitter(mirror(r1.field), mirror(arm2));

    SpectrumResult r = make_result(grid, cfg.target1);
    SpectrumView main;
    main.name = "main";
    main.intensities["det1"] = intensity(out1);
    main.intensities["det2"] = intensity(out2);
    r.views.push_back(std::move(main));
    r.views.push_back(field_view("det1", out1));
    r.views.push_back(field_view("det2", out2));
    record_convergence(r, "target1", r1);
    record_convergence(r, "target2", r2);

    const double omega = cfg.omega2();
    const TimeWindow w = cfg.window(grid);
    const double delay = cfg.mode == DelayMode::external ? cfg.delta_tau : cfg.target2.schedule.total_off_time();
    r.diagnostics["omega2"] = omega;
    r.diagnostics["delay_tau"] = delay;
    r.diagnostics["phi"] = omega * delay;
    r.diagnostics["alpha"] = cfg.alpha;
    r.diagnostics["beta"] = cfg.beta;
    r.diagnostics["visibility_det1"] = safe_visibility(r, "visibility_det1", r.trace("det1", "total"), w, omega);
    r.diagnostics["visibility_det2"] = safe_visibility(r, "visibility_det2", r.trace("det2", "total"), w, omega);
    r.diagnostics["fringe_shift_det1"] = safe_shift(r, "fringe_shift_det1", r.trace("det1", "sigma"),
                                                    r.trace("det1", "pi"), w, omega);
    r.metadata["mode"] = cfg.mode == DelayMode::external ? "external" : "storage";
    r.metadata["window_tau"] = fmt(w.tau_begin) + ":" + fmt(w.tau_end);
    return r;
}

EquivalenceReport storage_delay_equivalence(const Scheme2Config &external,
                                            const Scheme2Config &storage, const TimeGrid &grid) {
    if (external.mode != DelayMode::external || storage.mode != DelayMode::storage)
        throw ConfigError("equivalence check needs one external and one storage configuration");
    storage.validate();
    const double off = storage.target2.schedule.total_off_time();
    if (std::abs(off - external.delta_tau) > 1e-12 * std::max(1.0, off))
        throw ConfigError("storage off time must equal the external delay");
    const double tau_on = storage.target2.schedule.windows().back().tau_on;

    TargetConfig static_target = external.target2;
    static_target.schedule = SwitchSchedule{};
    const auto stored = first_order_by_line(storage.target2, PolVector::e_pi(), grid);
    const auto delayed = first_order_by_line(static_target, PolVector::e_pi(), grid, external.delta_tau);

    EquivalenceReport rep;
    rep.amplitude_factor = std::exp(-0.5 * external.delta_tau);
    double peak = 0.0, worst = 0.0;
    for (const auto &s : stored) {
        const LineField *match = nullptr;
        for (const auto &d : delayed)
            if (d.line.m_ground == s.line.m_ground && d.line.m_excited == s.line.m_excited) match = &d;
        if (!match) throw ConfigError("storage and external targets couple different lines");
        for (std::size_t n = 0; n < grid.samples; ++n) {
            if (grid.tau(n) <= tau_on) continue;
            const PolVector fs = s.field.at(n);
            const PolVector fe = match->field.at(n);
            const PolVector diff = fs - rep.amplitude_factor * fe;
            peak = std::max(peak, std::sqrt(fs.norm_sq()));
            worst = std::max(worst, std::sqrt(diff.norm_sq()));
            const cplx overlap = dot(fe, fs);
            if (std::abs(overlap) > 0.0) rep.max_phase_deviation = std::max(rep.max_phase_deviation, std::abs(std::arg(overlap)));
            ++rep.samples_compared;
        }
    }
    rep.max_relative_deviation = peak > 0.0 ? worst / peak : 0.0;
    return rep;
}

}  // namespace nfs
