#include <doctest.h>

#include <cmath>

#include "nfs/experiments.hpp"

using namespace nfs;

namespace {

PropagationOptions first_order_opts() { return {}; }

double quarter(double omega2) { return kPi / (2.0 * omega2); }

}  // namespace

TEST_SUITE("experiments") {

TEST_CASE("single target, thin limit: (1 + cos 2 omega2 tau) exp(-tau)") {
    TargetConfig t;
    t.xi = 1.0;
    t.hyperfine = HyperfineConfig::from_omega2(28.0, axis::z, t.isotope);
    const auto grid = TimeGrid::standard();
    const auto r = run_single_target(t, PolVector::e_sigma(), grid);
    const auto &i = r.trace("main", "total");
    for (std::size_t n = 0; n < grid.samples; n += 41) {
        const double tau = grid.tau(n);
        const double expect = 0.5 * 0.64 * (1.0 + std::cos(56.0 * tau)) * std::exp(-tau);
        CHECK(std::abs(i[n] - expect) < 1e-14);
    }
    CHECK(r.diagnostics.at("visibility") == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("single target, zero thickness gives zero intensity") {
    TargetConfig t;
    t.xi = 0.0;
    const auto r = run_single_target(t, PolVector::e_sigma(), TimeGrid::standard());
    for (double v : r.trace("main", "total")) CHECK(v == 0.0);
}

TEST_CASE("alpha and beta of a delay") {
    const auto [a0, b0] = alpha_beta_of_delay(0.0);
    CHECK(a0 == doctest::Approx(std::sqrt(0.5)));
    CHECK(b0 == doctest::Approx(std::sqrt(0.5)));
    for (double d : {0.01, kPi / 56.0, 0.3, 2.0}) {
        const auto [a, b] = alpha_beta_of_delay(d);
        CHECK(a * a + b * b == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(b * std::exp(0.5 * d) / a == doctest::Approx(1.0).epsilon(1e-15));
    }
    const auto [a, b] = alpha_beta_of_delay(kPi / 56.0);
    CHECK(std::abs(a - 0.717) < 1e-3);
    CHECK(std::abs(b - 0.697) < 1e-3);
    CHECK_THROWS_AS(alpha_beta_of_delay(-0.1), ConfigError);
}

TEST_CASE("scheme 2 without delay preserves the cosine beat") {
    const auto cfg = Scheme2Config::external(28.0, 0.0, 1.0, 1, false);
    const auto grid = scheme2_grid(cfg, 5.0, 1e-3);
    const auto r = run_scheme2(cfg, grid, first_order_opts());
    const double f = cfg.target1.f_lm;
    for (const char *det : {"det1", "det2"}) {
        const auto &i = r.trace("main", det);
        double worst = 0.0;
        for (std::size_t n = 0; n < grid.samples; ++n) {
            const double tau = grid.tau(n);
            const double ratio = i[n] / (f * f / 8.0 * std::exp(-tau));
            worst = std::max(worst, std::abs(ratio - (1.0 + std::cos(56.0 * tau))));
        }
        CHECK(worst < 1e-10);
    }
}

TEST_CASE("scheme 2 with a quarter-period delay and matched amplitudes is flat") {
    const auto cfg = Scheme2Config::external(28.0, kPi / 2.0, 1.0, 1, true);
    const auto grid = scheme2_grid(cfg, 5.0, 1e-3);
    const auto r = run_scheme2(cfg, grid, first_order_opts());
    CHECK(r.diagnostics.at("visibility_det1") < 1e-10);
    CHECK(r.diagnostics.at("visibility_det2") < 1e-10);
    CHECK(std::abs(r.diagnostics.at("fringe_shift_det1")) == doctest::Approx(0.25).epsilon(0.02 / 0.25));
}

TEST_CASE("scheme 2 detector sum rule") {
    const double alpha = 0.6, beta = 0.8;
    auto cfg = Scheme2Config::external(28.0, kPi / 3.0, 2.0, 6, false);
    cfg.alpha = alpha;
    cfg.beta = beta;
    const auto grid = scheme2_grid(cfg, 3.0, 1e-3);
    const auto r = run_scheme2(cfg, grid);
    const auto es = propagate_delta(cfg.target1, PolVector::e_sigma(), grid).field;
    const auto ep = time_delay(propagate_delta(cfg.target2, PolVector::e_pi(), grid).field, cfg.delta_tau);
    const auto is = intensity(es), ip = intensity(ep);
    const auto &d1 = r.trace("main", "det1");
    const auto &d2 = r.trace("main", "det2");
    for (std::size_t n = 0; n < grid.samples; ++n) {
        const double expect = 0.25 * (alpha * alpha * is[n] + beta * beta * ip[n]) * 2.0;
        CHECK(d1[n] + d2[n] == doctest::Approx(expect).epsilon(1e-12));
    }
}

TEST_CASE("eraser completeness: projected intensities add up to the detector intensity") {
    const auto cfg = Scheme2Config::external(28.0, kPi / 2.0, 1.0, 14, true);
    const auto grid = scheme2_grid(cfg, 5.0, 1e-3);
    const auto r = run_scheme2(cfg, grid);
    for (const char *det : {"det1", "det2"}) {
        const auto &t = r.trace(det, "total");
        const auto &s = r.trace(det, "sigma");
        const auto &p = r.trace(det, "pi");
        for (std::size_t n = 0; n < grid.samples; ++n)
            CHECK(s[n] + p[n] == doctest::Approx(t[n]).epsilon(1e-15));
    }
}

TEST_CASE("scheme 2 configuration checks") {
    auto cfg = Scheme2Config::external(28.0, 0.0, 1.0, 1, false);
    cfg.alpha = 0.717;
    cfg.beta = 0.697;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    auto st = Scheme2Config::storage(28.0, Scheme2Config::default_storage_windows(28.0, false), 1.0, 1);
    st.delta_tau = 0.05;
    CHECK_THROWS_AS(st.validate(), ConfigError);
    st.delta_tau = 0.0;
    st.target2.schedule = SwitchSchedule{};
    CHECK_THROWS_AS(st.validate(), ConfigError);
    auto tilted = Scheme2Config::external(28.0, 0.0, 1.0, 1, false);
    tilted.target2.hyperfine.direction = axis::z;
    CHECK_THROWS_AS(tilted.validate(), ConfigError);
}

TEST_CASE("storage: a zero-length off window equals the undelayed run") {
    const double q = quarter(28.0);
    const auto st = Scheme2Config::storage(28.0, {{q, q}}, 1.0, 4);
    const auto ex = Scheme2Config::external(28.0, 0.0, 1.0, 4, false);
    const auto grid = TimeGrid::uniform(0.0, 3.0, 1e-3);
    const auto a = run_scheme2(st, grid), b = run_scheme2(ex, grid);
    const auto &x = a.trace("main", "det1");
    const auto &y = b.trace("main", "det1");
    for (std::size_t n = 0; n < grid.samples; ++n) CHECK(x[n] == doctest::Approx(y[n]).epsilon(1e-13));
}

TEST_CASE("storage: 45 degree input gives a flat first-order envelope after switch-on") {
    const auto st = Scheme2Config::storage(28.0, Scheme2Config::default_storage_windows(28.0, false), 1.0, 1);
    const auto grid = TimeGrid::aligned(5.0, 1e-3, quarter(28.0));
    const auto r = run_scheme2(st, grid);
    CHECK(r.diagnostics.at("visibility_det1") < 1e-10);
}

TEST_CASE("storage: a second window restores the beat") {
    const auto st = Scheme2Config::storage(28.0, Scheme2Config::default_storage_windows(28.0, true), 1.0, 1);
    const auto grid = TimeGrid::aligned(5.0, 1e-3, quarter(28.0));
    const auto r = run_scheme2(st, grid);
    CHECK(r.diagnostics.at("visibility_det1") > 0.8);
}

TEST_CASE("storage and external delay are equivalent after switch-on") {
    const double q = quarter(28.0);
    const auto ex = Scheme2Config::external(28.0, kPi / 2.0, 1.0, 1, false);
    const auto st = Scheme2Config::storage(28.0, Scheme2Config::default_storage_windows(28.0, false), 1.0, 1);
    const auto grid = TimeGrid::aligned(5.0, 1e-3, q);
    const auto rep = storage_delay_equivalence(ex, st, grid);
    CHECK(rep.samples_compared > 1000);
    CHECK(rep.max_phase_deviation < 1e-10);
    CHECK(rep.max_relative_deviation < 1e-10);
    CHECK(rep.amplitude_factor == doctest::Approx(std::exp(-0.5 * q)));
}

TEST_CASE("scheme 1 configuration checks") {
    auto cfg = Scheme1Config::published_defaults();
    CHECK_NOTHROW(cfg.validate());
    auto bad = cfg;
    bad.target2.hyperfine.direction = axis::z;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    const auto c = IsotopeConstants::iron57();
    auto fields = cfg;
    fields.target1.hyperfine = HyperfineConfig::from_field(39.0, axis::z, c);
    fields.target2.hyperfine = HyperfineConfig::from_field(25.0, axis::y, c);
    CHECK_THROWS_AS(fields.validate(), ConfigError);
    fields.allow_field_mismatch = true;
    CHECK_NOTHROW(fields.validate());
    fields.allow_field_mismatch = false;
    fields.target2.hyperfine = HyperfineConfig::from_field(matching_field(39.0, MatchingCase::case2, c), axis::y, c);
    CHECK_NOTHROW(fields.validate());
}

TEST_CASE("scheme 1 at the printed parameters") {
    const auto cfg = Scheme1Config::published_defaults();
    const auto r = run_scheme1(cfg, TimeGrid::standard());
    CHECK(r.converged);
    CHECK(r.diagnostics.at("visibility_target1") > 0.8);
    CHECK(r.diagnostics.at("visibility_sigma") > 0.8);
    CHECK(r.diagnostics.at("visibility_pi") > 0.8);
    CHECK(std::abs(r.diagnostics.at("fringe_shift")) == doctest::Approx(0.25).epsilon(0.02 / 0.25));
    CHECK(r.diagnostics.at("visibility_target2") < r.diagnostics.at("visibility_target1"));
}

TEST_CASE("scheme 1 without marking keeps the beat") {
    const auto r = run_scheme1(Scheme1Config::published_defaults().control(), TimeGrid::standard());
    CHECK(r.diagnostics.at("visibility_target2") > 0.8);
}

TEST_CASE("scheme 1 residual visibility falls as the splittings grow") {
    double last = 2.0;
    for (double s : {1.0, 2.0, 4.0}) {
        const auto r = run_scheme1(Scheme1Config::published_defaults().scaled(s), TimeGrid::standard());
        const double v = r.diagnostics.at("visibility_target2");
        CAPTURE(s);
        CHECK(v < last);
        last = v;
    }
}

TEST_CASE("scheme 1 behind target 2: two circular channels of equal weight") {
    const auto r = run_scheme1(Scheme1Config::published_defaults(), TimeGrid::standard());
    const auto &field = *r.view("target2").field;
    const auto w = Scheme1Config::published_defaults().window();
    double plus = 0.0, minus = 0.0;
    for (std::size_t n = 0; n < field.size(); ++n) {
        const double tau = field.grid().tau(n);
        if (tau < w.tau_begin || tau > w.tau_end) continue;
        const auto c = to_circular(field.at(n));
        plus += std::norm(c.plus);
        minus += std::norm(c.minus);
    }
    CHECK(plus / minus == doctest::Approx(1.0).epsilon(1e-6));
}

}
