#include <doctest.h>

#include <cmath>

#include "nfs/kernel.hpp"

using namespace nfs;

namespace {

TargetConfig target(double xi, int p_max, const HyperfineConfig &hf) {
    TargetConfig t;
    t.xi = xi;
    t.p_max = p_max;
    t.hyperfine = hf;
    return t;
}

PropagationOptions keep() {
    PropagationOptions o;
    o.keep_terms = true;
    return o;
}

double l2(std::span<const cplx> v) {
    double s = 0.0;
    for (const auto &x : v) s += std::norm(x);
    return std::sqrt(s);
}

// Largest step-to-step change of a trace, and the change across sample n.
double largest_jump(std::span<const cplx> v) {
    double m = 0.0;
    for (std::size_t n = 1; n < v.size(); ++n) m = std::max(m, std::abs(v[n] - v[n - 1]));
    return m;
}

const TimeGrid kGrid = TimeGrid::uniform(0.0, 3.0, 1e-3);

}  // namespace

TEST_SUITE("kernel") {

TEST_CASE("zero thickness leaves only the prompt pulse") {
    const auto r = propagate_delta(target(0.0, 5, HyperfineConfig::from_splittings(48, -27, axis::z)),
                                   PolVector::e_sigma(), kGrid);
    CHECK(r.field.norm_sq() == 0.0);
    REQUIRE(r.field.impulses().size() == 1);
    CHECK(r.field.impulses()[0].amplitude == PolVector::e_sigma());
}

TEST_CASE("unsplit line, first order: -xi f exp(-tau/2)") {
    const auto t = target(2.0, 1, HyperfineConfig{});
    const auto r = propagate_delta(t, PolVector::e_sigma(), kGrid);
    for (std::size_t n = 0; n < kGrid.samples; n += 97) {
        const double expect = -2.0 * 0.8 * std::exp(-0.5 * kGrid.tau(n));
        CHECK(std::abs(r.field.sigma()[n] - expect) < 1e-14);
        CHECK(std::abs(r.field.pi()[n]) < 1e-15);
    }
    CHECK(r.converged);
    CHECK(r.convergence_message().find("first-order") != std::string::npos);
}

TEST_CASE("B along z, sigma input, first order: two-line cosine beat") {
    const auto hf = HyperfineConfig::from_omega2(28.0, axis::z, IsotopeConstants::iron57());
    const auto r = propagate_delta(target(1.0, 1, hf), PolVector::e_sigma(), kGrid);
    for (std::size_t n = 0; n < kGrid.samples; n += 53) {
        const double tau = kGrid.tau(n);
        const cplx expect = -0.4 * (std::exp(kI * 28.0 * tau) + std::exp(-kI * 28.0 * tau)) * std::exp(-0.5 * tau);
        CHECK(std::abs(r.field.sigma()[n] - expect) < 1e-14);
    }
}

TEST_CASE("order-p terms scale as xi^p") {
    const auto hf = HyperfineConfig::from_splittings(48.0, -27.0, axis::z);
    const auto a = propagate_delta(target(1.5, 8, hf), PolVector::linear(0.6, 0.8), kGrid, keep());
    const auto b = propagate_delta(target(3.0, 8, hf), PolVector::linear(0.6, 0.8), kGrid, keep());
    REQUIRE(a.terms.size() == 8);
    for (std::size_t p = 1; p <= 8; ++p) {
        FieldEnvelope diff = b.terms[p - 1];
        diff += cplx(-std::pow(2.0, static_cast<double>(p))) * a.terms[p - 1];
        CHECK(std::sqrt(diff.norm_sq()) <= 1e-13 * std::sqrt(b.terms[p - 1].norm_sq()));
    }
}

TEST_CASE("B along z conserves sigma at every order") {
    const auto hf = HyperfineConfig::from_splittings(48.0, -27.0, axis::z);
    const auto r = propagate_delta(target(7.0, 19, hf), PolVector::e_sigma(), kGrid, keep());
    for (const auto &term : r.terms) CHECK(l2(term.pi()) <= 1e-14 * l2(term.sigma()));
}

TEST_CASE("B along the beam keeps circular states") {
    const auto hf = HyperfineConfig::from_splittings(28.0, -16.0, axis::y);
    for (const auto &[in, other] : {std::pair{PolVector::e_plus(), PolVector::e_minus()},
                                    std::pair{PolVector::e_minus(), PolVector::e_plus()}}) {
        const auto r = propagate_delta(target(7.0, 19, hf), in, kGrid, keep());
        for (const auto &term : r.terms) {
            double leak = 0.0, kept = 0.0;
            for (std::size_t n = 0; n < term.size(); ++n) {
                leak += std::norm(dot(other, term.at(n)));
                kept += std::norm(dot(in, term.at(n)));
            }
            CHECK(std::sqrt(leak) <= 1e-14 * std::sqrt(kept));
        }
    }
}

TEST_CASE("the field is continuous at switch instants") {
    const auto hf = HyperfineConfig::from_splittings(48.0, -27.0, axis::z);
    auto t = target(1.0, 3, hf);
    t.schedule = SwitchSchedule::single(0.6, 0.9);
    for (const auto &line : t.lines()) {
        for (double s : {0.6, 0.9}) {
            const cplx below = current_factor(line, s - 1e-13, t.schedule);
            const cplx above = current_factor(line, s + 1e-13, t.schedule);
            CHECK(std::abs(above - below) < 1e-11);
        }
    }
    const auto r = propagate_delta(t, PolVector::e_sigma(), kGrid, keep());
    for (const auto &term : r.terms) {
        const auto s = term.sigma();
        const double typical = largest_jump(s);
        for (std::size_t n : {kGrid.nearest_index(0.6), kGrid.nearest_index(0.9)}) {
            CHECK(std::abs(s[n + 1] - s[n]) <= typical);
            CHECK(std::abs(s[n] - s[n - 1]) <= typical);
        }
    }
}

TEST_CASE("while the field is off the first order only decays") {
    const auto hf = HyperfineConfig::from_splittings(48.0, -27.0, axis::z);
    auto t = target(1.0, 1, hf);
    t.schedule = SwitchSchedule::single(0.6, 0.9);
    const auto r = propagate_delta(t, PolVector::e_sigma(), kGrid);
    const std::size_t a = kGrid.nearest_index(0.6), b = kGrid.nearest_index(0.9);
    for (std::size_t n = a; n <= b; ++n) {
        const cplx expect = r.field.sigma()[a] * std::exp(-0.5 * (kGrid.tau(n) - kGrid.tau(a)));
        CHECK(std::abs(r.field.sigma()[n] - expect) < 1e-14);
    }
}

TEST_CASE("impulse and gridded sources agree") {
    const auto hf = HyperfineConfig::from_splittings(48.0, -27.0, axis::z);
    const double xi = 2.0;
    const auto from_impulse = propagate_delta(target(xi, 6, hf), PolVector::linear(0.6, 0.8), kGrid, keep());
    FieldEnvelope first = from_impulse.terms[0];
    first *= cplx(-1.0 / xi);
    const auto from_grid = propagate_general(target(xi, 5, hf), first, keep());
    for (std::size_t p = 1; p <= 5; ++p) {
        FieldEnvelope diff = from_impulse.terms[p];
        diff += cplx(xi / static_cast<double>(p + 1)) * from_grid.terms[p - 1];
        CHECK(std::sqrt(diff.norm_sq()) <= 1e-6 * std::sqrt(from_impulse.terms[p].norm_sq()));
    }
}

TEST_CASE("an impulse later in time matches a shifted response") {
    const auto hf = HyperfineConfig::from_splittings(48.0, -27.0, axis::z);
    const auto t = target(3.0, 10, hf);
    const auto early = propagate_delta(t, PolVector::e_sigma(), kGrid);
    const auto late = propagate_delta(t, PolVector::e_sigma(), kGrid, {}, 0.5);
    const std::size_t k = kGrid.nearest_index(0.5);
    for (std::size_t n = 0; n < k; ++n) CHECK(late.field.sigma()[n] == cplx{});
    for (std::size_t n = k; n < kGrid.samples; n += 37)
        CHECK(std::abs(late.field.sigma()[n] - early.field.sigma()[n - k]) < 1e-9);
}

TEST_CASE("grid doubling changes a thick-target spectrum by less than 1e-4") {
    const auto hf = HyperfineConfig::from_splittings(48.0, -27.0, axis::z);
    const auto t = target(7.0, 19, hf);
    const auto coarse_grid = TimeGrid::uniform(0.0, 3.55, 1e-3);
    const auto fine_grid = TimeGrid::uniform(0.0, 3.55, 5e-4);
    const PolVector in = PolVector::linear(0.6, 0.8);
    const auto coarse = propagate_delta(t, in, coarse_grid);
    const auto fine = propagate_delta(t, in, fine_grid);
    double num = 0.0, den = 0.0;
    for (std::size_t n = 0; n < coarse_grid.samples; ++n) {
        num += (coarse.field.at(n) - fine.field.at(2 * n)).norm_sq();
        den += coarse.field.at(n).norm_sq();
    }
    CHECK(std::sqrt(num / den) < 1e-4);
}

TEST_CASE("non-convergence is reported with the achieved ratio") {
    const auto r = propagate_delta(target(30.0, 3, HyperfineConfig{}), PolVector::e_sigma(), kGrid);
    CHECK_FALSE(r.converged);
    CHECK(r.convergence_ratio > 1e-10);
    CHECK(r.convergence_message().find("NOT converged") != std::string::npos);
}

TEST_CASE("per-line first orders add up to the total first order") {
    const auto hf = HyperfineConfig::from_splittings(28.0, -16.0, axis::y);
    const auto t = target(2.0, 1, hf);
    const auto lines = first_order_by_line(t, PolVector::e_sigma(), kGrid);
    CHECK(lines.size() == 4);
    FieldEnvelope sum(kGrid);
    for (const auto &l : lines) sum += l.field;
    const auto r = propagate_delta(t, PolVector::e_sigma(), kGrid);
    double worst = 0.0;
    for (std::size_t n = 0; n < kGrid.samples; ++n)
        worst = std::max(worst, std::sqrt((sum.at(n) - r.field.at(n)).norm_sq()));
    CHECK(worst < 1e-14);
}

TEST_CASE("invalid targets are rejected") {
    auto t = target(1.0, 0, HyperfineConfig{});
    CHECK_THROWS_AS(propagate_delta(t, PolVector::e_sigma(), kGrid), ConfigError);
    t.p_max = 1;
    t.f_lm = 1.5;
    CHECK_THROWS_AS(propagate_delta(t, PolVector::e_sigma(), kGrid), ConfigError);
    t.f_lm = 0.8;
    CHECK_THROWS_AS(propagate_delta(t, PolVector::e_sigma(), kGrid, {}, 0.00037), ConfigError);
}

}
