#include <doctest.h>

#include <cmath>
#include <random>

#include "nfs/field.hpp"

using namespace nfs;

namespace {

FieldEnvelope random_field(const TimeGrid &g, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> d;
    FieldEnvelope f(g);
    for (std::size_t n = 0; n < f.size(); ++n) f.set(n, {{d(rng), d(rng)}, {d(rng), d(rng)}});
    return f;
}

double max_diff(const FieldEnvelope &a, const FieldEnvelope &b) {
    double m = 0.0;
    for (std::size_t n = 0; n < a.size(); ++n) m = std::max(m, std::sqrt((a.at(n) - b.at(n)).norm_sq()));
    return m;
}

const TimeGrid kGrid = TimeGrid::uniform(0.0, 1.0, 1e-3);

}  // namespace

TEST_SUITE("polarization") {

TEST_CASE("grid construction") {
    const auto g = TimeGrid::standard();
    CHECK(g.samples == 3551);
    CHECK(g.tau_end() == doctest::Approx(3.55));
    const auto a = TimeGrid::aligned(5.0, 1e-3, kPi / 56.0);
    CHECK(a.step <= 1e-3);
    CHECK(a.steps_for(kPi / 56.0) * a.step == doctest::Approx(kPi / 56.0).epsilon(1e-13));
    CHECK_THROWS_AS(kGrid.steps_for(0.00015), ConfigError);
}

TEST_CASE("circular basis sign convention and round trip") {
    const PolVector ep = PolVector::e_plus();
    CHECK(std::abs(ep.sigma - 1.0 / std::sqrt(2.0)) < 1e-15);
    CHECK(std::abs(ep.pi - kI / std::sqrt(2.0)) < 1e-15);
    CHECK(std::abs(dot(ep, PolVector::e_minus())) < 1e-15);
    std::mt19937_64 rng(3);
    std::normal_distribution<double> d;
    for (int i = 0; i < 100; ++i) {
        const PolVector v{{d(rng), d(rng)}, {d(rng), d(rng)}};
        const PolVector back = from_circular(to_circular(v));
        CHECK(std::sqrt((back - v).norm_sq()) < 1e-14);
    }
}

TEST_CASE("projector completeness is exact") {
    const auto f = random_field(kGrid, 1);
    const auto sum = project(f, PolAxis::sigma) + project(f, PolAxis::pi);
    CHECK(max_diff(sum, f) == 0.0);
}

TEST_CASE("projection on an arbitrary state is idempotent") {
    const auto f = random_field(kGrid, 2);
    const PolVector s = PolVector::linear(0.6, 0.8);
    const auto once = project(f, s);
    CHECK(max_diff(project(once, s), once) < 1e-14);
}

TEST_CASE("beam splitter is unitary pointwise") {
    const auto a = random_field(kGrid, 4), b = random_field(kGrid, 5);
    const auto [o1, o2] = beam_splitter(a, b);
    const auto ia = intensity(a), ib = intensity(b), i1 = intensity(o1), i2 = intensity(o2);
    double worst = 0.0;
    for (std::size_t n = 0; n < ia.size(); ++n)
        worst = std::max(worst, std::abs(i1[n] + i2[n] - ia[n] - ib[n]) / (ia[n] + ib[n]));
    CHECK(worst < 1e-12);
}

TEST_CASE("beam splitter moves impulses with the same matrix") {
    const auto p = FieldEnvelope::pulse(kGrid, PolVector::e_sigma());
    const auto [o1, o2] = beam_splitter(p, FieldEnvelope(kGrid));
    REQUIRE(o1.impulses().size() == 1);
    REQUIRE(o2.impulses().size() == 1);
    CHECK(std::abs(o1.impulses()[0].amplitude.sigma - 1.0 / std::sqrt(2.0)) < 1e-15);
    CHECK(std::abs(o2.impulses()[0].amplitude.sigma - kI / std::sqrt(2.0)) < 1e-15);
}

TEST_CASE("intensity is invariant under a global phase") {
    const auto f = random_field(kGrid, 6);
    const auto g = std::polar(1.0, 0.731) * f;
    const auto a = intensity(f), b = intensity(g);
    for (std::size_t n = 0; n < a.size(); ++n) CHECK(b[n] == doctest::Approx(a[n]).epsilon(1e-14));
}

TEST_CASE("mirror flips the sign") {
    const auto f = random_field(kGrid, 7);
    CHECK(max_diff(mirror(f) + f, FieldEnvelope(kGrid)) == 0.0);
}

TEST_CASE("delay then gate equals shifted gate then delay") {
    const auto f = random_field(kGrid, 8);
    const double life = 141.0, d = 0.05;
    const double t0 = 30.0, t1 = 90.0;
    const auto a = time_gate(time_delay(f, d), t0, t1, life);
    const auto b = time_delay(time_gate(f, t0 - d * life, t1 - d * life, life), d);
    CHECK(max_diff(a, b) == 0.0);
}

TEST_CASE("delay moves impulses and rejects off-grid delays") {
    const auto p = FieldEnvelope::pulse(kGrid, PolVector::e_pi(), 0.0);
    const auto q = time_delay(p, 0.02);
    REQUIRE(q.impulses().size() == 1);
    CHECK(q.impulses()[0].tau == doctest::Approx(0.02));
    CHECK_THROWS_AS(time_delay(p, 0.0105), ConfigError);
}

TEST_CASE("a gate opening after zero drops the prompt impulse") {
    const auto p = FieldEnvelope::pulse(kGrid, PolVector::e_sigma());
    CHECK(time_gate(p, 7.0, 74.0, 141.0).impulses().empty());
    CHECK(time_gate(p, 0.0, 74.0, 141.0).impulses().size() == 1);
}

TEST_CASE("intensity excludes impulses") {
    const auto p = FieldEnvelope::pulse(kGrid, PolVector::e_sigma());
    for (double v : intensity(p)) CHECK(v == 0.0);
}

TEST_CASE("mismatched grids are rejected") {
    CHECK_THROWS_AS(beam_splitter(FieldEnvelope(kGrid), FieldEnvelope(TimeGrid::standard())), ConfigError);
}

}
