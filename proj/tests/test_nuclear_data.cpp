#include <doctest.h>

#include <cmath>

#include "nfs/coupling.hpp"
#include "nfs/nuclear_data.hpp"

using namespace nfs;

namespace {

// eps = mu * mu_N * B / (I * hbar / lifetime), written out by hand.
double hand_splitting(double mu, double spin, double tesla) {
    const double gamma0 = 6.582119569e-16 / 141e-9;
    return mu * 3.1524512605e-8 * tesla / (spin * gamma0);
}

Matrix2c sum_couplings(const std::vector<TransitionLine> &lines) {
    Matrix2c s = Matrix2c::zero();
    for (const auto &l : lines) s += l.coupling;
    return s;
}

}  // namespace

TEST_SUITE("nuclear_data") {

TEST_CASE("natural width of Fe-57") {
    const auto c = IsotopeConstants::iron57();
    CHECK(c.natural_width_ev() == doctest::Approx(4.66817e-9).epsilon(1e-5));
}

TEST_CASE("Zeeman splittings follow mu B / I") {
    const auto c = IsotopeConstants::iron57();
    for (double b : {1.0, 23.0, 33.0, 39.0}) {
        CHECK(zeeman_splitting(b, Level::ground, c) == doctest::Approx(hand_splitting(0.09044, 0.5, b)));
        CHECK(zeeman_splitting(b, Level::excited, c) == doctest::Approx(hand_splitting(-0.1549, 1.5, b)));
    }
    CHECK(zeeman_splitting(39.0, Level::ground, c) == doctest::Approx(48.0).epsilon(1.0 / 48.0));
    CHECK(zeeman_splitting(23.0, Level::excited, c) == doctest::Approx(-16.0).epsilon(0.5 / 16.0));
}

TEST_CASE("zero field gives zero splittings") {
    const auto hf = HyperfineConfig::from_field(0.0, axis::z, IsotopeConstants::iron57());
    CHECK(hf.eps_ground == 0.0);
    CHECK(hf.eps_excited == 0.0);
    for (const auto &l : transition_table(hf, IsotopeConstants::iron57(), 0.8)) CHECK(l.omega == 0.0);
}

TEST_CASE("from_omega2 places the Delta M = 0 lines at +-omega2") {
    const auto c = IsotopeConstants::iron57();
    const auto hf = HyperfineConfig::from_omega2(28.0, axis::z, c);
    CHECK(0.5 * hf.delta_m0_separation() == doctest::Approx(28.0));
    CHECK(hf.eps_ground / hf.eps_excited == doctest::Approx(c.g_ground() / c.g_excited()));
    CHECK_FALSE(hf.field_tesla.has_value());
    for (const auto &l : transition_table(hf, c, 0.8))
        if (l.delta_m == 0) CHECK(std::abs(l.omega) == doctest::Approx(28.0));
}

TEST_CASE("line frequency convention") {
    CHECK(line_frequency(0.5, 1.5, 48.0, -27.0) == doctest::Approx(0.5 * 48.0 + 1.5 * 27.0));
    CHECK(line_frequency(-0.5, -0.5, 48.0, -27.0) == doctest::Approx(-37.5));
    TransitionLine l;
    l.omega = 12.0;
    CHECK(l.detuning() == -12.0);
}

TEST_CASE("Clebsch-Gordan values for 1/2 x 1 -> 3/2") {
    CHECK(clebsch_gordan(0.5, 0.5, 1, 1, 1.5, 1.5) == doctest::Approx(1.0));
    CHECK(clebsch_gordan(0.5, 0.5, 1, 0, 1.5, 0.5) == doctest::Approx(std::sqrt(2.0 / 3.0)));
    CHECK(clebsch_gordan(0.5, 0.5, 1, -1, 1.5, -0.5) == doctest::Approx(std::sqrt(1.0 / 3.0)));
    CHECK(clebsch_gordan(0.5, -0.5, 1, 1, 1.5, 0.5) == doctest::Approx(std::sqrt(1.0 / 3.0)));
    CHECK(clebsch_gordan(0.5, 0.5, 1, 1, 1.5, 0.5) == 0.0);
}

TEST_CASE("six M1 lines with sextet ordering") {
    const auto c = IsotopeConstants::iron57();
    const auto hf = HyperfineConfig::from_field(33.0, axis::z, c);
    const auto lines = transition_table(hf, c, 1.0);
    REQUIRE(lines.size() == 6);
    CHECK(sextet_index(lines, 0.5, 1.5) == 1);
    CHECK(sextet_index(lines, 0.5, 0.5) == 2);
    CHECK(sextet_index(lines, -0.5, -0.5) == 5);
    CHECK(sextet_index(lines, -0.5, -1.5) == 6);
}

TEST_CASE("unsplit couplings sum to f times identity in every geometry") {
    const auto c = IsotopeConstants::iron57();
    for (const Vec3 &dir : {axis::x, axis::y, axis::z}) {
        const auto hf = HyperfineConfig::from_splittings(10.0, -6.0, dir);
        const Matrix2c s = sum_couplings(transition_table(hf, c, 0.8));
        CHECK(std::abs(s(0, 0) - 0.8) < 1e-14);
        CHECK(std::abs(s(1, 1) - 0.8) < 1e-14);
        CHECK(std::abs(s(0, 1)) < 1e-14);
        CHECK(std::abs(s(1, 0)) < 1e-14);
    }
}

TEST_CASE("transverse field: Delta M = 0 lines carry f/2 on sigma") {
    const auto c = IsotopeConstants::iron57();
    const auto lines = transition_table(HyperfineConfig::from_splittings(48.0, -27.0, axis::z), c, 0.8);
    int n = 0;
    for (const auto &l : lines) {
        if (l.delta_m != 0) {
            CHECK(std::abs(l.coupling(0, 0)) < 1e-15);
            continue;
        }
        ++n;
        CHECK(std::abs(l.coupling(0, 0) - 0.4) < 1e-14);
        CHECK(std::abs(l.coupling(1, 1)) < 1e-15);
    }
    CHECK(n == 2);
}

TEST_CASE("field along the beam: only circular Delta M = +-1 lines couple") {
    const auto c = IsotopeConstants::iron57();
    const auto lines = transition_table(HyperfineConfig::from_splittings(28.0, -16.0, axis::y), c, 1.0);
    const PolVector ep = PolVector::e_plus(), em = PolVector::e_minus();
    for (const auto &l : lines) {
        if (l.delta_m == 0) {
            CHECK_FALSE(l.couples());
            continue;
        }
        const double on_plus = std::norm(dot(ep, l.current));
        const double on_minus = std::norm(dot(em, l.current));
        CHECK(std::min(on_plus, on_minus) < 1e-30);
        CHECK(std::max(on_plus, on_minus) == doctest::Approx(l.current.norm_sq()));
    }
}

TEST_CASE("matching ratios from the level g-factors") {
    const auto c = IsotopeConstants::iron57();
    const double gg = c.mu_ground / c.spin_ground, ge = c.mu_excited / c.spin_excited;
    CHECK(matching_ratio(MatchingCase::case2, c) == doctest::Approx((gg - 3 * ge) / (gg - ge)));
    CHECK(matching_ratio(MatchingCase::case1, c) == doctest::Approx((gg + ge) / (gg - ge)));
    CHECK(matching_ratio(MatchingCase::case1, c) == doctest::Approx(0.273).epsilon(0.002));
    const double b2 = matching_field(39.0, MatchingCase::case2, c);
    CHECK(b2 == doctest::Approx(22.6).epsilon(0.5 / 22.6));
    CHECK(matching_field_inverse(b2, MatchingCase::case2, c) == doctest::Approx(39.0));
}

TEST_CASE("matched fields align a target-1 Delta M = 0 line with a target-2 Faraday line") {
    const auto c = IsotopeConstants::iron57();
    for (auto which : {MatchingCase::case1, MatchingCase::case2}) {
        const double b2 = matching_field(39.0, which, c);
        const auto l1 = transition_table(HyperfineConfig::from_field(39.0, axis::z, c), c, 1.0);
        const auto l2 = transition_table(HyperfineConfig::from_field(b2, axis::y, c), c, 1.0);
        for (const auto &a : l1) {
            if (a.delta_m != 0) continue;
            bool hit = false;
            for (const auto &b : l2)
                if (b.couples() && std::abs(a.omega - b.omega) < 1e-9) hit = true;
            CHECK(hit);
        }
    }
}

TEST_CASE("invalid inputs are rejected") {
    auto c = IsotopeConstants::iron57();
    c.mean_lifetime_ns = -1.0;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    CHECK_THROWS_AS(HyperfineConfig::from_field(1.0, Vec3{1.0, 1.0, 0.0}, IsotopeConstants::iron57()).validate(),
                    ConfigError);
}

}
