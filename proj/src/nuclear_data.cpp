#include "nfs/nuclear_data.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nfs/coupling.hpp"

namespace nfs {

namespace {

bool is_half_integer(double x) {
    const double twice = 2.0 * x;
    return std::abs(twice - std::round(twice)) < 1e-9;
}

int twice(double x) { return static_cast<int>(std::lround(2.0 * x)); }

double factorial(int n) {
    // n never exceeds a few dozen for nuclear spins
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

double norm3(const Vec3 &v) { return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]); }

}  // namespace

double IsotopeConstants::natural_width_ev() const {
    return PhysicalConstants::hbar_ev_s / (mean_lifetime_ns * 1e-9);
}

void IsotopeConstants::validate() const {
    if (!(mean_lifetime_ns > 0.0)) throw ConfigError("mean_lifetime_ns must be positive");
    if (!(spin_ground > 0.0) || !(spin_excited > 0.0))
        throw ConfigError("nuclear spins must be positive");
    if (!is_half_integer(spin_ground) || !is_half_integer(spin_excited))
        throw ConfigError("nuclear spins must be integer or half-integer");
    if (std::abs(spin_excited - spin_ground) > 1.0 + 1e-12)
        throw ConfigError("spins do not admit a magnetic dipole transition");
}

double zeeman_splitting(double field_tesla, Level level, const IsotopeConstants &c) {
    if (!(field_tesla >= 0.0)) throw ConfigError("magnetic field magnitude must be >= 0");
    const double g = level == Level::ground ? c.g_ground() : c.g_excited();
    return g * PhysicalConstants::nuclear_magneton_ev_per_tesla * field_tesla / c.natural_width_ev() + 0.0;
}

HyperfineConfig HyperfineConfig::from_field(double tesla, const Vec3 &direction,
                                            const IsotopeConstants &c) {
    HyperfineConfig hf;
    hf.field_tesla = tesla;
    hf.direction = direction;
    hf.eps_ground = zeeman_splitting(tesla, Level::ground, c);
    hf.eps_excited = zeeman_splitting(tesla, Level::excited, c);
    hf.validate();
    return hf;
}

HyperfineConfig HyperfineConfig::from_splittings(double eps_ground, double eps_excited,
                                                 const Vec3 &direction) {
    HyperfineConfig hf;
    hf.direction = direction;
    hf.eps_ground = eps_ground;
    hf.eps_excited = eps_excited;
    hf.validate();
    return hf;
}

HyperfineConfig HyperfineConfig::from_omega2(double omega2, const Vec3 &direction,
                                             const IsotopeConstants &c) {
    // omega2 = (eps_g - eps_e)/2 with eps_g/eps_e fixed by g_ground/g_excited
    const double denom = c.g_ground() - c.g_excited();
    if (denom == 0.0) throw ConfigError("isotope has no Delta M = 0 splitting");
    const double scale = 2.0 * omega2 / denom;
    return from_splittings(scale * c.g_ground(), scale * c.g_excited(), direction);
}

HyperfineConfig HyperfineConfig::scaled(double factor) const {
    HyperfineConfig out = *this;
    out.eps_ground *= factor;
    out.eps_excited *= factor;
    if (out.field_tesla) *out.field_tesla *= factor;
    return out;
}

double HyperfineConfig::delta_m0_separation() const { return std::abs(eps_ground - eps_excited); }

void HyperfineConfig::validate() const {
    if (std::abs(norm3(direction) - 1.0) > 1e-12)
        throw ConfigError("field direction must be a unit vector");
    if (field_tesla && !(*field_tesla >= 0.0))
        throw ConfigError("magnetic field magnitude must be >= 0");
    if (!std::isfinite(eps_ground) || !std::isfinite(eps_excited))
        throw ConfigError("Zeeman splittings must be finite");
}

double line_frequency(double m_ground, double m_excited, double eps_ground, double eps_excited) {
    return m_ground * eps_ground - m_excited * eps_excited + 0.0;
}

// Racah formula on doubled quantum numbers.
double clebsch_gordan(double j1, double m1, double j2, double m2, double j, double m) {
    const int J1 = twice(j1), M1 = twice(m1), J2 = twice(j2), M2 = twice(m2), J = twice(j),
              M = twice(m);
    if (M1 + M2 != M) return 0.0;
    if (std::abs(M1) > J1 || std::abs(M2) > J2 || std::abs(M) > J) return 0.0;
    if (J < std::abs(J1 - J2) || J > J1 + J2) return 0.0;
    if ((J1 + M1) % 2 || (J2 + M2) % 2 || (J + M) % 2 || (J1 + J2 + J) % 2) return 0.0;

    const int a = (J1 + J2 - J) / 2, b = (J1 - J2 + J) / 2, c = (-J1 + J2 + J) / 2;
    const double pref = std::sqrt((J + 1) * factorial(a) * factorial(b) * factorial(c) /
                                  factorial((J1 + J2 + J) / 2 + 1));
    const double norm = std::sqrt(factorial((J1 + M1) / 2) * factorial((J1 - M1) / 2) *
                                  factorial((J2 + M2) / 2) * factorial((J2 - M2) / 2) *
                                  factorial((J + M) / 2) * factorial((J - M) / 2));
    double sum = 0.0;
    for (int k = 0;; ++k) {
        const int d1 = a - k, d2 = (J1 - M1) / 2 - k, d3 = (J2 + M2) / 2 - k;
        const int d4 = (J - J2 + M1) / 2 + k, d5 = (J - J1 - M2) / 2 + k;
        if (d1 < 0 || d2 < 0 || d3 < 0) break;
        if (d4 < 0 || d5 < 0) continue;
        const double term =
            1.0 / (factorial(k) * factorial(d1) * factorial(d2) * factorial(d3) * factorial(d4) *
                   factorial(d5));
        sum += (k % 2 ? -term : term);
    }
    return pref * norm * sum;
}

std::vector<TransitionLine> transition_table(const HyperfineConfig &hf, const IsotopeConstants &c,
                                             double f_lm) {
    c.validate();
    hf.validate();
    std::vector<TransitionLine> lines;
    const int Jg = twice(c.spin_ground), Je = twice(c.spin_excited);
    for (int Mg = Jg; Mg >= -Jg; Mg -= 2) {
        for (int Me = Je; Me >= -Je; Me -= 2) {
            const int dm2 = Me - Mg;
            if (std::abs(dm2) > 2) continue;
            TransitionLine line;
            line.m_ground = 0.5 * Mg;
            line.m_excited = 0.5 * Me;
            line.delta_m = dm2 / 2;
            line.omega = line_frequency(line.m_ground, line.m_excited, hf.eps_ground, hf.eps_excited);
            const double cg = clebsch_gordan(c.spin_ground, line.m_ground, 1.0, line.delta_m,
                                             c.spin_excited, line.m_excited);
            line.weight = cg * cg;
            const LineCoupling lc =
                coupling_matrix(line, hf.direction, kBeamDirection, c.spin_excited, f_lm);
            line.current = lc.current;
            line.coupling = lc.matrix;
            lines.push_back(line);
        }
    }
    return lines;
}

int sextet_index(const std::vector<TransitionLine> &lines, double m_ground, double m_excited) {
    std::vector<const TransitionLine *> order;
    for (const auto &l : lines) order.push_back(&l);
    std::stable_sort(order.begin(), order.end(), [](const auto *a, const auto *b) {
        if (a->detuning() != b->detuning()) return a->detuning() < b->detuning();
        if (a->m_ground != b->m_ground) return a->m_ground > b->m_ground;
        return a->m_excited > b->m_excited;
    });
    for (std::size_t i = 0; i < order.size(); ++i) {
        if (order[i]->m_ground == m_ground && order[i]->m_excited == m_excited)
            return static_cast<int>(i) + 1;
    }
    std::ostringstream os;
    os << "no line with m_ground=" << m_ground << " m_excited=" << m_excited;
    throw ConfigError(os.str());
}

double matching_ratio(MatchingCase which, const IsotopeConstants &c) {
    const double a = c.g_ground(), b = c.g_excited();
    const double denom = a - b;
    if (denom == 0.0) throw ConfigError("degenerate moments: matching undefined");
    const double num = which == MatchingCase::case1 ? a + b : a - 3.0 * b;
    const double ratio = std::abs(num / denom);
    if (ratio == 0.0) throw ConfigError("matching ratio vanishes for these moments");
    return ratio;
}

double matching_field(double b1_tesla, MatchingCase which, const IsotopeConstants &c) {
    if (!(b1_tesla > 0.0)) throw ConfigError("matching requires B1 > 0");
    return b1_tesla / matching_ratio(which, c);
}

double matching_field_inverse(double b2_tesla, MatchingCase which, const IsotopeConstants &c) {
    if (!(b2_tesla > 0.0)) throw ConfigError("matching requires B2 > 0");
    return b2_tesla * matching_ratio(which, c);
}

}  // namespace nfs
