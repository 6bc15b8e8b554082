#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "nfs/jones.hpp"

namespace nfs {

/// Fixed physical constants (CODATA). Energies in eV.
struct PhysicalConstants {
    static constexpr double nuclear_magneton_ev_per_tesla = 3.1524512605e-8;
    static constexpr double hbar_ev_s = 6.582119569e-16;
};

/// Mossbauer isotope data. Magnetic moments in nuclear magnetons.
struct IsotopeConstants {
    std::string name = "Fe-57";
    double transition_energy_kev = 14.413;
    double mean_lifetime_ns = 141.0;
    double spin_ground = 0.5;
    double spin_excited = 1.5;
    double mu_ground = 0.09044;
    double mu_excited = -0.1549;

    static IsotopeConstants iron57() { return {}; }

    /// Gamma_0 = hbar / mean lifetime, in eV.
    double natural_width_ev() const;
    /// mu/I per level, in nuclear magnetons.
    double g_ground() const { return mu_ground / spin_ground; }
    double g_excited() const { return mu_excited / spin_excited; }

    void validate() const;
};

using Vec3 = std::array<double, 3>;

namespace axis {
inline constexpr Vec3 x{1.0, 0.0, 0.0};
inline constexpr Vec3 y{0.0, 1.0, 0.0};
inline constexpr Vec3 z{0.0, 0.0, 1.0};
}  // namespace axis

/// Beam propagation direction used throughout (forward scattering along +y).
inline constexpr Vec3 kBeamDirection = axis::y;

enum class Level { ground, excited };

/// Zeeman energy eps = mu * B / I in units of Gamma_0. Sign follows mu.
double zeeman_splitting(double field_tesla, Level level, const IsotopeConstants &c);

/// Magnetic hyperfine field seen by a target. Splittings in units of Gamma_0.
struct HyperfineConfig {
    std::optional<double> field_tesla;
    Vec3 direction = axis::z;
    double eps_ground = 0.0;
    double eps_excited = 0.0;

    static HyperfineConfig from_field(double tesla, const Vec3 &direction,
                                      const IsotopeConstants &c);
    static HyperfineConfig from_splittings(double eps_ground, double eps_excited,
                                           const Vec3 &direction);
    /// Splittings whose Delta M = 0 lines sit at +-omega2, in the isotope's
    /// ground/excited ratio. No field value is attached.
    static HyperfineConfig from_omega2(double omega2, const Vec3 &direction,
                                       const IsotopeConstants &c);

    /// Returns a copy with both splittings multiplied by `factor`.
    HyperfineConfig scaled(double factor) const;

    /// |eps_g - eps_e|: separation of the two Delta M = 0 resonances.
    double delta_m0_separation() const;
    void validate() const;
};

/// One hyperfine transition m_ground -> m_excited.
struct TransitionLine {
    double m_ground = 0.0;
    double m_excited = 0.0;
    int delta_m = 0;
    /// Frequency offset in units of Gamma_0: m_g*eps_g - m_e*eps_e.
    double omega = 0.0;
    /// Squared Clebsch-Gordan coefficient <I_g m_g; 1 dM | I_e m_e>^2.
    double weight = 0.0;
    /// Nuclear current j in the (sigma, pi) basis; coupling = j j^dagger.
    PolVector current{};
    Matrix2c coupling{};

    /// Resonance detuning from the unsplit line in units of Gamma_0.
    /// Convention: detuning = -omega.
    double detuning() const { return -omega; }
    bool couples() const { return current.norm_sq() > 0.0; }
};

/// Omega_l = m_g*eps_g - m_e*eps_e.
double line_frequency(double m_ground, double m_excited, double eps_ground, double eps_excited);

/// Clebsch-Gordan coefficient <j1 m1; j2 m2 | j m>, half-integer arguments allowed.
double clebsch_gordan(double j1, double m1, double j2, double m2, double j, double m);

/// All M1 lines (|dM| <= 1) of the isotope, with couplings for the target geometry.
/// Lines forbidden by geometry carry zero coupling.
std::vector<TransitionLine> transition_table(const HyperfineConfig &hf, const IsotopeConstants &c,
                                             double f_lm);

/// Conventional sextet index 1..N, lines ordered by increasing detuning.
/// Ties (zero field) are broken by (m_ground, m_excited) descending.
int sextet_index(const std::vector<TransitionLine> &lines, double m_ground, double m_excited);

enum class MatchingCase { case1 = 1, case2 = 2 };

/// B1/B2 ratio that maps the target-1 Delta M = 0 lines onto a pair of
/// opposite-circular Faraday lines of target 2.
double matching_ratio(MatchingCase which, const IsotopeConstants &c);
/// Field B2 for target 2 given B1 at target 1.
double matching_field(double b1_tesla, MatchingCase which, const IsotopeConstants &c);
/// Inverse of matching_field.
double matching_field_inverse(double b2_tesla, MatchingCase which, const IsotopeConstants &c);

}  // namespace nfs
