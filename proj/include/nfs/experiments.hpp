#pragma once

// The single-target spectrum and the two quantum-eraser set-ups.

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nfs/analysis.hpp"
#include "nfs/kernel.hpp"

namespace nfs {

/// Intensity traces observed at one place in a set-up.
///
/// Trace keys: total, sigma, pi, det1, det2.
struct SpectrumView {
    std::string name;
    std::map<std::string, std::vector<double>> intensities;
    std::optional<FieldEnvelope> field;
};

struct SpectrumResult {
    TimeGrid grid;
    double lifetime_ns = 141.0;
    std::vector<SpectrumView> views;
    std::map<std::string, double> diagnostics;
    std::map<std::string, std::string> metadata;
    bool converged = true;

    const SpectrumView &view(const std::string &name) const;
    const std::vector<double> &trace(const std::string &view_name, const std::string &key) const;
};

// ---- single target ---------------------------------------------------------------

SpectrumResult run_single_target(const TargetConfig &target, const PolVector &input,
                                 const TimeGrid &grid, const PropagationOptions &opts = {});

// ---- scheme 1: two collinear targets and a shutter ---------------------------------

struct Scheme1Config {
    TargetConfig target1;
    TargetConfig target2;
    double shutter_open_ns = 7.0;
    double shutter_close_ns = 74.0;
    MatchingCase matching_case = MatchingCase::case2;
    PolVector input = PolVector::e_sigma();
    /// Target-2 field along the beam (marking). When false both targets carry
    /// the same field along z (no-marking control).
    bool faraday = true;
    /// Skip the B2 = matching_field(B1) consistency check.
    bool allow_field_mismatch = false;
    /// Analysis window in ns; defaults to [shutter close + 10 ns, 190 ns].
    std::optional<std::pair<double, double>> window_ns;

    /// Printed parameters: xi = 7, p_max = 19, splittings (48, -27) and (28, -16).
    static Scheme1Config published_defaults();
    /// Target 2 rebuilt as the no-marking control (same field as target 1).
    Scheme1Config control() const;
    /// Both targets' splittings multiplied by `factor`.
    Scheme1Config scaled(double factor) const;
    TimeWindow window() const;
    void validate() const;
};

/// Views: target1 (behind target 1, before the shutter), target2 (behind
/// target 2; sigma and pi are the linear-polarizer projections).
SpectrumResult run_scheme1(const Scheme1Config &cfg, const TimeGrid &grid,
                           const PropagationOptions &opts = {});

// ---- scheme 2: polarizing interferometer ------------------------------------------

enum class DelayMode { external, storage };

struct Scheme2Config {
    TargetConfig target1;
    TargetConfig target2;
    DelayMode mode = DelayMode::external;
    /// External delay line in arm 2 (dimensionless). Zero in storage mode.
    double delta_tau = 0.0;
    double alpha = 0.70710678118654752440;
    double beta = 0.70710678118654752440;
    /// Visibility window; defaults depend on the mode (see window()).
    std::optional<TimeWindow> analysis_window;

    /// External-delay set-up with equal Delta M = 0 splittings +-omega2,
    /// B1 along z and B2 along x, delay phi/omega2.
    static Scheme2Config external(double omega2, double phi, double xi, int p_max, bool auto_alpha);
    /// Storage set-up: target 2 switched off for `windows` (defaults below).
    static Scheme2Config storage(double omega2, std::vector<SwitchWindow> windows, double xi,
                                 int p_max);
    /// First beat minimum tau0 = pi/(2 omega2), off for pi/(2 omega2).
    static std::vector<SwitchWindow> default_storage_windows(double omega2, bool second_window);

    double omega2() const;
    /// External: [2 delta_tau, end]. Storage: [2 tau_on_last, end].
    TimeWindow window(const TimeGrid &grid) const;
    void validate() const;
};

/// Grid on [0, tau_end] whose step divides the configured external delay.
TimeGrid scheme2_grid(const Scheme2Config &cfg, double tau_end, double nominal_step);

/// Views: det1, det2 (each with total, sigma, pi and the field) and main
/// (det1 and det2 intensities).
SpectrumResult run_scheme2(const Scheme2Config &cfg, const TimeGrid &grid,
                           const PropagationOptions &opts = {});

/// Incident polarization that cancels the decay mismatch of a delay:
/// alpha = sqrt(1/(exp(-dt)+1)), beta = sqrt(1/(exp(dt)+1)).
std::pair<double, double> alpha_beta_of_delay(double delta_tau);

struct EquivalenceReport {
    /// max |arg(F_storage / F_external)| over coupled lines and tau > tau_on.
    double max_phase_deviation = 0.0;
    /// max |F_storage - exp(-dt/2) F_external| / max |F_storage|.
    double max_relative_deviation = 0.0;
    /// exp(-dt/2): the beta' -> beta amplitude relation.
    double amplitude_factor = 1.0;
    std::size_t samples_compared = 0;
};

/// Compares target 2's first-order per-line fields in storage mode with the
/// externally delayed static response for tau after the last switch-on.
EquivalenceReport storage_delay_equivalence(const Scheme2Config &external,
                                            const Scheme2Config &storage, const TimeGrid &grid);

}  // namespace nfs
