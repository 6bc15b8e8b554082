#pragma once

// Power-series propagation of a field envelope through a resonant target.
//
//   E(xi, tau) = sum_{p >= 0} (-xi)^p / p! E^(p)(tau),
//   E^(p)(tau) = sum_l J_l(tau) int_{-inf}^{tau} J_l^dagger(t) E^(p-1)(t) dt,
//   J_l(tau)   = exp(-i Omega_l theta(tau) - tau/2) j_l,
//
// where theta is the accumulated field-on time of the target's switching
// schedule and j_l the line current.

#include <string>
#include <vector>

#include "nfs/field.hpp"
#include "nfs/nuclear_data.hpp"
#include "nfs/quadrature.hpp"
#include "nfs/schedule.hpp"

namespace nfs {

struct TargetConfig {
    double xi = 1.0;
    HyperfineConfig hyperfine{};
    SwitchSchedule schedule{};
    double f_lm = 0.8;
    int p_max = 1;
    IsotopeConstants isotope = IsotopeConstants::iron57();

    /// The isotope's transition table for this target.
    std::vector<TransitionLine> lines() const;
    void validate() const;
};

struct PropagationOptions {
    QuadratureRule rule = QuadratureRule::exp_cubic;
    /// Convergence criterion on the last retained term.
    double tolerance = 1e-10;
    /// Keep every scaled term (-xi)^p/p! E^(p) in the result.
    bool keep_terms = false;
};

struct PropagationResult {
    /// Transmitted input plus the scattered orders 1..p_max.
    FieldEnvelope field;
    /// L2 norm of each scaled term, index p-1.
    std::vector<double> term_norms;
    /// Last term norm over the norm of the scattered sum.
    double convergence_ratio = 0.0;
    bool converged = true;
    /// Scaled terms, index p-1 (only with keep_terms).
    std::vector<FieldEnvelope> terms;

    std::string convergence_message() const;
};

/// exp(-i Omega_l theta(tau) - tau/2).
cplx current_factor(const TransitionLine &line, double tau, const SwitchSchedule &schedule);

/// Response to a delta(tau - tau_in) pulse of polarization `input`. The first
/// order is evaluated analytically, higher orders by running quadrature. The
/// output keeps the unattenuated prompt pulse as an impulse.
PropagationResult propagate_delta(const TargetConfig &target, const PolVector &input,
                                  const TimeGrid &grid, const PropagationOptions &opts = {},
                                  double tau_in = 0.0);

/// Response to an arbitrary envelope. Impulses in the input take the analytic
/// path; the gridded part is integrated from its first nonzero sample.
PropagationResult propagate_general(const TargetConfig &target, const FieldEnvelope &input,
                                    const PropagationOptions &opts = {});

/// First-order scattered field -xi E^(1) of each coupled line for a delta
/// pulse at tau_in.
struct LineField {
    TransitionLine line;
    FieldEnvelope field;
};
std::vector<LineField> first_order_by_line(const TargetConfig &target, const PolVector &input,
                                           const TimeGrid &grid, double tau_in = 0.0);

}  // namespace nfs
