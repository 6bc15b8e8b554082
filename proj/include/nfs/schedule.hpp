#pragma once

#include <vector>

namespace nfs {

/// Interval during which a target's hyperfine field is switched off.
struct SwitchWindow {
    double tau_off = 0.0;
    double tau_on = 0.0;
};

/// Field on/off sequence of one target. The field always returns along its
/// initial direction, so each line simply stops accumulating hyperfine phase
/// while the field is off.
class SwitchSchedule {
public:
    SwitchSchedule() = default;
    /// Throws ConfigError unless windows are ordered, non-overlapping and
    /// have tau_on >= tau_off >= 0.
    explicit SwitchSchedule(std::vector<SwitchWindow> windows);
    static SwitchSchedule single(double tau_off, double tau_on) {
        return SwitchSchedule({{tau_off, tau_on}});
    }

    const std::vector<SwitchWindow> &windows() const { return windows_; }
    bool empty() const { return windows_.empty(); }

    /// Accumulated field-on time theta(tau): tau minus the off time before tau.
    double phase_time(double tau) const;
    bool field_on(double tau) const;
    /// Switch instants strictly inside (a, b), ascending.
    std::vector<double> instants_in(double a, double b) const;
    double total_off_time() const;

private:
    std::vector<SwitchWindow> windows_;
};

}  // namespace nfs
