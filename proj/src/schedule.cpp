#include "nfs/schedule.hpp"

#include <algorithm>
#include <cmath>

#include "nfs/jones.hpp"

namespace nfs {

SwitchSchedule::SwitchSchedule(std::vector<SwitchWindow> windows) : windows_(std::move(windows)) {
    double previous_on = -1.0;
    for (const auto &w : windows_) {
        if (!(w.tau_off >= 0.0)) throw ConfigError("switch-off time must be >= 0");
        if (!(w.tau_on >= w.tau_off)) throw ConfigError("switch-on time must not precede switch-off");
        if (!(w.tau_off > previous_on) && previous_on >= 0.0)
            throw ConfigError("switching windows must be ordered and non-overlapping");
        previous_on = w.tau_on;
    }
}

double SwitchSchedule::phase_time(double tau) const {
    double theta = tau;
    for (const auto &w : windows_) {
        if (tau <= w.tau_off) break;
        theta -= std::min(tau, w.tau_on) - w.tau_off;
    }
    return theta;
}

bool SwitchSchedule::field_on(double tau) const {
    for (const auto &w : windows_)
        if (tau > w.tau_off && tau < w.tau_on) return false;
    return true;
}

std::vector<double> SwitchSchedule::instants_in(double a, double b) const {
    const double tol = 1e-9 * std::max(b - a, 0.0);
    std::vector<double> out;
    for (const auto &w : windows_) {
        for (double t : {w.tau_off, w.tau_on})
            if (std::isfinite(t) && t > a + tol && t < b - tol) out.push_back(t);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

double SwitchSchedule::total_off_time() const {
    double total = 0.0;
    for (const auto &w : windows_) total += w.tau_on - w.tau_off;
    return total;
}

}  // namespace nfs
