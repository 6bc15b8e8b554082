#include <algorithm>
#include <cmath>
#include <sstream>

#include "nfs/field.hpp"
#include "nfs/jones.hpp"
#include "nfs/simd/kernels.hpp"

namespace nfs {

namespace {
constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr double kImpulseTimeTol = 1e-12;
}  // namespace

// ---- Jones algebra ---------------------------------------------------------

PolVector PolVector::e_plus() { return {kInvSqrt2, cplx(0.0, kInvSqrt2)}; }
PolVector PolVector::e_minus() { return {kInvSqrt2, cplx(0.0, -kInvSqrt2)}; }

CircularComponents to_circular(const PolVector &v) {
    return {dot(PolVector::e_plus(), v), dot(PolVector::e_minus(), v)};
}

PolVector from_circular(const CircularComponents &c) {
    return c.plus * PolVector::e_plus() + c.minus * PolVector::e_minus();
}

Matrix2c Matrix2c::outer(const PolVector &u, const PolVector &v) {
    return {{u.sigma * std::conj(v.sigma), u.sigma * std::conj(v.pi), u.pi * std::conj(v.sigma),
             u.pi * std::conj(v.pi)}};
}

double Matrix2c::max_abs() const {
    double m_max = 0.0;
    for (const auto &x : m) m_max = std::max(m_max, std::abs(x));
    return m_max;
}

std::string to_string(const PolVector &v) {
    std::ostringstream os;
    os << "(" << v.sigma.real() << (v.sigma.imag() < 0 ? "-" : "+") << std::abs(v.sigma.imag())
       << "i, " << v.pi.real() << (v.pi.imag() < 0 ? "-" : "+") << std::abs(v.pi.imag()) << "i)";
    return os.str();
}

// ---- TimeGrid ---------------------------------------------------------------

TimeGrid TimeGrid::uniform(double tau_start, double tau_end, double step) {
    if (!(step > 0.0)) throw ConfigError("grid step must be positive");
    if (!(tau_end >= tau_start)) throw ConfigError("grid end must not precede its start");
    TimeGrid g;
    g.tau_start = tau_start;
    g.step = step;
    g.samples = static_cast<std::size_t>(std::floor((tau_end - tau_start) / step + 1e-9)) + 1;
    return g;
}

TimeGrid TimeGrid::aligned(double tau_end, double nominal_step, double quantum) {
    if (!(nominal_step > 0.0)) throw ConfigError("grid step must be positive");
    if (quantum <= 0.0) return uniform(0.0, tau_end, nominal_step);
    const double k = std::ceil(quantum / nominal_step - 1e-12);
    return uniform(0.0, tau_end, quantum / k);
}

std::size_t TimeGrid::nearest_index(double tau) const {
    if (samples == 0) return 0;
    const double r = std::round((tau - tau_start) / step);
    if (r <= 0.0) return 0;
    return std::min(static_cast<std::size_t>(r), samples - 1);
}

std::size_t TimeGrid::steps_for(double interval) const {
    if (!(interval >= 0.0)) throw ConfigError("time interval must be >= 0");
    const double r = interval / step;
    const double k = std::round(r);
    if (std::abs(r - k) > 1e-9 * std::max(1.0, r)) {
        std::ostringstream os;
        os.precision(10);
        os << "interval " << interval << " is not a multiple of the grid step " << step
           << "; build the grid with TimeGrid::aligned(end, step, " << interval << ")";
        throw ConfigError(os.str());
    }
    return static_cast<std::size_t>(k);
}

bool TimeGrid::operator==(const TimeGrid &o) const {
    auto close = [](double a, double b) {
        return std::abs(a - b) <= 1e-14 * std::max({1.0, std::abs(a), std::abs(b)});
    };
    return samples == o.samples && close(tau_start, o.tau_start) && close(step, o.step);
}

void TimeGrid::validate() const {
    if (!(step > 0.0)) throw ConfigError("grid step must be positive");
    if (samples == 0) throw ConfigError("grid has no samples");
}

// ---- FieldEnvelope ----------------------------------------------------------

FieldEnvelope::FieldEnvelope(TimeGrid grid)
    : grid_(grid), sigma_(grid.samples, cplx{}), pi_(grid.samples, cplx{}) {}

FieldEnvelope FieldEnvelope::pulse(TimeGrid grid, const PolVector &pol, double tau) {
    FieldEnvelope f(grid);
    f.add_impulse({pol, tau});
    return f;
}

void FieldEnvelope::add_impulse(const Impulse &imp) {
    for (auto &existing : impulses_) {
        if (std::abs(existing.tau - imp.tau) <= kImpulseTimeTol) {
            existing.amplitude += imp.amplitude;
            return;
        }
    }
    impulses_.push_back(imp);
    std::sort(impulses_.begin(), impulses_.end(),
              [](const Impulse &a, const Impulse &b) { return a.tau < b.tau; });
}

FieldEnvelope FieldEnvelope::gridded() const {
    FieldEnvelope out = *this;
    out.impulses_.clear();
    return out;
}

double FieldEnvelope::norm_sq() const {
    const auto &k = simd::active();
    return k.norm_sq(sigma_.data(), sigma_.size()) + k.norm_sq(pi_.data(), pi_.size());
}

FieldEnvelope &FieldEnvelope::operator+=(const FieldEnvelope &o) {
    require_same_grid(*this, o);
    const auto &k = simd::active();
    k.axpy(1.0, o.sigma_.data(), sigma_.data(), sigma_.size());
    k.axpy(1.0, o.pi_.data(), pi_.data(), pi_.size());
    for (const auto &imp : o.impulses_) add_impulse(imp);
    return *this;
}

FieldEnvelope &FieldEnvelope::operator*=(cplx s) {
    for (auto &v : sigma_) v *= s;
    for (auto &v : pi_) v *= s;
    for (auto &imp : impulses_) imp.amplitude = s * imp.amplitude;
    return *this;
}

void require_same_grid(const FieldEnvelope &a, const FieldEnvelope &b) {
    if (!(a.grid() == b.grid())) throw ConfigError("field envelopes live on different time grids");
}

// ---- optical elements --------------------------------------------------------

std::vector<double> intensity(const FieldEnvelope &field) {
    std::vector<double> out(field.size());
    simd::active().intensity2(field.sigma().data(), field.pi().data(), out.data(), out.size());
    return out;
}

std::vector<double> component_intensity(std::span<const cplx> component) {
    std::vector<double> out(component.size());
    for (std::size_t i = 0; i < component.size(); ++i) out[i] = std::norm(component[i]);
    return out;
}

FieldEnvelope project(const FieldEnvelope &field, PolAxis axis) {
    FieldEnvelope out(field.grid());
    if (axis == PolAxis::sigma) {
        std::copy(field.sigma().begin(), field.sigma().end(), out.sigma().begin());
    } else {
        std::copy(field.pi().begin(), field.pi().end(), out.pi().begin());
    }
    for (const auto &imp : field.impulses()) {
        PolVector a = imp.amplitude;
        if (axis == PolAxis::sigma) a.pi = 0.0;
        else a.sigma = 0.0;
        out.add_impulse({a, imp.tau});
    }
    return out;
}

FieldEnvelope project(const FieldEnvelope &field, const PolVector &state) {
    const double n2 = state.norm_sq();
    if (!(n2 > 0.0)) throw ConfigError("projection state must be nonzero");
    const PolVector u = (1.0 / std::sqrt(n2)) * state;
    FieldEnvelope out(field.grid());
    // amplitude c = u^dagger E; out = c u
    std::vector<cplx> c(field.size());
    const auto &k = simd::active();
    k.combine2(std::conj(u.sigma), field.sigma().data(), std::conj(u.pi), field.pi().data(),
               c.data(), c.size());
    k.axpy(u.sigma, c.data(), out.sigma().data(), c.size());
    k.axpy(u.pi, c.data(), out.pi().data(), c.size());
    for (const auto &imp : field.impulses()) out.add_impulse({dot(u, imp.amplitude) * u, imp.tau});
    return out;
}

std::pair<FieldEnvelope, FieldEnvelope> beam_splitter(const FieldEnvelope &a,
                                                      const FieldEnvelope &b) {
    require_same_grid(a, b);
    const cplx t = kInvSqrt2;
    const cplx r = cplx(0.0, kInvSqrt2);
    FieldEnvelope out1(a.grid()), out2(a.grid());
    const auto &k = simd::active();
    const std::size_t n = a.size();
    k.combine2(t, a.sigma().data(), r, b.sigma().data(), out1.sigma().data(), n);
    k.combine2(t, a.pi().data(), r, b.pi().data(), out1.pi().data(), n);
    k.combine2(r, a.sigma().data(), t, b.sigma().data(), out2.sigma().data(), n);
    k.combine2(r, a.pi().data(), t, b.pi().data(), out2.pi().data(), n);
    for (const auto &imp : a.impulses()) {
        out1.add_impulse({t * imp.amplitude, imp.tau});
        out2.add_impulse({r * imp.amplitude, imp.tau});
    }
    for (const auto &imp : b.impulses()) {
        out1.add_impulse({r * imp.amplitude, imp.tau});
        out2.add_impulse({t * imp.amplitude, imp.tau});
    }
    return {std::move(out1), std::move(out2)};
}

FieldEnvelope mirror(const FieldEnvelope &field) { return -1.0 * field; }

FieldEnvelope time_delay(const FieldEnvelope &field, double delta_tau) {
    const std::size_t shift = field.grid().steps_for(delta_tau);
    if (shift == 0) return field;
    FieldEnvelope out(field.grid());
    const std::size_t n = field.size();
    for (std::size_t i = shift; i < n; ++i) {
        out.sigma()[i] = field.sigma()[i - shift];
        out.pi()[i] = field.pi()[i - shift];
    }
    const double exact = static_cast<double>(shift) * field.grid().step;
    for (const auto &imp : field.impulses()) out.add_impulse({imp.amplitude, imp.tau + exact});
    return out;
}

FieldEnvelope time_gate(const FieldEnvelope &field, double t0_ns, double t1_ns,
                        double lifetime_ns) {
    if (!(t0_ns >= 0.0)) throw ConfigError("gate opening time must be >= 0");
    if (!(t1_ns > t0_ns)) throw ConfigError("gate closing time must exceed its opening time");
    if (!(lifetime_ns > 0.0)) throw ConfigError("lifetime must be positive");
    FieldEnvelope out(field.grid());
    const auto &g = field.grid();
    const double tol = 1e-9;
    for (std::size_t i = 0; i < field.size(); ++i) {
        const double t = g.tau(i) * lifetime_ns;
        if (t >= t0_ns - tol && t <= t1_ns + tol) out.set(i, field.at(i));
    }
    if (t0_ns == 0.0) {
        for (const auto &imp : field.impulses()) {
            const double t = imp.tau * lifetime_ns;
            if (t <= t1_ns + tol) out.add_impulse(imp);
        }
    }
    return out;
}

}  // namespace nfs
