#include "nfs/io/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

namespace nfs::io {

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_view_csv(std::ostream &os, const SpectrumView &view, const TimeGrid &grid,
                    double lifetime_ns, double intensity_scale) {
    const double amp_scale = std::sqrt(intensity_scale);
    for (std::size_t c = 0; c < kCsvColumns.size(); ++c) os << (c ? "," : "") << kCsvColumns[c];
    os << '\n';
    auto trace = [&](const char *key) -> const std::vector<double> * {
        auto it = view.intensities.find(key);
        if (it == view.intensities.end()) return nullptr;
        if (it->second.size() != grid.samples) throw ConfigError("trace length does not match grid");
        return &it->second;
    };
    const std::vector<double> *cols[] = {trace("total"), trace("sigma"), trace("pi"), trace("det1"),
                                         trace("det2")};
    const FieldEnvelope *field = view.field ? &*view.field : nullptr;
    if (field && field->size() != grid.samples) throw ConfigError("field length does not match grid");
    for (std::size_t n = 0; n < grid.samples; ++n) {
        const double tau = grid.tau(n);
        os << format_double(tau * lifetime_ns) << ',' << format_double(tau);
        for (const auto *col : cols) {
            os << ',';
            if (col) os << format_double((*col)[n] * intensity_scale);
        }
        if (field) {
            const cplx s = field->sigma()[n] * amp_scale;
            const cplx p = field->pi()[n] * amp_scale;
            os << ',' << format_double(s.real()) << ',' << format_double(s.imag()) << ','
               << format_double(p.real()) << ',' << format_double(p.imag());
        } else {
            os << ",,,,";
        }
        os << '\n';
    }
}

void write_view_csv(const std::filesystem::path &path, const SpectrumView &view,
                    const TimeGrid &grid, double lifetime_ns, double intensity_scale) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw ConfigError("cannot open " + path.string() + " for writing");
    write_view_csv(os, view, grid, lifetime_ns, intensity_scale);
    if (!os) throw ConfigError("failed writing " + path.string());
}

double peak_normalization(const SpectrumResult &result) {
    double peak = 0.0;
    for (const auto &v : result.views)
        for (const auto &[key, trace] : v.intensities)
            for (double x : trace) peak = std::max(peak, x);
    return peak > 0.0 ? 1.0 / peak : 1.0;
}

}  // namespace nfs::io
