#pragma once

#include <array>
#include <filesystem>
#include <ostream>
#include <string>
#include <string_view>

#include "nfs/experiments.hpp"

namespace nfs::io {

/// Stable column order of every spectrum file.
inline constexpr std::array<std::string_view, 11> kCsvColumns{
    "t_ns",  "tau",    "I_total",   "I_sigma",   "I_pi",   "I_det1",
    "I_det2", "Re_Esigma", "Im_Esigma", "Re_Epi", "Im_Epi"};

/// Round-trip decimal representation (%.17g).
std::string format_double(double v);

/// Writes one view. Missing traces are left as empty fields. Intensities are
/// multiplied by `intensity_scale` and field amplitudes by its square root.
void write_view_csv(std::ostream &os, const SpectrumView &view, const TimeGrid &grid,
                    double lifetime_ns, double intensity_scale = 1.0);
void write_view_csv(const std::filesystem::path &path, const SpectrumView &view,
                    const TimeGrid &grid, double lifetime_ns, double intensity_scale = 1.0);

/// 1 / (largest intensity sample over all views), or 1 for an all-zero result.
double peak_normalization(const SpectrumResult &result);

}  // namespace nfs::io
