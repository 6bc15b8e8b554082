#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "nfs/field.hpp"
#include "nfs/nuclear_data.hpp"

namespace nfs::io {

/// Resolved value of one command-line option. Repeatable options keep every
/// occurrence in order.
struct OptionValue {
    std::vector<std::string> values;
    bool repeatable = false;
};

struct RunManifest {
    std::string command;
    std::map<std::string, OptionValue> options;
    IsotopeConstants isotope;
    TimeGrid grid;
    std::map<std::string, double> diagnostics;
    std::map<std::string, std::string> metadata;
    std::string kernel_isa;
    std::vector<std::string> outputs;
    double intensity_scale = 1.0;
    bool converged = true;
};

void write_manifest(const std::filesystem::path &path, const RunManifest &m);
std::string manifest_json(const RunManifest &m);
RunManifest read_manifest(const std::filesystem::path &path);

/// Command line that reproduces the run: command followed by --name=value
/// for every recorded option.
std::vector<std::string> rerun_args(const RunManifest &m);

}  // namespace nfs::io
