#pragma once

// Flat key = value configuration files with optional sections.
//
//   xi = 7              ->  --xi=7
//   [target1] xi = 7    ->  --xi1=7
//   [target] b = 0      ->  --b=0
//   [isotope] mu_ground ->  --isotope-mu-ground=...
//
// Underscores in keys become dashes. The resulting arguments are placed
// before the command-line arguments, so the command line wins.

#include <filesystem>
#include <string>
#include <vector>

namespace nfs::io {

std::vector<std::string> config_file_args(const std::filesystem::path &path);

}  // namespace nfs::io
