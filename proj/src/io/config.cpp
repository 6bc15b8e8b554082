#include "nfs/io/config.hpp"

#include <algorithm>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "nfs/jones.hpp"

namespace nfs::io {

namespace {

std::string dashed(std::string key) {
    std::replace(key.begin(), key.end(), '_', '-');
    return key;
}

std::string flag_name(const std::string &section, const std::string &key) {
    if (section.empty() || section == "target" || section == "run") return dashed(key);
    if (section == "target1" || section == "target2") return dashed(key) + section.back();
    if (section == "isotope") return "isotope-" + dashed(key);
    throw ConfigError("unknown configuration section [" + section + "]");
}

}  // namespace

std::vector<std::string> config_file_args(const std::filesystem::path &path) {
    boost::property_tree::ptree tree;
    try {
        boost::property_tree::ini_parser::read_ini(path.string(), tree);
    } catch (const boost::property_tree::ini_parser_error &e) {
        throw ConfigError("configuration file: " + std::string(e.what()));
    }
    std::vector<std::string> args;
    for (const auto &[name, node] : tree) {
        if (node.empty()) {
            args.push_back("--" + flag_name("", name) + "=" + node.data());
            continue;
        }
        for (const auto &[key, leaf] : node)
            args.push_back("--" + flag_name(name, key) + "=" + leaf.data());
    }
    return args;
}

}  // namespace nfs::io
