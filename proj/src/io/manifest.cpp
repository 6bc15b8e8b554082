#include "nfs/io/manifest.hpp"

#include <cmath>
#include <fstream>
#include <json.hpp>

#include "nfs/jones.hpp"

namespace nfs::io {

namespace {

using nlohmann::json;

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

std::string manifest_json(const RunManifest &m) {
    json j;
    j["tool"] = "nfs";
    j["version"] = NFS_VERSION;
    j["command"] = m.command;
    json opts = json::object();
    for (const auto &[name, v] : m.options)
        opts[name] = v.repeatable ? json(v.values) : json(v.values.empty() ? "" : v.values.front());
    j["options"] = opts;
    j["constants"] = {
        {"isotope", m.isotope.name},
        {"transition_energy_kev", m.isotope.transition_energy_kev},
        {"mean_lifetime_ns", m.isotope.mean_lifetime_ns},
        {"spin_ground", m.isotope.spin_ground},
        {"spin_excited", m.isotope.spin_excited},
        {"mu_ground", m.isotope.mu_ground},
        {"mu_excited", m.isotope.mu_excited},
        {"natural_width_ev", m.isotope.natural_width_ev()},
        {"nuclear_magneton_ev_per_tesla", PhysicalConstants::nuclear_magneton_ev_per_tesla},
        {"hbar_ev_s", PhysicalConstants::hbar_ev_s},
    };
    j["grid"] = {{"tau_start", m.grid.tau_start},
                 {"step", m.grid.step},
                 {"samples", m.grid.samples},
                 {"tau_end", m.grid.tau_end()}};
    json diag = json::object();
    for (const auto &[k, v] : m.diagnostics) diag[k] = number_or_null(v);
    j["diagnostics"] = diag;
    j["metadata"] = m.metadata;
    j["kernel_isa"] = m.kernel_isa;
    j["outputs"] = m.outputs;
    j["intensity_scale"] = m.intensity_scale;
    j["converged"] = m.converged;
    return j.dump(2) + "\n";
}

void write_manifest(const std::filesystem::path &path, const RunManifest &m) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw ConfigError("cannot open " + path.string() + " for writing");
    os << manifest_json(m);
}

RunManifest read_manifest(const std::filesystem::path &path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot read manifest " + path.string());
    json j;
    try {
        j = json::parse(is);
    } catch (const json::exception &e) {
        throw ConfigError("manifest " + path.string() + ": " + e.what());
    }
    RunManifest m;
    if (!j.contains("command") || !j.contains("options")) throw ConfigError("manifest lacks command/options");
    m.command = j.at("command").get<std::string>();
    for (const auto &[name, v] : j.at("options").items()) {
        OptionValue ov;
        if (v.is_array()) {
            ov.repeatable = true;
            ov.values = v.get<std::vector<std::string>>();
        } else {
            ov.values = {v.get<std::string>()};
        }
        m.options[name] = ov;
    }
    if (j.contains("constants")) {
        const auto &c = j.at("constants");
        m.isotope.name = c.value("isotope", m.isotope.name);
        m.isotope.transition_energy_kev = c.value("transition_energy_kev", m.isotope.transition_energy_kev);
        m.isotope.mean_lifetime_ns = c.value("mean_lifetime_ns", m.isotope.mean_lifetime_ns);
        m.isotope.spin_ground = c.value("spin_ground", m.isotope.spin_ground);
        m.isotope.spin_excited = c.value("spin_excited", m.isotope.spin_excited);
        m.isotope.mu_ground = c.value("mu_ground", m.isotope.mu_ground);
        m.isotope.mu_excited = c.value("mu_excited", m.isotope.mu_excited);
    }
    if (j.contains("grid")) {
        const auto &g = j.at("grid");
        m.grid.tau_start = g.value("tau_start", 0.0);
        m.grid.step = g.value("step", m.grid.step);
        m.grid.samples = g.value("samples", std::size_t{0});
    }
    if (j.contains("diagnostics"))
        for (const auto &[k, v] : j.at("diagnostics").items())
            m.diagnostics[k] = v.is_number() ? v.get<double>() : std::nan("");
    if (j.contains("metadata")) m.metadata = j.at("metadata").get<std::map<std::string, std::string>>();
    m.kernel_isa = j.value("kernel_isa", std::string{});
    if (j.contains("outputs")) m.outputs = j.at("outputs").get<std::vector<std::string>>();
    m.intensity_scale = j.value("intensity_scale", 1.0);
    m.converged = j.value("converged", true);
    return m;
}

std::vector<std::string> rerun_args(const RunManifest &m) {
    std::vector<std::string> args{m.command};
    for (const auto &[name, v] : m.options) {
        if (!v.repeatable && (v.values.empty() || v.values.front().empty())) continue;
        for (const auto &value : v.values) args.push_back("--" + name + "=" + value);
    }
    return args;
}

}  // namespace nfs::io
