#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <future>
#include <iomanip>
#include <sstream>

#include "nfs/experiments.hpp"
#include "nfs/io/config.hpp"
#include "nfs/io/csv.hpp"
#include "nfs/io/manifest.hpp"
#include "nfs/simd/kernels.hpp"

namespace nfs::cli {

namespace fs = std::filesystem;

namespace {

// ---- value parsing --------------------------------------------------------------

std::string lower_trimmed(std::string s) {
    s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }), s.end());
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

double parse_number(const std::string &text, const std::string &what) {
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception &) {
        throw ConfigError("invalid number '" + text + "' for " + what);
    }
}

/// Accepts plain numbers and multiples of pi: "pi/2", "3pi/2", "0.5*pi", "pi".
double parse_angle(const std::string &raw) {
    const std::string s = lower_trimmed(raw);
    const auto at = s.find("pi");
    if (at == std::string::npos) return parse_number(s, "phase");
    std::string coef = s.substr(0, at);
    std::string rest = s.substr(at + 2);
    if (!coef.empty() && coef.back() == '*') coef.pop_back();
    double value = kPi * (coef.empty() ? 1.0 : parse_number(coef, "phase"));
    if (!rest.empty()) {
        if (rest.front() != '/') throw ConfigError("invalid phase '" + raw + "'");
        value /= parse_number(rest.substr(1), "phase");
    }
    return value;
}

std::pair<double, double> parse_pair(const std::string &text, char sep, const std::string &what) {
    const auto at = text.find(sep);
    if (at == std::string::npos) throw ConfigError(what + " expects two values separated by '" + sep + "'");
    return {parse_number(text.substr(0, at), what), parse_number(text.substr(at + 1), what)};
}

PolVector parse_pol(const std::string &raw) {
    const std::string s = lower_trimmed(raw);
    if (s == "sigma") return PolVector::e_sigma();
    if (s == "pi") return PolVector::e_pi();
    if (s == "plus") return PolVector::e_plus();
    if (s == "minus") return PolVector::e_minus();
    const auto [a, b] = parse_pair(s, ',', "--pol");
    return PolVector::linear(a, b);
}

Vec3 parse_dir(const std::string &raw) {
    const std::string s = lower_trimmed(raw);
    if (s == "x") return axis::x;
    if (s == "y") return axis::y;
    if (s == "z") return axis::z;
    throw ConfigError("field direction must be x, y or z");
}

// ---- option recording -------------------------------------------------------------

// Binds options and remembers how to print their final values, so the
// manifest can reproduce the run with every default materialized.
class Recorder {
public:
    explicit Recorder(CLI::App *app) : app_(app) {}

    CLI::Option *number(const std::string &name, double &v, const std::string &desc) {
        entries_.push_back({name, [&v] { return std::vector<std::string>{io::format_double(v)}; }, false});
        return app_->add_option("--" + name, v, desc)->capture_default_str();
    }
    CLI::Option *integer(const std::string &name, int &v, const std::string &desc) {
        entries_.push_back({name, [&v] { return std::vector<std::string>{std::to_string(v)}; }, false});
        return app_->add_option("--" + name, v, desc)->capture_default_str();
    }
    CLI::Option *text(const std::string &name, std::string &v, const std::string &desc,
                      const std::string &short_name = "") {
        entries_.push_back({name, [&v] { return std::vector<std::string>{v}; }, false});
        const std::string flags = short_name.empty() ? "--" + name : short_name + ",--" + name;
        return app_->add_option(flags, v, desc)->capture_default_str();
    }
    CLI::Option *flag(const std::string &name, bool &v, const std::string &desc) {
        entries_.push_back({name, [&v] { return std::vector<std::string>{v ? "true" : "false"}; }, false});
        return app_->add_flag("--" + name, v, desc);
    }
    CLI::Option *list(const std::string &name, std::vector<std::string> &v, const std::string &desc) {
        entries_.push_back({name, [&v] { return v; }, true});
        return app_->add_option("--" + name, v, desc)->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
    }

    std::map<std::string, io::OptionValue> resolved() const {
        std::map<std::string, io::OptionValue> out;
        for (const auto &e : entries_) out[e.name] = {e.get(), e.repeatable};
        return out;
    }

private:
    struct Entry {
        std::string name;
        std::function<std::vector<std::string>()> get;
        bool repeatable;
    };
    CLI::App *app_;
    std::vector<Entry> entries_;
};

struct Common {
    std::string output;
    std::string output_dir;
    std::string suffix;
    double tau_end = TimeGrid::kDefaultEnd;
    double step = TimeGrid::kDefaultStep;
    std::string quadrature = "exp-cubic";
    std::string normalize = "none";
    double flm = 0.8;
    double tolerance = 1e-10;
    IsotopeConstants isotope = IsotopeConstants::iron57();
    // not recorded
    std::string config;
    std::string sweep;
    int jobs = 1;
};

void add_common(CLI::App *sub, Recorder &rec, Common &c, const std::string &default_stem,
                double default_end) {
    c.output = default_stem;
    c.tau_end = default_end;
    const char *env = std::getenv("NFS_OUTPUT_DIR");
    c.output_dir = env && *env ? env : ".";
    rec.text("output", c.output, "Output file stem", "-o");
    rec.text("output-dir", c.output_dir, "Output directory (default: $NFS_OUTPUT_DIR or .)");
    rec.text("suffix", c.suffix, "Appended to the output stem")->group("");
    rec.number("tau-end", c.tau_end, "Grid end in units of the lifetime")->check(CLI::PositiveNumber);
    rec.number("step", c.step, "Grid step in units of the lifetime")->check(CLI::PositiveNumber);
    rec.text("quadrature", c.quadrature, "trapezoid | exp-linear | exp-cubic | exp-quintic")
        ->check(CLI::IsMember({"trapezoid", "exp-linear", "exp-cubic", "exp-quintic"}));
    rec.text("normalize", c.normalize, "none | peak")->check(CLI::IsMember({"none", "peak"}));
    rec.number("flm", c.flm, "Lamb-Mossbauer factor");
    rec.number("tolerance", c.tolerance, "Series convergence tolerance");
    rec.text("isotope-name", c.isotope.name, "Isotope label");
    rec.number("isotope-energy-kev", c.isotope.transition_energy_kev, "Transition energy (keV)");
    rec.number("isotope-lifetime-ns", c.isotope.mean_lifetime_ns, "Mean lifetime (ns)");
    rec.number("isotope-spin-ground", c.isotope.spin_ground, "Ground-state spin");
    rec.number("isotope-spin-excited", c.isotope.spin_excited, "Excited-state spin");
    rec.number("isotope-mu-ground", c.isotope.mu_ground, "Ground-state moment (nuclear magnetons)");
    rec.number("isotope-mu-excited", c.isotope.mu_excited, "Excited-state moment (nuclear magnetons)");
    sub->add_option("--config", c.config, "INI configuration file (command line wins)");
    sub->add_option("--sweep", c.sweep, "KEY=v1,v2,... runs one job per value");
    sub->add_option("--jobs", c.jobs, "Concurrent sweep jobs")->check(CLI::PositiveNumber);
}

PropagationOptions propagation_options(const Common &c) {
    PropagationOptions o;
    o.rule = parse_quadrature(c.quadrature);
    o.tolerance = c.tolerance;
    return o;
}

TargetConfig base_target(const Common &c, double xi, int p_max) {
    TargetConfig t;
    t.xi = xi;
    t.p_max = p_max;
    t.f_lm = c.flm;
    t.isotope = c.isotope;
    return t;
}

std::vector<SwitchWindow> parse_switches(const std::vector<std::string> &items) {
    std::vector<SwitchWindow> w;
    for (const auto &s : items) {
        const auto [off, on] = parse_pair(s, ':', "--switch");
        w.push_back({off, on});
    }
    return w;
}

int write_outputs(const SpectrumResult &r, const std::string &command, const Common &c,
                  const Recorder &rec, std::ostream &out) {
    const fs::path dir(c.output_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw ConfigError("cannot create output directory " + dir.string());
    const std::string stem = c.output + c.suffix;
    const double scale = c.normalize == "peak" ? io::peak_normalization(r) : 1.0;

    io::RunManifest m;
    m.command = command;
    m.options = rec.resolved();
    m.isotope = c.isotope;
    m.grid = r.grid;
    m.diagnostics = r.diagnostics;
    m.metadata = r.metadata;
    m.kernel_isa = std::string(simd::active().name);
    m.intensity_scale = scale;
    m.converged = r.converged;
    for (const auto &v : r.views) {
        const fs::path p = dir / (v.name == "main" ? stem + ".csv" : stem + "_" + v.name + ".csv");
        io::write_view_csv(p, v, r.grid, r.lifetime_ns, scale);
        m.outputs.push_back(p.string());
        out << "wrote " << p.string() << '\n';
    }
    const fs::path mp = dir / (stem + ".json");
    io::write_manifest(mp, m);
    out << "wrote " << mp.string() << '\n';
    for (const auto &[k, v] : r.diagnostics) out << "  " << k << " = " << io::format_double(v) << '\n';
    for (const auto &[k, v] : r.metadata) out << "  " << k << ": " << v << '\n';
    if (!r.converged) {
        out << "series did not converge; raise --pmax or refine --step\n";
        return kExitNotConverged;
    }
    return kExitOk;
}

// ---- sweeps ---------------------------------------------------------------------

struct SweepSpec {
    std::string key;
    std::vector<std::string> values;
};

SweepSpec parse_sweep(const std::string &text) {
    const auto eq = text.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("--sweep expects KEY=v1,v2,...");
    SweepSpec s{text.substr(0, eq), {}};
    std::stringstream ss(text.substr(eq + 1));
    for (std::string v; std::getline(ss, v, ',');)
        if (!v.empty()) s.values.push_back(v);
    if (s.values.empty()) throw ConfigError("--sweep lists no values");
    return s;
}

std::vector<std::string> strip_option(const std::vector<std::string> &args, const std::string &name) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--" + name) {
            ++i;
            continue;
        }
        if (args[i].rfind("--" + name + "=", 0) == 0) continue;
        out.push_back(args[i]);
    }
    return out;
}

int run_sweep(const std::vector<std::string> &args, const std::string &sweep, int jobs,
              std::ostream &out, std::ostream &err) {
    const SweepSpec spec = parse_sweep(sweep);
    const auto base = strip_option(strip_option(args, "sweep"), "jobs");
    std::vector<std::vector<std::string>> runs;
    for (const auto &v : spec.values) {
        auto a = base;
        a.push_back("--" + spec.key + "=" + v);
        a.push_back("--suffix=_" + spec.key + "-" + v);
        runs.push_back(std::move(a));
    }
    struct Outcome {
        int code;
        std::string out, err;
    };
    std::vector<Outcome> outcomes(runs.size());
    const std::size_t width = static_cast<std::size_t>(std::max(1, jobs));
    for (std::size_t first = 0; first < runs.size(); first += width) {
        std::vector<std::future<Outcome>> batch;
        for (std::size_t i = first; i < std::min(runs.size(), first + width); ++i)
            batch.push_back(std::async(std::launch::async, [&runs, i] {
                std::ostringstream o, e;
                const int code = run(runs[i], o, e);
                return Outcome{code, o.str(), e.str()};
            }));
        for (std::size_t i = 0; i < batch.size(); ++i) outcomes[first + i] = batch[i].get();
    }
    int code = kExitOk;
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        out << "[" << spec.key << "=" << spec.values[i] << "]\n" << outcomes[i].out;
        err << outcomes[i].err;
        code = std::max(code, outcomes[i].code);
    }
    return code;
}

// ---- text commands -----------------------------------------------------------------

void print_constants(const IsotopeConstants &c, std::optional<double> field, std::ostream &out) {
    out << std::setprecision(10);
    out << "isotope                 " << c.name << '\n'
        << "transition energy       " << c.transition_energy_kev << " keV\n"
        << "mean lifetime           " << c.mean_lifetime_ns << " ns\n"
        << "natural width Gamma_0   " << c.natural_width_ev() << " eV\n"
        << "spin ground / excited   " << c.spin_ground << " / " << c.spin_excited << '\n'
        << "mu ground / excited     " << c.mu_ground << " / " << c.mu_excited << " mu_N\n"
        << "nuclear magneton        " << PhysicalConstants::nuclear_magneton_ev_per_tesla << " eV/T\n"
        << "hbar                    " << PhysicalConstants::hbar_ev_s << " eV s\n"
        << "eps_g per tesla         " << zeeman_splitting(1.0, Level::ground, c) << " Gamma_0\n"
        << "eps_e per tesla         " << zeeman_splitting(1.0, Level::excited, c) << " Gamma_0\n";
    if (!field) return;
    const auto hf = HyperfineConfig::from_field(*field, axis::z, c);
    out << "B                       " << *field << " T\n"
        << "eps_g / eps_e           " << hf.eps_ground << " / " << hf.eps_excited << " Gamma_0\n";
    out << "line   m_g   m_e   dM  omega[Gamma_0]          CG^2\n";
    const auto lines = transition_table(hf, c, 1.0);
    for (const auto &l : lines)
        out << std::setw(4) << sextet_index(lines, l.m_ground, l.m_excited) << std::setw(6) << l.m_ground
            << std::setw(6) << l.m_excited << std::setw(5) << l.delta_m << std::setw(16) << l.omega
            << std::setw(14) << l.weight << '\n';
}

void print_match(double b1, MatchingCase which, const IsotopeConstants &c, std::ostream &out) {
    const double b2 = matching_field(b1, which, c);
    const auto h1 = HyperfineConfig::from_field(b1, axis::z, c);
    const auto h2 = HyperfineConfig::from_field(b2, kBeamDirection, c);
    out << std::setprecision(8);
    out << "case                    " << static_cast<int>(which) << '\n'
        << "ratio B1/B2             " << matching_ratio(which, c) << '\n'
        << "B1                      " << b1 << " T\n"
        << "B2                      " << b2 << " T\n"
        << "target 1 eps_g / eps_e  " << h1.eps_ground << " / " << h1.eps_excited << " Gamma_0\n"
        << "target 2 eps_g / eps_e  " << h2.eps_ground << " / " << h2.eps_excited << " Gamma_0\n";
    out << "target 1 Delta M = 0 lines:";
    for (const auto &l : transition_table(h1, c, 1.0))
        if (l.couples() && l.delta_m == 0) out << ' ' << l.omega;
    out << "\ntarget 2 Faraday lines:    ";
    for (const auto &l : transition_table(h2, c, 1.0))
        if (l.couples()) out << ' ' << l.omega;
    out << '\n';
}

}  // namespace

int run(std::vector<std::string> args, std::ostream &out, std::ostream &err) {
    try {
        if (!args.empty() && args.front() == "rerun") {
            CLI::App app{"Re-run a manifest"};
            std::string manifest;
            app.add_option("--manifest", manifest, "Manifest written by an earlier run")->required();
            app.allow_extras();
            std::vector<std::string> rev(args.rbegin(), args.rend() - 1);
            try {
                app.parse(rev);
            } catch (const CLI::ParseError &e) {
                const int code = app.exit(e, out, err);
                return code == 0 ? kExitOk : kExitConfig;
            }
            auto replay = io::rerun_args(io::read_manifest(manifest));
            for (const auto &extra : app.remaining()) replay.push_back(extra);
            return run(std::move(replay), out, err);
        }

        // configuration file arguments go first so the command line overrides them
        for (std::size_t i = 1; i < args.size(); ++i) {
            std::string path;
            if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
            else if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
            if (path.empty()) continue;
            const auto extra = io::config_file_args(path);
            args = strip_option(args, "config");
            args.insert(args.begin() + 1, extra.begin(), extra.end());
            break;
        }

        CLI::App app{"Nuclear forward scattering and x-ray quantum eraser simulator", "nfs"};
        app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
        app.require_subcommand(1);
        app.set_version_flag("--version", NFS_VERSION);

        std::function<int()> action;
        std::string command;
        Common common;

        // single ------------------------------------------------------------------
        auto *single = app.add_subcommand("single", "Spectrum behind one target");
        Recorder rec_single(single);
        double s_xi = 1.0;
        int s_pmax = 14;
        std::string s_b, s_omega2, s_eps, s_dir = "z", s_pol = "sigma";
        std::vector<std::string> s_switch;
        Common c_single;
        add_common(single, rec_single, c_single, "single", TimeGrid::kDefaultEnd);
        rec_single.number("xi", s_xi, "Effective thickness")->check(CLI::NonNegativeNumber);
        rec_single.integer("pmax", s_pmax, "Maximum scattering order")->check(CLI::PositiveNumber);
        rec_single.text("b", s_b, "Hyperfine field in tesla");
        rec_single.text("omega2", s_omega2, "Delta M = 0 line offset in Gamma_0 (default 28)");
        rec_single.text("eps", s_eps, "Splittings eps_g,eps_e in Gamma_0");
        rec_single.text("dir", s_dir, "Field direction x | y | z");
        rec_single.text("pol", s_pol, "Incident polarization sigma | pi | plus | minus | a,b");
        rec_single.list("switch", s_switch, "Field-off window tau_off:tau_on (repeatable)");
        single->callback([&] {
            command = "single";
            common = c_single;
            action = [&] {
                TargetConfig t = base_target(c_single, s_xi, s_pmax);
                const Vec3 dir = parse_dir(s_dir);
                if (!s_b.empty()) t.hyperfine = HyperfineConfig::from_field(parse_number(s_b, "--b"), dir, t.isotope);
                else if (!s_eps.empty()) {
                    const auto [g, e] = parse_pair(s_eps, ',', "--eps");
                    t.hyperfine = HyperfineConfig::from_splittings(g, e, dir);
                } else {
                    const double om = s_omega2.empty() ? 28.0 : parse_number(s_omega2, "--omega2");
                    t.hyperfine = HyperfineConfig::from_omega2(om, dir, t.isotope);
                }
                t.schedule = SwitchSchedule(parse_switches(s_switch));
                const auto grid = TimeGrid::uniform(0.0, c_single.tau_end, c_single.step);
                const auto r = run_single_target(t, parse_pol(s_pol), grid, propagation_options(c_single));
                return write_outputs(r, "single", c_single, rec_single, out);
            };
        });

        // scheme1 -----------------------------------------------------------------
        auto *scheme1 = app.add_subcommand("scheme1", "Two collinear targets with a shutter");
        Recorder rec_s1(scheme1);
        Common c_s1;
        double x1 = 7.0, x2 = 7.0, scale_split = 1.0;
        int p1_max = 19, match_case = 2;
        std::string b1, b2, eps1 = "48,-27", eps2 = "28,-16", shutter = "7:74", window_ns, pol1 = "sigma";
        bool parallel = false, allow_mismatch = false;
        add_common(scheme1, rec_s1, c_s1, "scheme1", TimeGrid::kDefaultEnd);
        rec_s1.number("xi1", x1, "Target-1 effective thickness")->check(CLI::NonNegativeNumber);
        rec_s1.number("xi2", x2, "Target-2 effective thickness")->check(CLI::NonNegativeNumber);
        rec_s1.integer("pmax", p1_max, "Maximum scattering order")->check(CLI::PositiveNumber);
        rec_s1.text("b1", b1, "Target-1 field in tesla (overrides --eps1)");
        rec_s1.text("b2", b2, "Target-2 field in tesla (default: matching field)");
        rec_s1.text("eps1", eps1, "Target-1 splittings eps_g,eps_e in Gamma_0");
        rec_s1.text("eps2", eps2, "Target-2 splittings eps_g,eps_e in Gamma_0");
        rec_s1.integer("match-case", match_case, "Matching condition 1 | 2")->check(CLI::IsMember({1, 2}));
        rec_s1.text("shutter", shutter, "Shutter window t0:t1 in ns");
        rec_s1.text("window-ns", window_ns, "Analysis window a:b in ns");
        rec_s1.flag("b2-parallel-z", parallel, "No-marking control: target 2 gets target 1's field");
        rec_s1.number("scale-splitting", scale_split, "Multiply both targets' splittings")
            ->check(CLI::PositiveNumber);
        rec_s1.flag("allow-mismatch", allow_mismatch, "Skip the B2 matching check");
        rec_s1.text("pol", pol1, "Incident polarization");
        scheme1->callback([&] {
            command = "scheme1";
            common = c_s1;
            action = [&] {
                Scheme1Config cfg;
                cfg.target1 = base_target(c_s1, x1, p1_max);
                cfg.target2 = base_target(c_s1, x2, p1_max);
                cfg.matching_case = match_case == 1 ? MatchingCase::case1 : MatchingCase::case2;
                if (!b1.empty()) {
                    const double f1 = parse_number(b1, "--b1");
                    const double f2 = b2.empty() ? matching_field(f1, cfg.matching_case, c_s1.isotope)
                                                 : parse_number(b2, "--b2");
                    cfg.target1.hyperfine = HyperfineConfig::from_field(f1, axis::z, c_s1.isotope);
                    cfg.target2.hyperfine = HyperfineConfig::from_field(f2, kBeamDirection, c_s1.isotope);
                } else {
                    const auto [g1, e1] = parse_pair(eps1, ',', "--eps1");
                    const auto [g2, e2] = parse_pair(eps2, ',', "--eps2");
                    cfg.target1.hyperfine = HyperfineConfig::from_splittings(g1, e1, axis::z);
                    cfg.target2.hyperfine = HyperfineConfig::from_splittings(g2, e2, kBeamDirection);
                }
                std::tie(cfg.shutter_open_ns, cfg.shutter_close_ns) = parse_pair(shutter, ':', "--shutter");
                if (!window_ns.empty()) cfg.window_ns = parse_pair(window_ns, ':', "--window-ns");
                cfg.input = parse_pol(pol1);
                cfg.allow_field_mismatch = allow_mismatch;
                if (scale_split != 1.0) cfg = cfg.scaled(scale_split);
                if (parallel) cfg = cfg.control();
                const auto grid = TimeGrid::uniform(0.0, c_s1.tau_end, c_s1.step);
                const auto r = run_scheme1(cfg, grid, propagation_options(c_s1));
                return write_outputs(r, "scheme1", c_s1, rec_s1, out);
            };
        });

        // scheme2 -----------------------------------------------------------------
        auto *scheme2 = app.add_subcommand("scheme2", "Polarizing interferometer with delay or storage");
        Recorder rec_s2(scheme2);
        Common c_s2;
        double s2_xi = 1.0, s2_omega2 = 28.0;
        int s2_pmax = 14;
        std::string mode = "external", phi = "0", delay, alpha, beta, b_field, tau0 = "auto", window = "quarter";
        bool auto_alpha = false, second_window = false;
        add_common(scheme2, rec_s2, c_s2, "scheme2", 5.0);
        rec_s2.number("xi", s2_xi, "Effective thickness of both targets")->check(CLI::NonNegativeNumber);
        rec_s2.integer("pmax", s2_pmax, "Maximum scattering order")->check(CLI::PositiveNumber);
        rec_s2.number("omega2", s2_omega2, "Delta M = 0 line offset in Gamma_0")->check(CLI::PositiveNumber);
        rec_s2.text("b", b_field, "Hyperfine field in tesla (overrides --omega2)");
        rec_s2.text("mode", mode, "external | storage")->check(CLI::IsMember({"external", "storage"}));
        rec_s2.text("phi", phi, "Relative phase Omega2*delay, e.g. pi/2");
        rec_s2.text("delay", delay, "External delay in units of the lifetime (overrides --phi)");
        rec_s2.flag("auto-alpha", auto_alpha, "Choose alpha, beta so that beta' = alpha");
        rec_s2.text("alpha", alpha, "Incident sigma amplitude");
        rec_s2.text("beta", beta, "Incident pi amplitude");
        rec_s2.text("tau0", tau0, "Storage: switch-off time (auto = pi/(2 Omega2))");
        rec_s2.text("window", window, "Storage: off-window length (quarter = pi/(2 Omega2))");
        rec_s2.flag("second-window", second_window, "Storage: add a second off-window");
        scheme2->callback([&] {
            command = "scheme2";
            common = c_s2;
            action = [&] {
                const IsotopeConstants &iso = c_s2.isotope;
                double omega2 = s2_omega2;
                std::optional<double> tesla;
                if (!b_field.empty()) {
                    tesla = parse_number(b_field, "--b");
                    omega2 = 0.5 * HyperfineConfig::from_field(*tesla, axis::z, iso).delta_m0_separation();
                }
                const double q = kPi / (2.0 * omega2);
                Scheme2Config cfg;
                if (mode == "external") {
                    cfg = Scheme2Config::external(omega2, parse_angle(phi), s2_xi, s2_pmax, false);
                    if (!delay.empty()) cfg.delta_tau = parse_number(delay, "--delay");
                } else {
                    const double t0 = tau0 == "auto" ? q : parse_number(tau0, "--tau0");
                    const double len = window == "quarter" ? q : parse_number(window, "--window");
                    std::vector<SwitchWindow> w{{t0, t0 + len}};
                    if (second_window) w.push_back({t0 + len + 2.0 * q, t0 + 2.0 * len + 2.0 * q});
                    cfg = Scheme2Config::storage(omega2, w, s2_xi, s2_pmax);
                }
                for (auto *t : {&cfg.target1, &cfg.target2}) {
                    t->f_lm = c_s2.flm;
                    t->isotope = iso;
                    if (tesla) t->hyperfine = HyperfineConfig::from_field(*tesla, t->hyperfine.direction, iso);
                    else t->hyperfine = HyperfineConfig::from_omega2(omega2, t->hyperfine.direction, iso);
                }
                if (auto_alpha) std::tie(cfg.alpha, cfg.beta) = alpha_beta_of_delay(cfg.delta_tau);
                if (!alpha.empty()) {
                    cfg.alpha = parse_number(alpha, "--alpha");
                    cfg.beta = beta.empty() ? std::sqrt(std::max(0.0, 1.0 - cfg.alpha * cfg.alpha))
                                            : parse_number(beta, "--beta");
                } else if (!beta.empty()) {
                    cfg.beta = parse_number(beta, "--beta");
                    cfg.alpha = std::sqrt(std::max(0.0, 1.0 - cfg.beta * cfg.beta));
                }
                const auto grid = scheme2_grid(cfg, c_s2.tau_end, c_s2.step);
                const auto r = run_scheme2(cfg, grid, propagation_options(c_s2));
                return write_outputs(r, "scheme2", c_s2, rec_s2, out);
            };
        });

        // constants / match ------------------------------------------------------------
        auto *constants = app.add_subcommand("constants", "Print the isotope constants");
        Recorder rec_const(constants);
        Common c_const;
        add_common(constants, rec_const, c_const, "constants", TimeGrid::kDefaultEnd);
        std::string const_b;
        rec_const.text("b", const_b, "Also print splittings and lines at this field (tesla)");
        constants->callback([&] {
            command = "constants";
            action = [&] {
                std::optional<double> f;
                if (!const_b.empty()) f = parse_number(const_b, "--b");
                c_const.isotope.validate();
                print_constants(c_const.isotope, f, out);
                return kExitOk;
            };
        });

        auto *match = app.add_subcommand("match", "Scheme-1 matching field for target 2");
        Recorder rec_match(match);
        Common c_match;
        add_common(match, rec_match, c_match, "match", TimeGrid::kDefaultEnd);
        double match_b1 = 39.0;
        int match_which = 2;
        rec_match.number("b1", match_b1, "Target-1 field in tesla");
        rec_match.integer("case", match_which, "Matching condition 1 | 2")->check(CLI::IsMember({1, 2}));
        match->callback([&] {
            command = "match";
            action = [&] {
                c_match.isotope.validate();
                print_match(match_b1, match_which == 1 ? MatchingCase::case1 : MatchingCase::case2,
                            c_match.isotope, out);
                return kExitOk;
            };
        });

        try {
            std::vector<std::string> rev(args.rbegin(), args.rend());
            app.parse(rev);
        } catch (const CLI::ParseError &e) {
            const int code = app.exit(e, out, err);
            return code == 0 ? kExitOk : kExitConfig;
        }
        if (!common.sweep.empty()) return run_sweep(args, common.sweep, common.jobs, out, err);
        return action ? action() : kExitConfig;
    } catch (const ConfigError &e) {
        err << "configuration error: " << e.what() << '\n';
        return kExitConfig;
    }
}

}  // namespace nfs::cli
