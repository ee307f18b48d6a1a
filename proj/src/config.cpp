#include "spdcsim/config.hpp"

#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>

namespace spdcsim {

std::string_view to_string(OutputFormat f) { return f == OutputFormat::Csv ? "csv" : "json"; }

OutputFormat parse_format(std::string_view s) {
    if (s == "csv") return OutputFormat::Csv;
    if (s == "json") return OutputFormat::Json;
    throw ConfigError("unknown output format '" + std::string(s) + "' (expected csv or json)");
}

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

namespace {

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        out.push_back(trim(s.substr(start, pos == std::string_view::npos ? pos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

double parse_double(std::string_view s, std::string_view key) {
    const std::string str(trim(s));
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(str.c_str(), &end);
    if (str.empty() || end != str.c_str() + str.size() || errno == ERANGE || !std::isfinite(v)) {
        throw ConfigError("bad number '" + str + "' for key '" + std::string(key) + "'");
    }
    return v;
}

template <typename Int>
Int parse_int(std::string_view s, std::string_view key) {
    s = trim(s);
    Int v{};
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
        throw ConfigError("bad integer '" + std::string(s) + "' for key '" + std::string(key) + "'");
    }
    return v;
}

std::vector<double> parse_double_list(std::string_view s, std::string_view key) {
    std::vector<double> out;
    for (auto part : split(s, ',')) out.push_back(parse_double(part, key));
    return out;
}

std::string join_doubles(const std::vector<double>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + format_double(v[i]);
    return out;
}

}  // namespace

std::set<int> parse_guide_set(std::string_view text) {
    std::set<int> guides;
    for (auto part : split(text, ',')) {
        if (part.empty()) throw ConfigError("empty entry in guide set '" + std::string(text) + "'");
        const auto dash = part.find('-');
        int lo, hi;
        if (dash == std::string_view::npos) {
            lo = hi = parse_int<int>(part, "guides");
        } else {
            lo = parse_int<int>(part.substr(0, dash), "guides");
            hi = parse_int<int>(part.substr(dash + 1), "guides");
        }
        if (lo < 1 || hi < lo) {
            throw ConfigError("bad guide range '" + std::string(part) + "' (guides count from 1)");
        }
        for (int g = lo; g <= hi; ++g) guides.insert(g - 1);
    }
    return guides;
}

std::string format_guide_set(const std::set<int>& guides) {
    std::string out;
    auto it = guides.begin();
    while (it != guides.end()) {
        const int lo = *it;
        int hi = lo;
        auto next = std::next(it);
        while (next != guides.end() && *next == hi + 1) {
            hi = *next;
            ++next;
        }
        if (!out.empty()) out += ",";
        out += std::to_string(lo + 1);
        if (hi > lo) out += "-" + std::to_string(hi + 1);
        it = next;
    }
    return out;
}

void ExperimentConfig::validate() const {
    constants.validate();
    if (n_guides < 2) throw ConfigError("guides must be >= 2");
    if (m_cut < 2) throw ConfigError("m_cut must be >= 2");
    if (injections.empty()) throw ConfigError("at least one injection set is required");
    for (const auto& set : injections) {
        if (set.empty()) throw ConfigError("empty injection set");
        if (*set.begin() < 0 || *set.rbegin() >= n_guides) {
            throw ConfigError("injection set {" + format_guide_set(set) + "} outside guides 1.." +
                              std::to_string(n_guides));
        }
    }
    if (delta_phi.empty()) throw ConfigError("delta_phi list is empty");
    if (targets.empty()) throw ConfigError("disorder target list is empty");
    if (kappas.empty()) throw ConfigError("kappa list is empty");
    for (double k : kappas) {
        if (!(k >= 0.0 && k <= 1.0)) {
            throw ConfigError("kappa " + format_double(k) + " outside [0, 1]");
        }
    }
    try {
        protocol.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    if (!(window.lo < window.hi) || window.lo < 0.0 || window.hi > constants.zeta_max) {
        throw ConfigError("averaging window must satisfy 0 <= lo < hi <= zeta_max");
    }
    if (output_dir.empty()) throw ConfigError("output directory is empty");
}

std::string serialize_config(const ExperimentConfig& c) {
    std::ostringstream os;
    os << "name = " << c.name << "\n";
    os << "\n[lattice]\n";
    os << "guides = " << c.n_guides << "\n";
    os << "m_cut = " << c.m_cut << "\n";
    os << "coupling0 = " << format_double(c.constants.coupling0) << "\n";
    os << "nonlinearity = " << format_double(c.constants.nonlinearity) << "\n";
    os << "pump_amplitude0 = " << format_double(c.constants.pump_amplitude0) << "\n";
    os << "sample_length = " << format_double(c.constants.sample_length) << "\n";
    os << "\n[grid]\n";
    os << "zeta_max = " << format_double(c.constants.zeta_max) << "\n";
    os << "points = " << c.constants.n_z << "\n";
    os << "window_lo = " << format_double(c.window.lo) << "\n";
    os << "window_hi = " << format_double(c.window.hi) << "\n";
    os << "\n[injection]\n";
    os << "sets = ";
    for (std::size_t i = 0; i < c.injections.size(); ++i)
        os << (i ? "; " : "") << format_guide_set(c.injections[i]);
    os << "\n";
    os << "delta_phi = " << join_doubles(c.delta_phi) << "\n";
    os << "\n[disorder]\n";
    os << "targets = ";
    for (std::size_t i = 0; i < c.targets.size(); ++i) os << (i ? ", " : "") << to_string(c.targets[i]);
    os << "\n";
    os << "kappas = " << join_doubles(c.kappas) << "\n";
    os << "phase_mode = " << to_string(c.phase_mode) << "\n";
    os << "seed = " << c.seed << "\n";
    os << "\n[ensemble]\n";
    os << "min_realizations = " << c.protocol.min_realizations << "\n";
    os << "tolerance = " << format_double(c.protocol.tolerance) << "\n";
    os << "hard_cap = " << c.protocol.hard_cap << "\n";
    os << "monitor = " << to_string(c.protocol.monitor) << "\n";
    os << "\n[output]\n";
    os << "dir = " << c.output_dir << "\n";
    os << "format = " << to_string(c.format) << "\n";
    return os.str();
}

ExperimentConfig parse_config(std::string_view text) {
    ExperimentConfig c;
    using Setter = std::function<void(std::string_view)>;
    const std::map<std::string, Setter> setters = {
        {".name", [&](auto v) { c.name = std::string(v); }},
        {"lattice.guides", [&](auto v) { c.n_guides = parse_int<int>(v, "guides"); }},
        {"lattice.m_cut", [&](auto v) { c.m_cut = parse_int<int>(v, "m_cut"); }},
        {"lattice.coupling0", [&](auto v) { c.constants.coupling0 = parse_double(v, "coupling0"); }},
        {"lattice.nonlinearity",
         [&](auto v) { c.constants.nonlinearity = parse_double(v, "nonlinearity"); }},
        {"lattice.pump_amplitude0",
         [&](auto v) { c.constants.pump_amplitude0 = parse_double(v, "pump_amplitude0"); }},
        {"lattice.sample_length",
         [&](auto v) { c.constants.sample_length = parse_double(v, "sample_length"); }},
        {"grid.zeta_max", [&](auto v) { c.constants.zeta_max = parse_double(v, "zeta_max"); }},
        {"grid.points", [&](auto v) { c.constants.n_z = parse_int<int>(v, "points"); }},
        {"grid.window_lo", [&](auto v) { c.window.lo = parse_double(v, "window_lo"); }},
        {"grid.window_hi", [&](auto v) { c.window.hi = parse_double(v, "window_hi"); }},
        {"injection.sets",
         [&](auto v) {
             c.injections.clear();
             for (auto part : split(v, ';')) c.injections.push_back(parse_guide_set(part));
         }},
        {"injection.delta_phi", [&](auto v) { c.delta_phi = parse_double_list(v, "delta_phi"); }},
        {"disorder.targets",
         [&](auto v) {
             c.targets.clear();
             for (auto part : split(v, ',')) c.targets.push_back(parse_target(part));
         }},
        {"disorder.kappas", [&](auto v) { c.kappas = parse_double_list(v, "kappas"); }},
        {"disorder.phase_mode", [&](auto v) { c.phase_mode = parse_phase_mode(v); }},
        {"disorder.seed", [&](auto v) { c.seed = parse_int<std::uint64_t>(v, "seed"); }},
        {"ensemble.min_realizations",
         [&](auto v) { c.protocol.min_realizations = parse_int<int>(v, "min_realizations"); }},
        {"ensemble.tolerance", [&](auto v) { c.protocol.tolerance = parse_double(v, "tolerance"); }},
        {"ensemble.hard_cap", [&](auto v) { c.protocol.hard_cap = parse_int<int>(v, "hard_cap"); }},
        {"ensemble.monitor", [&](auto v) { c.protocol.monitor = parse_monitor(v); }},
        {"output.dir", [&](auto v) { c.output_dir = std::string(v); }},
        {"output.format", [&](auto v) { c.format = parse_format(v); }},
    };

    std::string section;
    int line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto end = text.find('\n', start);
        std::string_view line =
            text.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start);
        start = end == std::string_view::npos ? text.size() + 1 : end + 1;
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::string where = "line " + std::to_string(line_no) + ": ";
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError(where + "unterminated section header");
            section = std::string(trim(line.substr(1, line.size() - 2)));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ConfigError(where + "expected key = value");
        const std::string key = section + "." + std::string(trim(line.substr(0, eq)));
        const auto it = setters.find(key);
        if (it == setters.end()) throw ConfigError(where + "unknown key '" + key + "'");
        try {
            it->second(trim(line.substr(eq + 1)));
        } catch (const ConfigError& e) {
            throw ConfigError(where + e.what());
        } catch (const std::invalid_argument& e) {
            throw ConfigError(where + e.what());
        }
    }
    c.validate();
    return c;
}

ExperimentConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::vector<double> default_kappa_grid() {
    std::vector<double> k;
    for (int i = 0; i <= 10; ++i) k.push_back(i / 10.0);
    return k;
}

ExperimentConfig preset(std::string_view name) {
    ExperimentConfig c;
    c.name = std::string(name);
    c.output_dir = "out/" + c.name;
    std::set<int> all;
    for (int j = 0; j < c.n_guides; ++j) all.insert(j);
    const int center = c.n_guides / 2;

    if (name == "fig2") {
        c.injections = {{center}, {0}};
        c.targets = {DisorderTarget::Coupling};
        c.kappas = {0.0, 0.2, 0.4, 0.6, 0.8};
    } else if (name == "fig3") {
        c.injections = {{center}, {0}};
        c.targets = {DisorderTarget::Coupling};
        c.kappas = default_kappa_grid();
    } else if (name == "fig4") {
        c.injections = {all};
        c.targets = {DisorderTarget::Coupling, DisorderTarget::Amplitude, DisorderTarget::Phase};
        c.kappas = default_kappa_grid();
    } else if (name == "fig5") {
        c.injections = {all};
        c.delta_phi = {0.0, std::numbers::pi};
        c.targets = {DisorderTarget::Coupling};
        c.kappas = {0.0, 0.25, 0.5, 0.75};
    } else {
        throw ConfigError("unknown preset '" + std::string(name) +
                          "' (expected fig2, fig3, fig4 or fig5)");
    }
    c.validate();
    return c;
}

LatticeRealization scenario_lattice(const ExperimentConfig& config, const std::set<int>& injection,
                                    double delta_phi) {
    auto lat = homogeneous_lattice(config.constants, config.n_guides, injection);
    // guide 1, 3, 5, ... are the 0-based even indices
    const double odd_phase = wrap_phase(delta_phi);
    for (int j = 0; j < config.n_guides; j += 2) lat.pump_phase[j] = odd_phase;
    return lat;
}

}  // namespace spdcsim
