#include "spdcsim/output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace spdcsim {
namespace {

void write_json_impl(std::ostream& os, const Json& v, int indent) {
    const std::string pad(static_cast<std::size_t>(indent + 2), ' ');
    const std::string close(static_cast<std::size_t>(indent), ' ');
    switch (v.type()) {
        case Json::value_t::object: {
            if (v.empty()) {
                os << "{}";
                return;
            }
            os << "{\n";
            bool first = true;
            for (auto it = v.begin(); it != v.end(); ++it) {
                if (!first) os << ",\n";
                first = false;
                os << pad << Json(it.key()).dump() << ": ";
                write_json_impl(os, it.value(), indent + 2);
            }
            os << "\n" << close << "}";
            return;
        }
        case Json::value_t::array: {
            const bool flat = std::none_of(v.begin(), v.end(), [](const Json& e) {
                return e.is_object() || e.is_array();
            });
            if (flat) {
                os << "[";
                for (std::size_t i = 0; i < v.size(); ++i) {
                    if (i) os << ", ";
                    write_json_impl(os, v[i], indent);
                }
                os << "]";
                return;
            }
            os << "[\n";
            for (std::size_t i = 0; i < v.size(); ++i) {
                if (i) os << ",\n";
                os << pad;
                write_json_impl(os, v[i], indent + 2);
            }
            os << "\n" << close << "]";
            return;
        }
        case Json::value_t::number_float: {
            const double x = v.get<double>();
            os << (std::isfinite(x) ? format_double(x) : "null");
            return;
        }
        default:
            os << v.dump();
    }
}

std::string kappa_label(double k) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", k);
    return buf;
}

Json optional_series(std::span<const std::optional<double>> s) {
    Json out = Json::array();
    for (const auto& x : s) out.push_back(x ? Json(*x) : Json(nullptr));
    return out;
}

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write '" + path.string() + "'");
    return os;
}

Json scenario_header(const Scenario& s) {
    Json j;
    j["label"] = scenario_label(s);
    j["injection"] = format_guide_set(s.injection);
    j["delta_phi"] = s.delta_phi;
    j["target"] = std::string(to_string(s.target));
    return j;
}

}  // namespace

std::string scenario_label(const Scenario& s) {
    std::string inj = format_guide_set(s.injection);
    for (char& c : inj)
        if (c == ',') c = '_';
    return "inject-" + inj + "_dphi-" + kappa_label(s.delta_phi) + "_" +
           std::string(to_string(s.target));
}

void write_json(std::ostream& os, const Json& value) {
    write_json_impl(os, value, 0);
    os << "\n";
}

std::string config_comment(const ExperimentConfig& config) {
    std::istringstream in(serialize_config(config));
    std::string out, line;
    while (std::getline(in, line)) out += line.empty() ? "#\n" : "# " + line + "\n";
    return out;
}

void write_heatmap_csv(std::ostream& os, const ExperimentConfig& config,
                       std::span<const double> zeta,
                       std::span<const std::optional<std::vector<double>>> n) {
    os << config_comment(config);
    os << "zeta,guide,n\n";
    for (std::size_t k = 0; k < zeta.size(); ++k) {
        for (int j = 0; j < config.n_guides; ++j) {
            os << format_double(zeta[k]) << ',' << (j + 1) << ','
               << (n[k] ? format_double((*n[k])[j]) : std::string("nan")) << '\n';
        }
    }
}

void write_curve_csv(std::ostream& os, const ExperimentConfig& config,
                     std::span<const EnsembleResult> results) {
    os << config_comment(config);
    os << "kappa,quantity,mean,stderr,n_realizations,converged\n";
    for (const auto& r : results) {
        for (const auto& [name, value] : {std::pair{"sigma_bar", r.sigma_bar}, {"pr_bar", r.pr_bar}}) {
            os << format_double(r.kappa) << ',' << name << ',' << format_double(value.mean) << ','
               << format_double(value.std_error) << ',' << r.n_realizations << ','
               << (r.converged ? "true" : "false") << '\n';
        }
    }
}

Json matrix_json(const Eigen::MatrixXd& m) {
    Json rows = Json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        Json row = Json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

Json gamma_json(const EnsembleResult& result, double delta_phi) {
    Json j;
    j["kappa"] = result.kappa;
    j["delta_phi"] = delta_phi;
    j["n_realizations"] = result.n_realizations;
    j["gamma"] = matrix_json(result.mean_gamma);
    return j;
}

Json ensemble_json(const EnsembleResult& r, const Scenario& scenario) {
    Json j;
    j["kappa"] = r.kappa;
    j["delta_phi"] = scenario.delta_phi;
    j["target"] = std::string(to_string(r.target));
    j["seed"] = r.master_seed;
    j["monitor"] = std::string(to_string(r.monitor));
    j["n_realizations"] = r.n_realizations;
    j["converged"] = r.converged;
    j["sigma_bar"] = {{"mean", r.sigma_bar.mean}, {"stderr", r.sigma_bar.std_error}};
    j["pr_bar"] = {{"mean", r.pr_bar.mean}, {"stderr", r.pr_bar.std_error}};
    j["max_norm_drift"] = r.max_norm_drift;
    j["max_top_level_population"] = r.max_top_level_population;
    j["gamma"] = matrix_json(r.mean_gamma);
    Json trace;
    trace["zeta"] = r.mean_trace.zeta;
    trace["sigma"] = optional_series(r.mean_trace.sigma);
    trace["pr"] = optional_series(r.mean_trace.pr);
    Json n = Json::array();
    for (const auto& nk : r.mean_trace.n) n.push_back(nk ? Json(*nk) : Json(nullptr));
    trace["n"] = std::move(n);
    j["mean_trace"] = std::move(trace);
    return j;
}

std::vector<std::string> write_sweep_outputs(const ExperimentConfig& config,
                                             std::span<const ScenarioResult> results) {
    namespace fs = std::filesystem;
    const fs::path dir(config.output_dir);
    fs::create_directories(dir);
    std::vector<std::string> written;

    if (config.format == OutputFormat::Json) {
        Json doc;
        doc["config"] = serialize_config(config);
        doc["seed"] = config.seed;
        Json scenarios = Json::array();
        for (const auto& sr : results) {
            Json s = scenario_header(sr.scenario);
            Json ens = Json::array();
            for (const auto& r : sr.per_kappa) ens.push_back(ensemble_json(r, sr.scenario));
            s["ensembles"] = std::move(ens);
            scenarios.push_back(std::move(s));
        }
        doc["scenarios"] = std::move(scenarios);
        const auto path = dir / "results.json";
        auto os = open_output(path);
        write_json(os, doc);
        written.push_back(path.string());
        return written;
    }

    for (const auto& sr : results) {
        const std::string label = scenario_label(sr.scenario);
        {
            const auto path = dir / ("curve_" + label + ".csv");
            auto os = open_output(path);
            write_curve_csv(os, config, sr.per_kappa);
            written.push_back(path.string());
        }
        for (const auto& r : sr.per_kappa) {
            const auto path = dir / ("heatmap_" + label + "_k" + kappa_label(r.kappa) + ".csv");
            auto os = open_output(path);
            write_heatmap_csv(os, config, r.mean_trace.zeta, r.mean_trace.n);
            written.push_back(path.string());
        }
        {
            Json doc;
            doc["config"] = serialize_config(config);
            doc["seed"] = config.seed;
            doc["scenario"] = scenario_header(sr.scenario);
            Json g = Json::array();
            for (const auto& r : sr.per_kappa) g.push_back(gamma_json(r, sr.scenario.delta_phi));
            doc["gamma"] = std::move(g);
            const auto path = dir / ("gamma_" + label + ".json");
            auto os = open_output(path);
            write_json(os, doc);
            written.push_back(path.string());
        }
    }
    return written;
}

std::vector<std::string> write_run_outputs(const ExperimentConfig& config, const Scenario& scenario,
                                           double kappa, std::uint64_t index,
                                           const RealizationOutcome& outcome) {
    namespace fs = std::filesystem;
    const fs::path dir(config.output_dir);
    fs::create_directories(dir);
    const std::string label =
        "run_" + scenario_label(scenario) + "_k" + kappa_label(kappa) + "_r" + std::to_string(index);
    const auto& t = outcome.trace;
    std::vector<std::string> written;

    if (config.format == OutputFormat::Json) {
        Json doc;
        doc["config"] = serialize_config(config);
        doc["seed"] = config.seed;
        doc["scenario"] = scenario_header(scenario);
        doc["kappa"] = kappa;
        doc["realization"] = index;
        doc["sigma_bar"] = outcome.sigma_bar;
        doc["pr_bar"] = outcome.pr_bar;
        doc["norm_drift"] = outcome.norm_drift;
        doc["top_level_population"] = outcome.top_level_population;
        doc["zeta"] = t.zeta;
        doc["total_photons"] = t.total_photons;
        doc["sigma"] = optional_series(t.sigma);
        doc["pr"] = optional_series(t.pr);
        Json n = Json::array();
        for (const auto& nk : t.n) n.push_back(nk ? Json(*nk) : Json(nullptr));
        doc["n"] = std::move(n);
        doc["delta_phi"] = scenario.delta_phi;
        doc["gamma"] = matrix_json(t.gamma_final);
        const auto path = dir / (label + ".json");
        auto os = open_output(path);
        write_json(os, doc);
        written.push_back(path.string());
        return written;
    }

    {
        const auto path = dir / (label + "_trace.csv");
        auto os = open_output(path);
        os << config_comment(config);
        os << "# realization = " << index << "\n# kappa = " << format_double(kappa) << "\n";
        os << "zeta,total_photons,sigma,pr\n";
        for (std::size_t k = 0; k < t.zeta.size(); ++k) {
            os << format_double(t.zeta[k]) << ',' << format_double(t.total_photons[k]) << ','
               << (t.sigma[k] ? format_double(*t.sigma[k]) : "nan") << ','
               << (t.pr[k] ? format_double(*t.pr[k]) : "nan") << '\n';
        }
        written.push_back(path.string());
    }
    {
        const auto path = dir / (label + "_heatmap.csv");
        auto os = open_output(path);
        write_heatmap_csv(os, config, t.zeta, t.n);
        written.push_back(path.string());
    }
    {
        Json doc;
        doc["config"] = serialize_config(config);
        doc["seed"] = config.seed;
        doc["realization"] = index;
        doc["kappa"] = kappa;
        doc["delta_phi"] = scenario.delta_phi;
        doc["gamma"] = matrix_json(t.gamma_final);
        const auto path = dir / (label + "_gamma.json");
        auto os = open_output(path);
        write_json(os, doc);
        written.push_back(path.string());
    }
    return written;
}

}  // namespace spdcsim
