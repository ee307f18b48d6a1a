#include "spdcsim/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>
#include <string>
#include <thread>

#include "spdcsim/fock.hpp"
#include "spdcsim/generator.hpp"

namespace spdcsim {

std::string_view to_string(MonitoredScalar m) {
    return m == MonitoredScalar::ParticipationRatio ? "pr" : "sigma";
}

MonitoredScalar parse_monitor(std::string_view s) {
    if (s == "pr") return MonitoredScalar::ParticipationRatio;
    if (s == "sigma") return MonitoredScalar::Sigma;
    throw std::invalid_argument("unknown monitored scalar '" + std::string(s) +
                                "' (expected pr or sigma)");
}

void StoppingProtocol::validate() const {
    if (min_realizations < 1) throw std::invalid_argument("min_realizations must be >= 1");
    if (hard_cap < min_realizations) {
        throw std::invalid_argument("hard cap must be >= min_realizations");
    }
    if (!(tolerance > 0.0)) throw std::invalid_argument("tolerance must be > 0");
}

StoppingRule::StoppingRule(StoppingProtocol protocol) : protocol_(protocol) {
    protocol_.validate();
}

bool StoppingRule::push(double value) {
    if (finished_) throw std::logic_error("StoppingRule: push after the run finished");
    ++count_;
    sum_ += value;
    const double mean = sum_ / count_;
    if (count_ >= protocol_.min_realizations && count_ >= 2) {
        const double change = std::abs(mean - previous_mean_);
        const double rel = std::abs(mean) < 1e-12 ? change : change / std::abs(mean);
        if (rel < protocol_.tolerance) converged_ = finished_ = true;
    }
    if (!finished_ && count_ >= protocol_.hard_cap) finished_ = true;
    previous_mean_ = mean;
    return finished_;
}

MeanWithError mean_with_error(std::span<const double> values) {
    MeanWithError out;
    if (values.empty()) return out;
    // shifted data keeps constant input exact
    const double shift = values.front();
    double s = 0.0, s2 = 0.0;
    for (double x : values) {
        const double d = x - shift;
        s += d;
        s2 += d * d;
    }
    const auto n = static_cast<double>(values.size());
    out.mean = shift + s / n;
    if (values.size() > 1) {
        const double var = std::max(0.0, (s2 - s * s / n) / (n - 1.0));
        out.std_error = std::sqrt(var / n);
    }
    return out;
}

RealizationOutcome simulate_realization(const LatticeRealization& lattice,
                                        const SimulationSettings& settings) {
    const auto basis = build_basis(lattice.n_guides(), settings.m_cut);
    const auto gen = build_generator(basis, lattice);
    const auto grid = uniform_zeta_grid(lattice.constants.zeta_max, lattice.constants.n_z);

    ZTraceBuilder builder(basis, grid.size());
    const auto summary = propagate(
        gen, vacuum_state(basis), grid,
        [&](std::size_t k, double zeta, const StateVector& psi) { builder.observe(k, zeta, psi); },
        settings.propagator);

    RealizationOutcome out;
    out.trace = std::move(builder).finish();
    out.norm_drift = summary.norm_drift;
    out.top_level_population = summary.top_level_population;
    try {
        out.sigma_bar = spatial_average(out.trace.zeta, out.trace.sigma, settings.window);
        out.pr_bar = spatial_average(out.trace.zeta, out.trace.pr, settings.window);
    } catch (const std::invalid_argument& e) {
        throw std::invalid_argument(
            std::string("monitored observables undefined in the averaging window: ") + e.what());
    }
    return out;
}

namespace {

struct TraceAccumulator {
    std::vector<double> zeta;
    std::vector<double> sigma, pr;
    std::vector<std::vector<double>> n;
    std::vector<int> count;

    void add(const ZTrace& t) {
        const std::size_t points = t.zeta.size();
        if (zeta.empty()) {
            zeta = t.zeta;
            sigma.assign(points, 0.0);
            pr.assign(points, 0.0);
            n.assign(points, {});
            count.assign(points, 0);
        }
        for (std::size_t k = 0; k < points; ++k) {
            if (!t.valid(k)) continue;
            sigma[k] += *t.sigma[k];
            pr[k] += *t.pr[k];
            const auto& nk = *t.n[k];
            if (n[k].empty()) n[k].assign(nk.size(), 0.0);
            for (std::size_t j = 0; j < nk.size(); ++j) n[k][j] += nk[j];
            ++count[k];
        }
    }

    MeanTrace finish() const {
        MeanTrace m;
        m.zeta = zeta;
        m.sigma.resize(zeta.size());
        m.pr.resize(zeta.size());
        m.n.resize(zeta.size());
        for (std::size_t k = 0; k < zeta.size(); ++k) {
            if (count[k] == 0) continue;
            const double c = count[k];
            m.sigma[k] = sigma[k] / c;
            m.pr[k] = pr[k] / c;
            std::vector<double> nk = n[k];
            for (double& x : nk) x /= c;
            m.n[k] = std::move(nk);
        }
        return m;
    }
};

}  // namespace

EnsembleResult run_ensemble(const DisorderSpec& spec, const StoppingProtocol& protocol,
                            const EnsembleOptions& options) {
    spec.validate();
    protocol.validate();
    unsigned workers = options.workers ? options.workers : std::thread::hardware_concurrency();
    workers = std::max(1u, workers);

    EnsembleResult res;
    res.kappa = spec.kappa;
    res.target = spec.target;
    res.master_seed = spec.master_seed;
    res.monitor = protocol.monitor;

    StoppingRule rule(protocol);
    std::vector<double> sigma_bars, pr_bars;
    TraceAccumulator traces;
    Eigen::MatrixXd gamma_sum;

    // Outcomes are shared when consecutive realizations are bit-identical
    // (kappa = 0 or a target with no effect).
    std::optional<LatticeRealization> last_lattice;
    std::shared_ptr<const RealizationOutcome> last_outcome;

    std::uint64_t next_index = 1;
    while (!rule.finished()) {
        const std::size_t batch = std::min<std::size_t>(
            workers, static_cast<std::size_t>(protocol.hard_cap - rule.count()));
        std::vector<LatticeRealization> lattices;
        std::vector<std::shared_ptr<const RealizationOutcome>> outcomes(batch);
        std::vector<std::size_t> source(batch);
        std::vector<std::size_t> to_run;
        for (std::size_t b = 0; b < batch; ++b) {
            lattices.push_back(sample_realization(spec, next_index + b));
            source[b] = b;
            if (last_lattice && lattices[b] == *last_lattice) {
                outcomes[b] = last_outcome;
                continue;
            }
            for (std::size_t prev : to_run) {
                if (lattices[prev] == lattices[b]) {
                    source[b] = prev;
                    break;
                }
            }
            if (source[b] == b) to_run.push_back(b);
        }

        std::vector<std::exception_ptr> errors(batch);
        auto work = [&](std::size_t b) {
            try {
                outcomes[b] = std::make_shared<const RealizationOutcome>(
                    simulate_realization(lattices[b], options.simulation));
            } catch (...) {
                errors[b] = std::current_exception();
            }
        };
        if (to_run.size() <= 1) {
            for (std::size_t b : to_run) work(b);
        } else {
            std::vector<std::jthread> pool;
            for (std::size_t b : to_run) pool.emplace_back(work, b);
        }
        for (const auto& e : errors)
            if (e) std::rethrow_exception(e);
        for (std::size_t b = 0; b < batch; ++b)
            if (!outcomes[b]) outcomes[b] = outcomes[source[b]];

        for (std::size_t b = 0; b < batch && !rule.finished(); ++b) {
            const RealizationOutcome& o = *outcomes[b];
            sigma_bars.push_back(o.sigma_bar);
            pr_bars.push_back(o.pr_bar);
            traces.add(o.trace);
            if (gamma_sum.size() == 0) {
                gamma_sum = o.trace.gamma_final;
            } else {
                gamma_sum += o.trace.gamma_final;
            }
            res.max_norm_drift = std::max(res.max_norm_drift, o.norm_drift);
            res.max_top_level_population =
                std::max(res.max_top_level_population, o.top_level_population);
            const double monitored =
                protocol.monitor == MonitoredScalar::ParticipationRatio ? o.pr_bar : o.sigma_bar;
            rule.push(monitored);
            if (options.progress) options.progress(rule.count(), rule.running_mean());
        }
        last_lattice = lattices.back();
        last_outcome = outcomes.back();
        next_index += batch;
    }

    res.n_realizations = rule.count();
    res.converged = rule.converged();
    res.sigma_bar = mean_with_error(sigma_bars);
    res.pr_bar = mean_with_error(pr_bars);
    res.mean_gamma = gamma_sum / static_cast<double>(res.n_realizations);
    res.mean_trace = traces.finish();
    return res;
}

}  // namespace spdcsim
