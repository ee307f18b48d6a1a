// End-to-end acceptance checks. One line per criterion:
//   criterion <k> PASS|FAIL  <what was measured>
// Usage: acceptance [--criterion k]...   (all when none given)

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "spdcsim/cli.hpp"
#include "spdcsim/config.hpp"
#include "spdcsim/ensemble.hpp"
#include "spdcsim/observables.hpp"
#include "spdcsim/oracle.hpp"
#include "spdcsim/propagator.hpp"

using namespace spdcsim;
namespace fs = std::filesystem;

namespace {

struct Verdict {
    bool pass = true;
    std::vector<std::string> notes;

    void check(bool ok, const char* fmt, auto... args) {
        char buf[512];
        std::snprintf(buf, sizeof buf, fmt, args...);
        notes.push_back(std::string(ok ? "ok   " : "FAIL ") + buf);
        pass = pass && ok;
    }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Fixed-size ensemble: exactly n realizations.
EnsembleResult fixed_ensemble(const ExperimentConfig& c, const std::set<int>& injection,
                              double delta_phi, DisorderTarget target, double kappa, int n) {
    StoppingProtocol p = c.protocol;
    p.min_realizations = n;
    p.hard_cap = n;
    EnsembleOptions opt;
    opt.simulation.m_cut = c.m_cut;
    opt.simulation.window = c.window;
    return run_ensemble({target, kappa, scenario_lattice(c, injection, delta_phi), c.seed, c.phase_mode},
                        p, opt);
}

std::set<int> all_guides(int n) {
    std::set<int> s;
    for (int j = 0; j < n; ++j) s.insert(j);
    return s;
}

// ---------------------------------------------------------------------------

Verdict generator_correctness() {
    Verdict v;
    const auto fig2 = preset("fig2");
    const auto basis = build_basis(9, 3);
    const auto parity = parity_op(basis);
    std::vector<std::pair<std::string, LatticeRealization>> lattices;
    lattices.emplace_back("center", scenario_lattice(fig2, {4}, 0.0));
    lattices.emplace_back("corner", scenario_lattice(fig2, {0}, 0.0));
    lattices.emplace_back("all", scenario_lattice(fig2, all_guides(9), 0.0));
    lattices.emplace_back("alternating", scenario_lattice(fig2, all_guides(9), std::numbers::pi));
    for (auto t : {DisorderTarget::Coupling, DisorderTarget::Amplitude, DisorderTarget::Phase}) {
        const DisorderSpec spec{t, 1.0, scenario_lattice(fig2, all_guides(9), 0.0), 2024,
                                PhaseMode::Replace};
        for (std::uint64_t i = 1; i <= 7; ++i) {
            lattices.emplace_back(std::string(to_string(t)) + "#" + std::to_string(i),
                                  sample_realization(spec, i));
        }
    }
    double herm = 0.0, par = 0.0;
    for (const auto& [name, lat] : lattices) {
        const auto gen = build_generator(basis, lat);
        herm = std::max(herm, (gen.op() - gen.op().adjoint()).norm());
        par = std::max(par, (gen.op() * parity - parity * gen.op()).norm());
    }
    v.check(herm < 1e-12, "max ||K - K^dag|| = %.3e over %zu lattices (< 1e-12)", herm, lattices.size());
    v.check(par < 1e-12, "max ||KP - PK|| = %.3e (< 1e-12)", par);
    return v;
}

Verdict unitarity_and_parity() {
    Verdict v;
    const auto c = preset("fig2");
    const auto basis = build_basis(c.n_guides, c.m_cut);
    const auto grid = uniform_zeta_grid(c.constants.zeta_max, c.constants.n_z);
    PropagatorOptions opt;
    opt.sector = SectorMode::Full;  // leakage is only measurable outside the even sector
    for (const auto& inj : c.injections) {
        const auto gen = build_generator(basis, scenario_lattice(c, inj, 0.0));
        double leak = 0.0;
        const auto s = propagate(
            gen, vacuum_state(basis), grid,
            [&](std::size_t, double, const StateVector& psi) {
                leak = std::max(leak, odd_parity_population(basis, psi));
            },
            opt);
        const auto g = format_guide_set(inj);
        v.check(s.norm_drift < 1e-9, "inject %s: norm drift %.3e over %zu points (< 1e-9)", g.c_str(),
                s.norm_drift, grid.size());
        v.check(leak < 1e-12, "inject %s: odd-parity population %.3e (< 1e-12)", g.c_str(), leak);
    }
    return v;
}

Verdict squeezer_limit() {
    Verdict v;
    const auto basis = build_basis(1, 3);
    const auto lat = homogeneous_lattice(PhysicalConstants{}, 1, {0});
    const double eta = std::abs(eta_profile(lat)[0]);
    const auto grid = uniform_zeta_grid(20.0, 401);
    double worst = 0.0;
    propagate(build_generator(basis, lat), vacuum_state(basis), grid,
              [&](std::size_t, double zeta, const StateVector& psi) {
                  const double z = zeta / lat.constants.coupling0;
                  const double p2 = std::norm(psi[2]);
                  worst = std::max(worst, std::abs(p2 - std::pow(std::sin(std::sqrt(2.0) * eta * z), 2)));
              });
    v.check(std::abs(eta - 1.5652) < 5e-5, "eta = %.6f 1/m", eta);
    v.check(worst < 1e-6, "max |P2 - sin^2(sqrt2 eta z)| = %.3e over 401 points (< 1e-6)", worst);
    return v;
}

Verdict linear_limit() {
    Verdict v;
    PhysicalConstants pc;
    pc.nonlinearity = 0.0;
    const auto basis = build_basis(9, 3);
    const auto grid = uniform_zeta_grid(pc.zeta_max, pc.n_z);
    const DisorderSpec spec{DisorderTarget::Coupling, 0.8, homogeneous_lattice(pc, 9, {4}), 77,
                            PhaseMode::Replace};
    std::vector<LatticeRealization> lattices{spec.base};
    for (std::uint64_t i = 1; i <= 20; ++i) lattices.push_back(sample_realization(spec, i));
    double worst = 0.0;
    for (int start : {4, 0}) {
        std::vector<int> occ(9, 0);
        occ[start] = 1;
        for (const auto& lat : lattices) {
            propagate(build_generator(basis, lat), fock_state(basis, occ), grid,
                      [&](std::size_t, double zeta, const StateVector& psi) {
                          const auto u = tridiagonal_propagator(lat.coupling, zeta / pc.coupling0);
                          const auto nq = photon_numbers(psi, basis);
                          for (int q = 0; q < 9; ++q) {
                              worst = std::max(worst, std::abs(nq[q] - std::norm(u.u(q, start))));
                          }
                      });
        }
    }
    v.check(worst < 1e-8, "max |<N_q> - |U_q,j0|^2| = %.3e over 2 x 21 lattices (< 1e-8)", worst);
    return v;
}

Verdict mirror_symmetry() {
    Verdict v;
    const auto c = preset("fig2");
    const auto out = simulate_realization(scenario_lattice(c, {4}, 0.0), SimulationSettings{});
    double worst = 0.0;
    std::size_t points = 0;
    for (const auto& nk : out.trace.n) {
        if (!nk) continue;
        ++points;
        for (int j = 0; j < 9; ++j) worst = std::max(worst, std::abs((*nk)[j] - (*nk)[8 - j]));
    }
    v.check(worst < 1e-10, "max |n_j - n_(N+1-j)| = %.3e over %zu points (< 1e-10)", worst, points);
    return v;
}

// Largest entry with q or r even (1-based guides) relative to the largest entry.
double even_entry_ratio(const Eigen::MatrixXd& g) {
    double worst = 0.0;
    for (int q = 0; q < g.rows(); ++q)
        for (int r = 0; r < g.cols(); ++r)
            if (q % 2 == 1 || r % 2 == 1) worst = std::max(worst, std::abs(g(q, r)));
    return worst / g.cwiseAbs().maxCoeff();
}

Verdict gamma_null_pattern() {
    Verdict v;
    const auto c = preset("fig5");
    const auto all = all_guides(9);
    const auto clean = fixed_ensemble(c, all, 0.0, DisorderTarget::Coupling, 0.0, 1);
    const auto noisy = fixed_ensemble(c, all, 0.0, DisorderTarget::Coupling, 0.75, 50);
    const double r0 = even_entry_ratio(clean.mean_gamma);
    const double r1 = even_entry_ratio(noisy.mean_gamma);
    v.check(r0 < 1e-6, "kappa=0: max even-index Gamma / max Gamma = %.3e (< 1e-6)", r0);
    v.check(r1 < 1e-3, "kappa=0.75, 50 realizations: ratio = %.3e (< 1e-3)", r1);
    return v;
}

Verdict gamma_invariance() {
    Verdict v;
    const auto c = preset("fig5");
    const auto all = all_guides(9);
    const double pi = std::numbers::pi;
    const auto g0 = fixed_ensemble(c, all, pi, DisorderTarget::Coupling, 0.0, 1).mean_gamma;
    const auto g1 = fixed_ensemble(c, all, pi, DisorderTarget::Coupling, 0.75, 50).mean_gamma;
    const double cut = 0.01 * g0.cwiseAbs().maxCoeff();
    double worst = 0.0;
    int entries = 0;
    for (int q = 0; q < 9; ++q)
        for (int r = 0; r < 9; ++r)
            if (std::abs(g0(q, r)) > cut) {
                worst = std::max(worst, std::abs(g1(q, r) - g0(q, r)) / std::abs(g0(q, r)));
                ++entries;
            }
    v.check(worst < 0.05, "max relative change of %d entries above 1%% of max = %.3e (< 0.05)",
            entries, worst);
    return v;
}

struct TrendPoint {
    MeanWithError sigma, pr;
};

std::map<std::pair<int, double>, TrendPoint> trend_sweep(double* seconds = nullptr) {
    const auto c = preset("fig2");
    std::map<std::pair<int, double>, TrendPoint> out;
    const auto t0 = std::chrono::steady_clock::now();
    for (int guide : {4, 0}) {
        for (double kappa : {0.0, 0.4, 0.8}) {
            const auto r = fixed_ensemble(c, {guide}, 0.0, DisorderTarget::Coupling, kappa, 50);
            out[{guide, kappa}] = {r.sigma_bar, r.pr_bar};
        }
    }
    if (seconds) *seconds = seconds_since(t0);
    return out;
}

Verdict localization_trends() {
    Verdict v;
    const auto t = trend_sweep();
    for (int guide : {4, 0}) {
        const char* name = guide == 4 ? "center" : "corner";
        const auto& a = t.at({guide, 0.0});
        const auto& b = t.at({guide, 0.4});
        const auto& d = t.at({guide, 0.8});
        v.check(a.sigma.mean > b.sigma.mean && b.sigma.mean > d.sigma.mean,
                "%s sigma: %.4f > %.4f > %.4f", name, a.sigma.mean, b.sigma.mean, d.sigma.mean);
        v.check(a.pr.mean > b.pr.mean && b.pr.mean > d.pr.mean, "%s PR: %.4f > %.4f > %.4f", name,
                a.pr.mean, b.pr.mean, d.pr.mean);
    }
    const auto& ce = t.at({4, 0.8});
    const auto& co = t.at({0, 0.8});
    v.check(co.pr.mean + co.pr.std_error < ce.pr.mean - ce.pr.std_error,
            "kappa=0.8 PR: corner %.4f +- %.4f < center %.4f +- %.4f", co.pr.mean, co.pr.std_error,
            ce.pr.mean, ce.pr.std_error);
    v.check(ce.sigma.mean + ce.sigma.std_error < co.sigma.mean - co.sigma.std_error,
            "kappa=0.8 sigma: center %.4f +- %.4f < corner %.4f +- %.4f", ce.sigma.mean,
            ce.sigma.std_error, co.sigma.mean, co.sigma.std_error);
    return v;
}

Verdict disorder_type_trends() {
    Verdict v;
    const auto c = preset("fig4");
    const auto all = all_guides(9);
    std::map<std::pair<DisorderTarget, double>, double> pr;
    for (auto t : {DisorderTarget::Coupling, DisorderTarget::Amplitude, DisorderTarget::Phase}) {
        for (double kappa : {0.0, 0.25, 0.5}) {
            pr[{t, kappa}] = fixed_ensemble(c, all, 0.0, t, kappa, 50).pr_bar.mean;
        }
    }
    const auto cp = [&](double k) { return pr.at({DisorderTarget::Coupling, k}); };
    const double lo = std::min({cp(0.0), cp(0.25), cp(0.5)});
    const double hi = std::max({cp(0.0), cp(0.25), cp(0.5)});
    const double spread = (hi - lo) / lo;
    v.check(spread < 0.05, "coupling PR %.4f, %.4f, %.4f: spread %.2f%% (< 5%%)", cp(0.0), cp(0.25),
            cp(0.5), 100.0 * spread);
    const double ph = pr.at({DisorderTarget::Phase, 0.5});
    const double am = pr.at({DisorderTarget::Amplitude, 0.5});
    v.check(ph > 8.0, "phase PR at kappa=0.5 = %.4f (> 8)", ph);
    v.check(am > std::min(cp(0.5), ph) && am < std::max(cp(0.5), ph),
            "amplitude PR at kappa=0.5 = %.4f between coupling %.4f and phase %.4f", am, cp(0.5), ph);
    return v;
}

int cli(std::vector<std::string> args) {
    args.insert(args.begin(), "spdcsim");
    std::vector<char*> argv;
    for (auto& a : args) argv.push_back(a.data());
    argv.push_back(nullptr);
    return run_cli(static_cast<int>(args.size()), argv.data());
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Verdict stopping_and_determinism() {
    Verdict v;
    const auto c = preset("fig2");
    StoppingProtocol p = c.protocol;
    EnsembleOptions opt;
    const auto r = run_ensemble(
        {DisorderTarget::Coupling, 0.0, scenario_lattice(c, {4}, 0.0), c.seed, c.phase_mode}, p, opt);
    v.check(r.n_realizations == 150 && r.converged, "kappa=0 stops at %d (converged=%d)",
            r.n_realizations, int(r.converged));

    StoppingRule rule(p);
    int i = 0;
    while (!rule.push(i++ % 2 ? -9.0 : 10.0)) {
    }
    v.check(rule.count() == p.hard_cap && !rule.converged(),
            "non-settling stream stops at %d of cap %d, converged=%d", rule.count(), p.hard_cap,
            int(rule.converged()));

    // same output directory both times: the embedded config names it
    const auto dir = fs::temp_directory_path() / "spdcsim_acceptance_fig4";
    fs::remove_all(dir);
    const auto t0 = std::chrono::steady_clock::now();
    std::map<std::string, std::string> first;
    int status = 0, files = 0, identical = 0;
    for (int pass = 0; pass < 2 && status == 0; ++pass) {
        status = cli({"preset", "fig4", "--out", dir.string(), "--quiet"});
        if (status != 0 || !fs::exists(dir)) break;
        for (const auto& e : fs::directory_iterator(dir)) {
            const auto name = e.path().filename().string();
            if (pass == 0) {
                first[name] = slurp(e.path());
            } else {
                ++files;
                identical += first.contains(name) && first[name] == slurp(e.path());
            }
        }
    }
    const double secs = seconds_since(t0);
    v.check(status == 0, "two fig4 runs finished (status %d, %.0f s total)", status, secs);
    v.check(files > 0 && files == identical && files == static_cast<int>(first.size()), "%d of %d output files byte-identical", identical, files);
    return v;
}

Verdict runtime() {
    Verdict v;
    const auto c = preset("fig2");
    const auto t0 = std::chrono::steady_clock::now();
    const auto out = simulate_realization(scenario_lattice(c, {4}, 0.0), SimulationSettings{});
    const double one = seconds_since(t0);
    v.check(one < 60.0, "one fig2 realization (dim 19683, 401 points): %.2f s (< 60 s)", one);
    double sweep = 0.0;
    trend_sweep(&sweep);
    v.check(sweep < 7200.0, "reduced fig3 trend sweep (2 x 3 x 50 realizations): %.0f s (< 7200 s)",
            sweep);
    return v;
}

const std::map<int, std::pair<const char*, std::function<Verdict()>>>& criteria() {
    static const std::map<int, std::pair<const char*, std::function<Verdict()>>> table = {
        {1, {"generator Hermitian and parity-conserving", generator_correctness}},
        {2, {"unitarity and parity of evolution", unitarity_and_parity}},
        {3, {"analytic squeezer limit", squeezer_limit}},
        {4, {"linear-limit single-photon oracle", linear_limit}},
        {5, {"mirror symmetry of central injection", mirror_symmetry}},
        {6, {"correlation null pattern, equal phases", gamma_null_pattern}},
        {7, {"correlation invariance, alternating phases", gamma_invariance}},
        {8, {"localization trends vs injection site", localization_trends}},
        {9, {"participation ratio per disorder type", disorder_type_trends}},
        {10, {"stopping rule and determinism", stopping_and_determinism}},
        {11, {"desk-scale runtime", runtime}},
    };
    return table;
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<int> selected;
    for (int i = 1; i < argc; ++i) {
        const std::string a = argv[i];
        if (a == "--criterion" && i + 1 < argc) {
            selected.push_back(std::stoi(argv[++i]));
        } else {
            std::fprintf(stderr, "usage: %s [--criterion k]...\n", argv[0]);
            return 2;
        }
    }
    if (selected.empty())
        for (const auto& [k, _] : criteria()) selected.push_back(k);

    bool all_pass = true;
    for (int k : selected) {
        const auto it = criteria().find(k);
        if (it == criteria().end()) {
            std::fprintf(stderr, "unknown criterion %d\n", k);
            return 2;
        }
        const auto t0 = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = it->second.second();
        } catch (const std::exception& e) {
            v.check(false, "exception: %s", e.what());
        }
        for (const auto& n : v.notes) std::printf("    %s\n", n.c_str());
        std::printf("criterion %d %s  %s (%.1f s)\n", k, v.pass ? "PASS" : "FAIL", it->second.first,
                    seconds_since(t0));
        std::fflush(stdout);
        all_pass = all_pass && v.pass;
    }
    return all_pass ? 0 : 1;
}
