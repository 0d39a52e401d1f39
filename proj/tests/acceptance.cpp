// Acceptance suite: one PASS/FAIL line per criterion.
//
// Exit status is 0 when every failing criterion is listed in
// expected_failures (each is analysed in README.md), nonzero otherwise.
// An optional argument names a file that receives a copy of the report.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "fracneumann/config.hpp"
#include "fracneumann/energy.hpp"
#include "fracneumann/harness.hpp"
#include "fracneumann/io.hpp"
#include "fracneumann/kernel.hpp"
#include "fracneumann/moser.hpp"
#include "fracneumann/neumann.hpp"
#include "fracneumann/solvers.hpp"
#include "oracles.hpp"

using namespace fracneumann;

namespace {

// Criterion 1
constexpr double symbol_tol = 2e-2;
constexpr double min_order = 1.8;
constexpr double symbol_window = 60.0;
constexpr double c1_seconds = 60.0;
// Criterion 2
constexpr int exactness_fields = 100;
constexpr double exactness_tol = 1e-12;
// Criterion 3
constexpr double pohozaev_tol = 1e-3;
constexpr double decay_rel_tol = 0.15;
constexpr double symmetry_tol = 1e-8;
constexpr double refinement_tol = 0.01;
constexpr double c3_seconds = 600.0;
// Criterion 4
constexpr double nehari_tol = 1e-6;
constexpr double flux_tol = 1e-6;
constexpr double energy_identity_tol = 1e-8;
// Criterion 5
constexpr double slope_target = 2.0;
constexpr double slope_tol = 0.2;
constexpr double min_r_squared = 0.98;
constexpr double sup_slope_tol = 0.1;
constexpr double c5_seconds = 1800.0;
// Criterion 7
constexpr double truncation_allowance = 0.1;
constexpr double chain_slack = 1e-12;
// Criterion 9
constexpr int moser_L_range = 50;
constexpr int moser_eta_range = 30;
constexpr double moser_L_tol = 1e-12;
constexpr int margin_samples = 100000;
constexpr double margin_tol = -1e-12;
constexpr double c9_seconds = 10.0;

// Failures analysed in README.md ("Known failures").
constexpr std::array expected_failures = {6, 7};

struct Outcome {
    int id = 0;
    bool pass = false;
    std::string detail;
};

bool expected_to_fail(int id) {
    return std::find(expected_failures.begin(), expected_failures.end(), id) != expected_failures.end();
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Params with(double s, double p = 1.5, double d = 1.0) {
    Params prm;
    prm.s = s;
    prm.p = p;
    prm.d = d;
    return prm;
}

Outcome kernel_correctness() {
    const auto t0 = std::chrono::steady_clock::now();
    double worst_symbol = 0.0;
    double worst_order = INFINITY;
    for (double s : {0.25, 0.4}) {
        std::vector<KernelTable> tables;
        for (double h : {0.01, 0.005, 0.0025}) tables.emplace_back(build_window(symbol_window, h), with(s));
        for (double k : {0.5, 1.0, 2.0}) {
            std::vector<double> errs;
            for (const KernelTable& t : tables) {
                const Grid& g = t.grid();
                std::vector<double> u(g.size());
                for (std::size_t i = 0; i < u.size(); ++i) u[i] = std::cos(k * g.nodes[i]);
                const std::size_t mid = g.size() / 2;
                const std::size_t at[] = {mid};
                const double v = frac_laplacian_apply(u, t, at)[0];
                const double x = g.nodes[mid];
                if (&t == &tables.front()) {
                    worst_symbol = std::max(worst_symbol, std::abs(v - std::pow(k, 2 * s) * std::cos(k * x)));
                }
                errs.push_back(std::abs(v - oracle::truncated_cosine_operator(x, k, s, symbol_window)));
            }
            for (std::size_t q = 0; q + 1 < errs.size(); ++q) {
                worst_order = std::min(worst_order, std::log2(errs[q] / errs[q + 1]));
            }
        }
    }
    const double secs = seconds_since(t0);
    return {1, worst_symbol <= symbol_tol && worst_order >= min_order && secs < c1_seconds,
            fmt::format("max symbol error {:.3e} (tol {:g}), min order {:.3f} (min {:g}), {:.1f} s", worst_symbol,
                        symbol_tol, worst_order, min_order, secs)};
}

Outcome neumann_exactness() {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> unif(0.0, 3.0);
    double worst = 0.0;
    int fields = 0;
    // Dense grid for every field; an FFT-sized grid for every tenth.
    const KernelTable dense(build_grid(0.0, 1.0, 0.01, 2.0), Params{});
    const KernelTable fft(build_grid(0.0, 1.0, 0.0004, 2.0), Params{});
    for (int trial = 0; trial < exactness_fields; ++trial) {
        for (const KernelTable* t : {&dense, &fft}) {
            if (t == &fft && trial % 10 != 0) continue;
            const Grid& g = t->grid();
            std::vector<double> v(g.interior_count);
            for (double& x : v) x = unif(rng);
            const auto ext = extend(v, *t);
            for (std::size_t x = 0; x < g.size(); ++x) {
                if (g.is_interior(x)) continue;
                double scale = 0.0;
                for (std::size_t j = g.first_interior; j < g.end_interior(); ++j) {
                    scale += t->weight(x, j) * std::abs(ext[x] - ext[j]);
                }
                scale *= t->c_ns();
                worst = std::max(worst, std::abs(neumann_derivative(ext.values(), *t, x)) / scale);
            }
            ++fields;
        }
    }
    return {2, worst <= exactness_tol,
            fmt::format("{} fields, max |N_s u| / Σ|terms| = {:.3e} (tol {:g})", fields, worst, exactness_tol)};
}

Outcome ground_state_identities(const GroundStateResult& gs, double gs_seconds) {
    const auto t0 = std::chrono::steady_clock::now();
    const WindowConfig fine{60.0, 0.025};
    const GroundStateResult gs2 = solve_ground_state(Params{}, fine, SolverConfig{});
    const double drift = std::abs(gs2.F_value - gs.F_value) / gs.F_value;
    const double target = 1.0 + 2.0 * gs.s;
    const double decay_err = std::abs(gs.decay_exponent_fit - target) / target;
    const double secs = gs_seconds + seconds_since(t0);
    const bool ok = gs.pohozaev_residual <= pohozaev_tol && decay_err <= decay_rel_tol &&
                    gs.symmetric_error <= symmetry_tol && drift <= refinement_tol && secs < c3_seconds;
    return {3, ok,
            fmt::format("Pohozaev {:.3e}, decay exponent {:.4f} (target {:g}), symmetry {:.1e}, "
                        "F {:.6f} vs {:.6f} at h/2 (drift {:.2e}), {:.1f} s",
                        gs.pohozaev_residual, gs.decay_exponent_fit, target, gs.symmetric_error, gs.F_value,
                        gs2.F_value, drift, secs)};
}

struct SweepRun {
    std::vector<SweepRecord> records;
    double seconds = 0.0;
    // Worst critical-point identities over nonconstant solves.
    double nehari = 0.0;
    double flux = 0.0;
    double energy = 0.0;
    int nonconstant = 0;
    std::vector<std::pair<double, double>> profile;  // (d, discrepancy)
    double c_d_min = NAN;
    double M_transplant = NAN;
    double t0_transplant = NAN;
    double J_one = NAN;
};

SweepRun run_sweep(const RunConfig& cfg, const GroundStateResult& gs, int workers, bool diagnostics) {
    SweepRun run;
    const auto ds = cfg.d_values();
    const double d_min = ds.back();
    const auto t0 = std::chrono::steady_clock::now();
    SweepObserver obs;
    if (diagnostics) {
        obs = [&](const SweepRecord& rec, const LeastEnergyResult& res, const KernelTable& table) {
            if (res.constant_branch) return;
            Params prm = cfg.params;
            prm.d = rec.d;
            ++run.nonconstant;
            run.nehari = std::max(run.nehari, rec.nehari_residual);
            run.flux = std::max(run.flux, rec.flux_residual);
            const double pot = rec.Lp1;
            const double rhs = (prm.p - 1.0) / (2.0 * (prm.p + 1.0)) * pot;
            run.energy = std::max(run.energy, std::abs(res.c_d - rhs) / rhs);
            const bool at_min = std::abs(rec.d - d_min) <= 1e-9 * d_min;
            if (at_min || std::abs(rec.d - 10.0 * d_min) <= 1e-9 * d_min) {
                run.profile.emplace_back(rec.d, profile_compare(res, table.grid(), gs, prm));
            }
            if (at_min) {
                const Grid& g = table.grid();
                const auto wd = extend(transplant(gs, g, prm, g.a), table);
                run.c_d_min = res.c_d;
                run.M_transplant = peak_energy(wd, prm, table);
                run.t0_transplant = nehari_scale(wd, prm, table);
                run.J_one = (g.b - g.a) * (0.5 - 1.0 / (prm.p + 1.0));
            }
        };
    }
    run.records = sweep(ds, cfg.params, cfg.policy(), cfg.solver, &gs, workers, obs);
    run.seconds = seconds_since(t0);
    return run;
}

Outcome critical_identities(const SweepRun& run) {
    const bool ok = run.nonconstant > 0 && run.nehari <= nehari_tol && run.flux <= flux_tol &&
                    run.energy <= energy_identity_tol;
    return {4, ok,
            fmt::format("{} nonconstant solves; max Nehari {:.2e} (tol {:g}), flux {:.2e} (tol {:g}), "
                        "energy identity {:.2e} (tol {:g})",
                        run.nonconstant, run.nehari, nehari_tol, run.flux, flux_tol, run.energy,
                        energy_identity_tol)};
}

Outcome scaling_laws(const SweepRun& run, const Params& prm) {
    try {
        const FitResult lp = scaling_fit(run.records, Quantity::parse("r:p+1", prm.p), prm.p);
        const FitResult cd = scaling_fit(run.records, Quantity::parse("cd", prm.p), prm.p);
        const FitResult sup = scaling_fit(run.records, Quantity::parse("sup", prm.p), prm.p);
        const bool ok = std::abs(lp.slope - slope_target) <= slope_tol && lp.r_squared >= min_r_squared &&
                        std::abs(cd.slope - slope_target) <= slope_tol && std::abs(sup.slope) <= sup_slope_tol &&
                        run.seconds < c5_seconds;
        return {5, ok,
                fmt::format("window d in [{:.3g}, {:.3g}] ({} records): slope ∫u^(p+1) {:.4f} (r² {:.4f}), "
                            "c_d {:.4f}, sup u {:.4f}; sweep {:.1f} s",
                            lp.d_min, lp.d_max, lp.count, lp.slope, lp.r_squared, cd.slope, sup.slope,
                            run.seconds)};
    } catch (const Error& e) {
        return {5, false, e.what()};
    }
}

Outcome boundary_migration_check(const SweepRun& run, const RunConfig& cfg) {
    try {
        const MigrationResult m = boundary_migration(run.records, cfg.params.s, cfg.policy());
        std::vector<SweepRecord> live;
        for (const SweepRecord& r : run.records) {
            if (!r.constant_branch) live.push_back(r);
        }
        std::string cells;
        for (std::size_t k = live.size() - 2; k < live.size(); ++k) {
            cells += fmt::format(" d={:.3g}: dist {:.3e} vs h {:.3e};", live[k].d, live[k].dist_boundary, live[k].h);
        }
        const bool ok = m.boundary && std::isfinite(m.K_star);
        return {6, ok, fmt::format("verdict {}, K_* = {:.4f};{}", m.verdict(), m.K_star, cells)};
    } catch (const Error& e) {
        return {6, false, e.what()};
    }
}

Outcome upper_bound_chain(const SweepRun& run, const GroundStateResult& gs, const Params& prm, double d_min) {
    const double bound = std::pow(d_min, prm.n / (2.0 * prm.s)) / 2.0 * gs.F_value;
    const bool below_transplant = run.c_d_min <= run.M_transplant * (1.0 + chain_slack);
    const bool below_ground = run.M_transplant < bound * (1.0 + truncation_allowance);
    const bool nonconstant = run.c_d_min < run.J_one;
    return {7, below_transplant && below_ground && nonconstant,
            fmt::format("d={:.3g}: c_d {:.6e} <= M[w_d] {:.6e}: {}; M[w_d] < 1.1 d^(n/2s) F/2 = {:.6e}: {} "
                        "(ratio {:.4f}); c_d < J_d(1) = {:g}: {}; t0(w_d) = {:.4f}",
                        d_min, run.c_d_min, run.M_transplant, below_transplant, bound * (1 + truncation_allowance),
                        below_ground, run.M_transplant / bound, run.J_one, nonconstant, run.t0_transplant)};
}

Outcome profile_convergence(const SweepRun& run, double d_min) {
    double at_min = NAN, at_ten = NAN;
    for (const auto& [d, v] : run.profile) {
        if (std::abs(d - d_min) <= 1e-9 * d_min) at_min = v;
        else at_ten = v;
    }
    const bool ok = at_min < at_ten;
    return {8, ok, fmt::format("discrepancy {:.4e} at d={:.3g}, {:.4e} at d={:.3g}", at_min, d_min, at_ten,
                               10.0 * d_min)};
}

Outcome moser_toolkit() {
    const auto t0 = std::chrono::steady_clock::now();
    const MoserParams mp;
    double worst_L = 0.0;
    for (int j = 0; j <= moser_L_range; ++j) {
        const double a = L_closed_form(j, mp);
        worst_L = std::max(worst_L, std::abs(a - L_recurrence(j, mp)) / a);
    }
    bool eta_ok = true;
    for (const MoserRow& row : moser_table(mp, moser_eta_range)) eta_ok = eta_ok && row.eta <= row.gamma;
    const MoserBound b = moser_bound_constant(mp, moser_eta_range);
    bool m_ok = std::isfinite(b.m) && b.m > 0.0;
    for (int j = 1; j <= moser_eta_range; ++j) {
        m_ok = m_ok && M_sequence(j, mp) <= b.m * L_closed_form(j - 1, mp) * (1.0 + 1e-12);
    }
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> xy(0.0, 100.0);
    std::uniform_real_distribution<double> kk(1.0, 20.0);
    double worst_margin = INFINITY;
    for (int i = 0; i < margin_samples; ++i) {
        const double x = xy(rng), y = xy(rng), k = kk(rng);
        worst_margin = std::min(worst_margin, elementary_inequality_margin(x, y, k));
    }
    const double secs = seconds_since(t0);
    const bool ok = worst_L <= moser_L_tol && eta_ok && m_ok && worst_margin >= margin_tol && secs < c9_seconds;
    return {9, ok,
            fmt::format("L_j rel. gap {:.1e}; η ≤ γ: {}; m = {:.4f} valid: {}; limit {:.4f} vs γ ratio {:.4f}; "
                        "min margin {:.3e}; {:.2f} s",
                        worst_L, eta_ok, b.m, m_ok, b.limit, b.gamma_ratio, worst_margin, secs)};
}

Outcome determinism(const SweepRun& main_run, const RunConfig& cfg, const GroundStateResult& gs) {
    const std::string reference = format_sweep_csv(main_run.records);
    const bool workers_same = format_sweep_csv(run_sweep(cfg, gs, 4, false).records) == reference;
    RunConfig shortcfg = cfg;
    shortcfg.d_max = 1.0;
    shortcfg.d_min = 0.05;
    shortcfg.points = 4;
    const std::string a = format_sweep_csv(run_sweep(shortcfg, gs, 2, false).records);
    const std::string b = format_sweep_csv(run_sweep(shortcfg, gs, 2, false).records);
    return {10, workers_same && a == b,
            fmt::format("default sweep, 1 vs 4 workers identical: {}; repeated 4-point sweep identical: {}",
                        workers_same, a == b)};
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<Outcome> out;
    std::string text;
    auto report = [&](Outcome o) {
        const char* tag = o.pass ? (expected_to_fail(o.id) ? "PASS (listed as expected failure)" : "PASS")
                                 : (expected_to_fail(o.id) ? "FAIL (expected, see README)" : "FAIL");
        const std::string line = fmt::format("criterion {}: {}: {}\n", o.id, tag, o.detail);
        std::fputs(line.c_str(), stdout);
        std::fflush(stdout);
        text += line;
        out.push_back(std::move(o));
    };

    report(kernel_correctness());
    report(neumann_exactness());

    const auto gs_start = std::chrono::steady_clock::now();
    const GroundStateResult gs = solve_ground_state(Params{}, WindowConfig{}, SolverConfig{});
    const double gs_seconds = seconds_since(gs_start);
    report(ground_state_identities(gs, gs_seconds));

    const RunConfig cfg;
    const SweepRun run = run_sweep(cfg, gs, 1, true);
    const double d_min = cfg.d_values().back();
    report(critical_identities(run));
    report(scaling_laws(run, cfg.params));
    report(boundary_migration_check(run, cfg));
    report(upper_bound_chain(run, gs, cfg.params, d_min));
    report(profile_convergence(run, d_min));
    report(moser_toolkit());
    report(determinism(run, cfg, gs));

    int unexpected = 0;
    for (const Outcome& o : out) unexpected += !o.pass && !expected_to_fail(o.id);
    const auto passed = std::count_if(out.begin(), out.end(), [](const Outcome& o) { return o.pass; });
    const std::string summary =
        fmt::format("{}/{} criteria pass; {} unexpected failure(s)\n", passed, out.size(), unexpected);
    std::fputs(summary.c_str(), stdout);
    if (argc > 1) std::ofstream(argv[1]) << text << summary;
    return unexpected == 0 ? 0 : 1;
}
