// Command-line front end: ground, solve, sweep, moser, verify, fit.
#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "fracneumann/config.hpp"
#include "fracneumann/harness.hpp"
#include "fracneumann/io.hpp"
#include "fracneumann/moser.hpp"
#include "fracneumann/solvers.hpp"

using namespace fracneumann;

namespace {

template <class T>
void override_with(T& target, const std::optional<T>& flag) {
    if (flag) target = *flag;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Least-energy solutions of the fractional Neumann problem d(-Δ)^s u + u = u^p"};
    app.set_help_flag("--help", "print this help and exit");
    app.require_subcommand(1);

    std::string config_path;
    int workers = 1;
    app.add_option("--config", config_path, "key = value settings file")->check(CLI::ExistingFile);
    app.add_option("--workers", workers, "worker threads for operator sums")->check(CLI::PositiveNumber);

    std::optional<double> s, p, d, a, b, h, rext, L, d_max, d_min, A, C0;
    std::optional<int> points;
    std::string out, in_path, quantity = "cd", init = "ground";
    int jmax = 30;

    auto* ground = app.add_subcommand("ground", "solve for the whole-space ground state");
    ground->add_option("--s", s);
    ground->add_option("--p", p);
    ground->add_option("--L", L, "window half-width (default 60)");
    ground->add_option("--h", h, "window spacing (default 0.05)");
    ground->add_option("--out", out, "snapshot file");

    auto* solve = app.add_subcommand("solve", "one least-energy Neumann solve");
    solve->add_option("--d", d)->required();
    solve->add_option("--s", s);
    solve->add_option("--p", p);
    solve->add_option("--a", a);
    solve->add_option("--b", b);
    solve->add_option("--h", h);
    solve->add_option("--Rext", rext);
    solve->add_option("--init", init, "ground (transplanted ground state) or bump")
        ->check(CLI::IsMember({"ground", "bump"}));
    solve->add_option("--out", out, "snapshot file");

    auto* sweep_cmd = app.add_subcommand("sweep", "continuation in d, one CSV row per d");
    sweep_cmd->add_option("--d-max", d_max);
    sweep_cmd->add_option("--d-min", d_min);
    sweep_cmd->add_option("--points", points);
    sweep_cmd->add_option("--s", s);
    sweep_cmd->add_option("--p", p);
    sweep_cmd->add_option("--out", out, "CSV file (stdout when omitted)");

    auto* moser = app.add_subcommand("moser", "Moser iteration table as CSV");
    moser->add_option("--A", A);
    moser->add_option("--C0", C0);
    moser->add_option("--jmax", jmax)->check(CLI::NonNegativeNumber);
    moser->add_option("--s", s);
    moser->add_option("--p", p);

    auto* verify = app.add_subcommand("verify", "run the identity suite");
    verify->add_option("--s", s);
    verify->add_option("--p", p);

    auto* fit = app.add_subcommand("fit", "log-log fit of a sweep CSV");
    fit->add_option("--in", in_path)->required()->check(CLI::ExistingFile);
    fit->add_option("--quantity", quantity, "r:<r>, cd or sup");
    fit->add_option("--s", s);
    fit->add_option("--p", p);

    CLI11_PARSE(app, argc, argv);

    try {
        RunConfig cfg;
        if (!config_path.empty()) load_config_file(config_path, cfg);
        override_with(cfg.params.s, s);
        override_with(cfg.params.p, p);
        override_with(cfg.a, a);
        override_with(cfg.b, b);
        if (h) cfg.h = h;
        if (rext) cfg.r_ext = rext;
        override_with(cfg.d_max, d_max);
        override_with(cfg.d_min, d_min);
        override_with(cfg.points, points);

        if (ground->parsed()) {
            WindowConfig win;
            override_with(win.half_width, L);
            if (h) win.h = *h;
            const GroundStateResult gs = solve_ground_state(cfg.params, win, cfg.solver, workers);
            fmt::print("iterations {}\nresidual {:.3e}\nF {}\npohozaev_residual {:.3e}\ndecay_exponent {:.4f}\n"
                       "symmetric_error {:.3e}\nmax {}\n",
                       gs.iterations, gs.residual, format_real(gs.F_value), gs.pohozaev_residual,
                       gs.decay_exponent_fit, gs.symmetric_error, format_real(gs.evaluate(0.0)));
            if (!out.empty()) write_snapshot(out, make_snapshot(gs, cfg.params));
        } else if (solve->parsed()) {
            Params pd = cfg.params;
            pd.d = *d;
            const double eps = pd.intrinsic_length();
            const double r_ext = cfg.r_ext.value_or(2.0 * (cfg.b - cfg.a));
            const Grid grid = build_grid(cfg.a, cfg.b, cfg.h.value_or(std::min(0.02, eps / 10.0)), r_ext);
            const KernelTable table(grid, pd, workers);
            SolverConfig sc = cfg.solver;
            std::vector<double> start;
            if (init == "ground") {
                const GroundStateResult gs = solve_ground_state(cfg.params, {}, cfg.solver, workers);
                start = transplant(gs, grid, pd, grid.a);
                sc.init = SolverConfig::Init::transplanted_ground_state;
            }
            const LeastEnergyResult r = solve_least_energy(pd, table, sc, start);
            fmt::print("c_d {}\nM_d {}\nargmax_x {}\nnehari_residual {:.3e}\nflux_residual {:.3e}\n"
                       "iterations {}\nconstant_branch {}\ninit {}\n",
                       format_real(r.c_d), format_real(r.M_d), format_real(r.argmax_x), r.nehari_residual,
                       r.flux_residual, r.iterations, r.constant_branch ? 1 : 0, to_string(r.init));
            if (!out.empty()) write_snapshot(out, make_snapshot(r, pd, table));
        } else if (sweep_cmd->parsed()) {
            const auto ds = RunConfig::d_values_for(cfg.d_max, cfg.d_min, cfg.points);
            const GroundStateResult gs = solve_ground_state(cfg.params, {}, cfg.solver, workers);
            std::vector<SweepRecord> records;
            int status = 0;
            try {
                records = sweep(ds, cfg.params, cfg.policy(), cfg.solver, &gs, workers);
            } catch (const SweepError& e) {
                std::cerr << "error: " << e.what() << " (writing partial records)\n";
                records = e.records;
                status = 1;
            }
            const std::string csv = format_sweep_csv(records);
            if (out.empty()) {
                std::cout << csv;
            } else {
                write_file_atomic(out, csv);
            }
            return status;
        } else if (moser->parsed()) {
            MoserParams mp;
            mp.n = cfg.params.n;
            mp.s = cfg.params.s;
            mp.p = cfg.params.p;
            override_with(mp.A, A);
            override_with(mp.C0, C0);
            fmt::print("j,L_j,lambda_j,eta_j,gamma_j,eta_over_L_prev\n");
            for (const MoserRow& row : moser_table(mp, jmax)) {
                fmt::print("{},{},{},{},{},{}\n", row.j, format_real(row.L), format_real(row.lambda),
                           format_real(row.eta), format_real(row.gamma), format_real(row.eta_over_L_prev));
            }
        } else if (verify->parsed()) {
            VerifyOptions opt;
            opt.solver = cfg.solver;
            opt.policy = cfg.policy();
            opt.workers = workers;
            const VerifyReport report = verify_suite(cfg.params, opt);
            for (const VerifyItem& item : report.items) {
                fmt::print("{:<28} {:<12} {}\n", item.name, to_string(item.status), item.detail);
            }
            return report.all_passed() ? 0 : 1;
        } else if (fit->parsed()) {
            const auto records = read_sweep_csv(in_path);
            const Quantity q = Quantity::parse(quantity, cfg.params.p);
            const FitResult f = scaling_fit(records, q, cfg.params.p);
            fmt::print("quantity {}\nslope {:.6f}\nintercept {:.6f}\nr_squared {:.6f}\nwindow {:.6g} {:.6g}\n"
                       "records {}\n",
                       q.name(), f.slope, f.intercept, f.r_squared, f.d_min, f.d_max, f.count);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
