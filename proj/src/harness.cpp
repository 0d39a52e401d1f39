#include "fracneumann/harness.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

#include <fmt/format.h>

#include "fracneumann/moser.hpp"

namespace fracneumann {

FitResult log_log_fit(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw Error("log_log_fit: need at least two points");
    const std::size_t n = x.size();
    std::vector<double> lx(n), ly(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw Error("log_log_fit: values must be positive");
        lx[i] = std::log(x[i]);
        ly[i] = std::log(y[i]);
    }
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
        syy += (ly[i] - my) * (ly[i] - my);
    }
    if (sxx == 0.0) throw Error("log_log_fit: x values are all equal");
    FitResult f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    f.r_squared = syy == 0.0 ? 1.0 : std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0);
    f.d_min = *std::min_element(x.begin(), x.end());
    f.d_max = *std::max_element(x.begin(), x.end());
    f.count = n;
    return f;
}

Quantity Quantity::parse(const std::string& text, double p) {
    Quantity q;
    if (text == "cd") {
        q.kind = Kind::cd;
    } else if (text == "sup") {
        q.kind = Kind::sup;
    } else if (text.rfind("r:", 0) == 0) {
        q.kind = Kind::lr;
        const std::string arg = text.substr(2);
        if (arg == "p+1") {
            q.r = p + 1.0;
        } else {
            try {
                std::size_t used = 0;
                q.r = std::stod(arg, &used);
                if (used != arg.size()) throw std::invalid_argument(arg);
            } catch (const std::exception&) {
                throw PreconditionError(fmt::format("quantity '{}': bad exponent", text));
            }
        }
        bool known = false;
        for (double r : {0.5, 1.0, 2.0, p + 1.0, 4.0}) known = known || std::abs(q.r - r) < 1e-12;
        if (!known) {
            throw PreconditionError(
                fmt::format("quantity '{}': r must be one of 0.5, 1, 2, p+1 = {}, 4", text, p + 1.0));
        }
    } else {
        throw PreconditionError(fmt::format("unknown quantity '{}' (use r:<r>, cd or sup)", text));
    }
    return q;
}

double Quantity::value(const SweepRecord& rec, double p) const {
    switch (kind) {
        case Kind::cd: return rec.c_d;
        case Kind::sup: return rec.sup_u;
        case Kind::lr: break;
    }
    if (std::abs(r - 0.5) < 1e-12) return rec.L0_5;
    if (std::abs(r - 1.0) < 1e-12) return rec.L1;
    if (std::abs(r - 2.0) < 1e-12) return rec.L2;
    if (std::abs(r - (p + 1.0)) < 1e-12) return rec.Lp1;
    if (std::abs(r - 4.0) < 1e-12) return rec.L4;
    throw PreconditionError(fmt::format("no L^r column for r = {}", r));
}

std::string Quantity::name() const {
    switch (kind) {
        case Kind::cd: return "c_d";
        case Kind::sup: return "sup_u";
        case Kind::lr: break;
    }
    return fmt::format("int u^{}", r);
}

std::vector<SweepRecord> fit_window(const std::vector<SweepRecord>& records) {
    std::vector<SweepRecord> out;
    for (const SweepRecord& r : records) {
        if (!r.constant_branch) out.push_back(r);
    }
    if (!out.empty()) {
        const auto top = std::max_element(out.begin(), out.end(),
                                          [](const SweepRecord& a, const SweepRecord& b) { return a.d < b.d; });
        out.erase(top);
    }
    return out;
}

FitResult scaling_fit(const std::vector<SweepRecord>& records, const Quantity& q, double p) {
    const auto window = fit_window(records);
    if (window.size() < 4) {
        throw Error(fmt::format("scaling_fit: {} usable records, need at least 4", window.size()));
    }
    std::vector<double> ds, vs;
    for (const SweepRecord& r : window) {
        ds.push_back(r.d);
        vs.push_back(q.value(r, p));
    }
    const auto [lo, hi] = std::minmax_element(ds.begin(), ds.end());
    if (*hi < 10.0 * *lo * (1.0 - 1e-12)) {
        throw Error(fmt::format("scaling_fit: window [{:.3g}, {:.3g}] spans less than one decade", *lo, *hi));
    }
    return log_log_fit(ds, vs);
}

MigrationResult boundary_migration(const std::vector<SweepRecord>& records, double s, const GridPolicy& policy) {
    std::vector<SweepRecord> live;
    for (const SweepRecord& r : records) {
        if (!r.constant_branch) live.push_back(r);
    }
    if (live.size() < 4) {
        throw Error(fmt::format("boundary_migration: {} nonconstant records, need at least 4", live.size()));
    }
    std::sort(live.begin(), live.end(), [](const SweepRecord& a, const SweepRecord& b) { return a.d < b.d; });
    MigrationResult m;
    bool positive = true;
    std::vector<double> ds, dists;
    for (const SweepRecord& r : live) {
        m.K_star = std::max(m.K_star, r.dist_boundary / std::pow(r.d, 1.0 / (2.0 * s)));
        positive = positive && r.dist_boundary > 0.0;
        ds.push_back(r.d);
        dists.push_back(r.dist_boundary);
    }
    m.boundary = true;
    for (std::size_t k = 0; k < 2; ++k) {
        const SweepRecord& r = live[k];
        const double h = std::isnan(r.h) ? policy.grid_for(r.d, s).h : r.h;
        m.boundary = m.boundary && r.dist_boundary < h;
    }
    if (positive) m.fit = log_log_fit(ds, dists);
    return m;
}

double profile_compare(const LeastEnergyResult& result, const Grid& grid, const GroundStateResult& gs,
                       const Params& params) {
    if (result.constant_branch) throw PreconditionError("profile_compare: constant-branch result has no profile");
    const double eps = params.intrinsic_length();
    const double z = result.argmax_x;
    int inward = 0;
    if (z - grid.a < grid.h) inward = 1;
    if (grid.b - z < grid.h) inward = -1;
    const double phi0 = result.M_d;
    const double w0 = gs.evaluate(0.0);
    const auto xs = grid.interior_nodes();
    const auto us = result.u.interior();
    double worst = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double y = (xs[i] - z) / eps;
        if (std::abs(y) > 5.0) continue;
        if (inward * y < 0.0) continue;
        worst = std::max(worst, std::abs(us[i] / phi0 - gs.evaluate(y) / w0));
    }
    return worst;
}

double lr_ratio_spread(const std::vector<SweepRecord>& records, double r, const Params& params) {
    const auto window = fit_window(records);
    if (window.empty()) throw Error("lr_ratio_spread: no usable records");
    Quantity q;
    q.kind = Quantity::Kind::lr;
    q.r = r;
    double lo = INFINITY, hi = 0.0;
    for (const SweepRecord& rec : window) {
        const double ratio = q.value(rec, params.p) / std::pow(rec.d, params.n / (2.0 * params.s));
        lo = std::min(lo, ratio);
        hi = std::max(hi, ratio);
    }
    return hi / lo;
}

std::optional<double> nonconstancy_onset(const std::vector<SweepRecord>& records) {
    std::vector<SweepRecord> sorted = records;
    std::sort(sorted.begin(), sorted.end(), [](const SweepRecord& a, const SweepRecord& b) { return a.d > b.d; });
    std::size_t k = 0;
    while (k < sorted.size() && sorted[k].constant_branch) ++k;
    if (k == 0 || k == sorted.size()) return std::nullopt;
    for (std::size_t i = k; i < sorted.size(); ++i) {
        if (sorted[i].constant_branch) return std::nullopt;
    }
    return std::sqrt(sorted[k - 1].d * sorted[k].d);
}

bool VerifyReport::all_passed() const {
    return std::all_of(items.begin(), items.end(),
                       [](const VerifyItem& i) { return i.status == VerifyItem::Status::pass; });
}

const VerifyItem* VerifyReport::find(const std::string& name) const {
    for (const VerifyItem& i : items) {
        if (i.name == name) return &i;
    }
    return nullptr;
}

const char* to_string(VerifyItem::Status status) {
    switch (status) {
        case VerifyItem::Status::pass: return "pass";
        case VerifyItem::Status::fail: return "FAIL";
        case VerifyItem::Status::precondition: return "precondition";
    }
    return "?";
}

namespace {

struct Check {
    bool ok;
    std::string detail;
};

void run_item(VerifyReport& report, const std::string& name, const std::function<Check()>& body) {
    VerifyItem item;
    item.name = name;
    try {
        const Check c = body();
        item.status = c.ok ? VerifyItem::Status::pass : VerifyItem::Status::fail;
        item.detail = c.detail;
    } catch (const PreconditionError& e) {
        item.status = VerifyItem::Status::precondition;
        item.detail = e.what();
    } catch (const std::exception& e) {
        item.status = VerifyItem::Status::fail;
        item.detail = e.what();
    }
    report.items.push_back(std::move(item));
}

KernelTable tampered(const Grid& grid, const Params& params, const VerifyOptions& opt) {
    KernelTable t(grid, params, opt.workers);
    return opt.kernel_scale == 1.0 ? t : t.scaled(opt.kernel_scale);
}

}  // namespace

VerifyReport verify_suite(const Params& params, const VerifyOptions& opt) {
    VerifyReport report;

    run_item(report, "kernel symbol", [&] {
        params.validate_common();
        const Grid grid = build_window(60.0, 0.01);
        const KernelTable table = tampered(grid, params, opt);
        std::vector<double> u(grid.size());
        for (std::size_t i = 0; i < u.size(); ++i) u[i] = std::cos(grid.nodes[i]);
        const std::size_t mid = grid.size() / 2;
        const std::size_t at[] = {mid};
        const double err = std::abs(frac_laplacian_apply(u, table, at)[0] - std::cos(grid.nodes[mid]));
        return Check{err <= 2e-2, fmt::format("|op cos - cos| = {:.3e} at x = {:.3g} (tol 2e-2)", err, grid.nodes[mid])};
    });

    run_item(report, "extension stationarity", [&] {
        params.validate_neumann();
        const Grid grid = build_grid(opt.policy.a, opt.policy.b, opt.policy.h_max,
                                     opt.policy.r_ext_factor * (opt.policy.b - opt.policy.a));
        const KernelTable table = tampered(grid, params, opt);
        std::mt19937_64 rng(opt.seed);
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        std::normal_distribution<double> normal;
        std::vector<double> v(grid.interior_count);
        for (double& x : v) x = unif(rng);
        const ExtendedField ext = extend(v, table);
        const double base = seminorm_T(ext.values(), table);
        int worse = 0;
        constexpr int trials = 20;
        for (int t = 0; t < trials; ++t) {
            std::vector<double> pert(ext.values().begin(), ext.values().end());
            for (std::size_t i = 0; i < pert.size(); ++i) {
                if (!grid.is_interior(i)) pert[i] += 0.1 * normal(rng);
            }
            worse += seminorm_T(pert, table) > base;
        }
        return Check{worse == trials, fmt::format("{}/{} exterior perturbations increased the seminorm", worse, trials)};
    });

    std::optional<GroundStateResult> gs;
    run_item(report, "ground-state Pohozaev", [&] {
        gs = solve_ground_state(params, opt.window, opt.solver, opt.workers);
        return Check{std::abs(gs->pohozaev_residual) <= 1e-3,
                     fmt::format("relative Pohozaev residual {:.3e} (tol 1e-3), F(w) = {:.6g}",
                                 gs->pohozaev_residual, gs->F_value)};
    });

    // The Neumann identity solve feeds three items.
    std::optional<LeastEnergyResult> solved;
    std::optional<KernelTable> solve_table;
    Params pd = params;
    pd.d = opt.solve_d;
    auto need_solve = [&] {
        pd.validate_neumann();
        if (!gs) throw Error("ground state unavailable");
        if (!solved) {
            const Grid grid = opt.policy.grid_for(pd.d, pd.s);
            solve_table.emplace(tampered(grid, pd, opt));
            SolverConfig cfg = opt.solver;
            cfg.init = SolverConfig::Init::transplanted_ground_state;
            solved.emplace(solve_least_energy(pd, *solve_table, cfg, transplant(*gs, grid, pd, grid.a)));
        }
    };

    run_item(report, "critical-point identities", [&] {
        need_solve();
        const LeastEnergyResult& r = *solved;
        if (r.constant_branch) return Check{false, fmt::format("solve at d = {} reached the constant branch", pd.d)};
        const double lp1 = make_record(r, pd, *solve_table).Lp1;
        const double energy_id = std::abs(r.c_d - (pd.p - 1.0) / (2.0 * (pd.p + 1.0)) * lp1) / r.c_d;
        const bool ok = r.nehari_residual <= 1e-6 && r.flux_residual <= 1e-6 && energy_id <= 1e-8;
        return Check{ok, fmt::format("d = {}: Nehari {:.2e}, flux {:.2e}, energy identity {:.2e}", pd.d,
                                     r.nehari_residual, r.flux_residual, energy_id)};
    });

    run_item(report, "Moser consistency", [&] {
        MoserParams mp;
        mp.n = params.n;
        mp.s = params.s;
        mp.p = params.p;
        mp.validate();
        double worst_L = 0.0;
        for (int j = 0; j <= 50; ++j) {
            const double a = L_closed_form(j, mp);
            worst_L = std::max(worst_L, std::abs(a - L_recurrence(j, mp)) / a);
        }
        bool eta_ok = true;
        for (const MoserRow& row : moser_table(mp, 30)) eta_ok = eta_ok && row.eta <= row.gamma;
        const MoserBound b = moser_bound_constant(mp, 30);
        bool m_ok = true;
        for (int j = 1; j <= 30; ++j) m_ok = m_ok && M_sequence(j, mp) <= b.m * L_closed_form(j - 1, mp) * (1 + 1e-14);
        const bool ok = worst_L <= 1e-12 && eta_ok && m_ok;
        return Check{ok, fmt::format("L closed form vs recurrence {:.1e}, eta <= gamma: {}, m = {:.4g} verified: {}",
                                     worst_L, eta_ok, b.m, m_ok)};
    });

    run_item(report, "elementary inequality", [&] {
        std::mt19937_64 rng(opt.seed);
        std::uniform_real_distribution<double> xy(0.0, 100.0);
        std::uniform_real_distribution<double> kk(1.0, 20.0);
        double worst = INFINITY;
        for (int i = 0; i < 100000; ++i) {
            const double x = xy(rng);
            const double y = xy(rng);
            const double k = kk(rng);
            worst = std::min(worst, elementary_inequality_margin(x, y, k));
        }
        return Check{worst >= -1e-12, fmt::format("min margin over 1e5 samples {:.3e}", worst)};
    });

    run_item(report, "nonconstancy", [&] {
        need_solve();
        const double constant = (opt.policy.b - opt.policy.a) * (0.5 - 1.0 / (pd.p + 1.0));
        return Check{!solved->constant_branch && solved->c_d < constant,
                     fmt::format("d = {}: c_d = {:.6g}, J_d(1) = {:.6g}", pd.d, solved->c_d, constant)};
    });

    run_item(report, "ground-state upper bound", [&] {
        need_solve();
        const ExtendedField wd = extend(transplant(*gs, solve_table->grid(), pd, solve_table->grid().a), *solve_table);
        const double m = peak_energy(wd, pd, *solve_table);
        const double bound = std::pow(pd.d, pd.n / (2.0 * pd.s)) / 2.0 * gs->F_value;
        return Check{m < bound, fmt::format("d = {}: M[w_d] = {:.6g}, d^(n/2s) F(w)/2 = {:.6g}, ratio {:.4f}", pd.d, m,
                                            bound, m / bound)};
    });

    return report;
}

}  // namespace fracneumann
