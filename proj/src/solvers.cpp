#include "fracneumann/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

namespace fracneumann {

void SolverConfig::validate() const {
    if (!(tol_residual > 0.0)) throw PreconditionError("SolverConfig: tol_residual must be positive");
    if (!(backtrack > 0.0 && backtrack < 1.0)) throw PreconditionError("SolverConfig: need 0 < backtrack < 1");
    if (!(step > 0.0)) throw PreconditionError("SolverConfig: step must be positive");
    if (max_iters < 1) throw PreconditionError("SolverConfig: max_iters must be at least 1");
}

const char* to_string(SolverConfig::Init init) {
    switch (init) {
        case SolverConfig::Init::gaussian_bump: return "gaussian_bump";
        case SolverConfig::Init::transplanted_ground_state: return "transplanted_ground_state";
        case SolverConfig::Init::warm_start: return "warm_start";
    }
    return "unknown";
}

namespace {

constexpr double armijo_c = 1e-4;
// Rounding allowance: the peak energy carries ~1e-14 relative evaluation noise.
constexpr double armijo_slack = 1e-13;
constexpr double min_step = 1e-14;
constexpr double constant_variance = 1e-10;

struct Iterate {
    std::vector<double> u;   // interior values, Nehari-scaled
    std::vector<double> op;  // (-Δ)^s u at interior nodes
    double M = 0.0;
};

/// Peak-energy descent shared by the whole-space and Neumann solvers.
class RayProblem {
public:
    RayProblem(const KernelTable& table, double d, double p, bool symmetric)
        : table_(table), d_(d), p_(p), symmetric_(symmetric), h_(table.h()) {
        const Grid& g = table.grid();
        interior_.resize(g.interior_count);
        std::iota(interior_.begin(), interior_.end(), g.first_interior);
    }

    Iterate project(std::vector<double> v) const {
        if (symmetric_) {
            const std::size_t n = v.size();
            for (std::size_t i = 0; i < n / 2; ++i) {
                const double avg = 0.5 * (v[i] + v[n - 1 - i]);
                v[i] = avg;
                v[n - 1 - i] = avg;
            }
        }
        double amp = 0.0;
        for (double x : v) amp = std::max(amp, std::abs(x));
        if (!(amp >= 1e-10)) throw ConvergenceError("trivial limit: iterate collapsed to zero", {});

        const std::vector<double> op = interior_op(v);
        double quad = 0.0, mass = 0.0, pot = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i) {
            quad += v[i] * op[i];
            mass += v[i] * v[i];
            pot += std::pow(std::abs(v[i]), p_ + 1.0);
        }
        quad = d_ * h_ * quad + h_ * mass;
        pot *= h_;
        const double t = std::pow(quad / pot, 1.0 / (p_ - 1.0));
        Iterate it;
        it.u = std::move(v);
        it.op = op;
        for (std::size_t i = 0; i < it.u.size(); ++i) {
            it.u[i] *= t;
            it.op[i] *= t;
        }
        it.M = (0.5 - 1.0 / (p_ + 1.0)) * std::pow(t, p_ + 1.0) * pot;
        return it;
    }

    std::vector<double> gradient(const Iterate& it) const {
        std::vector<double> g(it.u.size());
        for (std::size_t i = 0; i < g.size(); ++i) {
            g[i] = d_ * it.op[i] + it.u[i] - std::pow(std::abs(it.u[i]), p_ - 1.0) * it.u[i];
        }
        return g;
    }

    double h() const { return h_; }

private:
    std::vector<double> interior_op(std::span<const double> v) const {
        const Grid& g = table_.grid();
        std::vector<double> full;
        if (g.layout == Layout::neumann) {
            const ExtendedField ext = extend(v, table_);
            full.assign(ext.values().begin(), ext.values().end());
        } else {
            full.assign(v.begin(), v.end());
        }
        if (g.size() <= KernelTable::dense_limit) return frac_laplacian_apply(full, table_, interior_);
        std::vector<double> op = frac_laplacian_apply(full, table_);
        return {op.begin() + static_cast<std::ptrdiff_t>(g.first_interior),
                op.begin() + static_cast<std::ptrdiff_t>(g.end_interior())};
    }

    const KernelTable& table_;
    double d_, p_;
    bool symmetric_;
    double h_;
    std::vector<std::size_t> interior_;
};

double relative_variance(std::span<const double> u) {
    double mean = 0.0;
    for (double v : u) mean += v;
    mean /= static_cast<double>(u.size());
    double var = 0.0;
    for (double v : u) var += (v - mean) * (v - mean);
    var /= static_cast<double>(u.size());
    return var / (mean * mean);
}

struct DescentOutcome {
    Iterate last;
    double residual = 0.0;
    int iterations = 0;
    bool flattened = false;
    std::vector<double> energies;
};

/// residual_of(g, u) is the stopping measure; flatten_check enables the
/// constant-branch exit.
template <class Residual>
DescentOutcome descend(const RayProblem& prob, std::vector<double> start, const SolverConfig& config,
                       Residual residual_of, bool flatten_check) {
    DescentOutcome out;
    Iterate cur = prob.project(std::move(start));
    out.energies.push_back(cur.M);
    std::vector<double> history;
    std::vector<double> prev_u, prev_g;
    double tau = config.step;
    const double h = prob.h();

    for (int it = 0;; ++it) {
        const std::vector<double> g = prob.gradient(cur);
        const double r = residual_of(g, cur.u);
        history.push_back(r);
        if (r < config.tol_residual) {
            out.residual = r;
            out.iterations = it;
            break;
        }
        if (flatten_check && relative_variance(cur.u) < constant_variance) {
            out.residual = r;
            out.iterations = it;
            out.flattened = true;
            break;
        }
        if (it >= config.max_iters) {
            throw ConvergenceError(
                fmt::format("descent did not converge in {} iterations (residual {:.3e})", config.max_iters, r),
                std::move(history));
        }
        if (!prev_g.empty()) {
            double ss = 0.0, sy = 0.0;
            for (std::size_t i = 0; i < g.size(); ++i) {
                const double si = cur.u[i] - prev_u[i];
                ss += si * si;
                sy += si * (g[i] - prev_g[i]);
            }
            if (sy > 0.0) tau = ss / sy;
        }
        double gg = 0.0;
        for (double gi : g) gg += gi * gi;
        gg *= h;

        Iterate trial;
        while (true) {
            std::vector<double> v(cur.u.size());
            for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::abs(cur.u[i] - tau * g[i]);
            trial = prob.project(std::move(v));
            if (trial.M <= cur.M - armijo_c * tau * gg + armijo_slack * std::abs(cur.M) || tau < min_step) break;
            tau *= config.backtrack;
        }
        prev_u = std::move(cur.u);
        prev_g = g;
        cur = std::move(trial);
        out.energies.push_back(cur.M);
    }
    out.last = std::move(cur);
    return out;
}

double fit_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
    const double n = static_cast<double>(xs.size());
    const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
    const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    return sxy / sxx;
}

}  // namespace

double decay_exponent(const Grid& grid, std::span<const double> w, double lo, double hi) {
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double ax = std::abs(grid.nodes[i]);
        if (ax >= lo && ax <= hi && w[i] > 0.0) {
            xs.push_back(std::log(ax));
            ys.push_back(std::log(w[i]));
        }
    }
    if (xs.size() < 2) throw PreconditionError("decay_exponent: fewer than two nodes in the fit window");
    return -fit_slope(xs, ys);
}

double GroundStateResult::evaluate(double y) const {
    const double ay = std::abs(y);
    const std::size_t half = grid.size() / 2;
    const double x0 = grid.nodes[half];
    const double xl = grid.nodes.back();
    if (ay <= x0) return w[half];
    if (ay >= xl) return w.back() * std::pow(xl / ay, 1.0 + 2.0 * s);
    const double pos = (ay - x0) / grid.h;
    const auto k = std::min(static_cast<std::size_t>(pos), grid.size() - half - 2);
    const double t = pos - static_cast<double>(k);
    return (1.0 - t) * w[half + k] + t * w[half + k + 1];
}

GroundStateResult solve_ground_state(const Params& params, const WindowConfig& window, const SolverConfig& config,
                                     int workers) {
    params.validate_whole_space();
    config.validate();
    if (window.half_width < 40.0) throw PreconditionError("solve_ground_state: window half-width must be >= 40");
    Params unit = params;
    unit.d = 1.0;
    const Grid grid = build_window(window.half_width, window.h);
    const KernelTable table(grid, unit, workers);
    const RayProblem prob(table, 1.0, params.p, true);

    std::vector<double> start(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) start[i] = std::exp(-grid.nodes[i] * grid.nodes[i]);

    const double inner = 0.5 * window.half_width;
    auto residual = [&](const std::vector<double>& g, const std::vector<double>&) {
        double r = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) {
            if (std::abs(grid.nodes[i]) <= inner) r = std::max(r, std::abs(g[i]));
        }
        return r;
    };
    DescentOutcome out = descend(prob, std::move(start), config, residual, false);

    GroundStateResult res;
    res.grid = grid;
    res.w = std::move(out.last.u);
    res.s = params.s;
    res.iterations = out.iterations;
    res.residual = out.residual;
    res.F_value = F_energy(res.w, unit, table);
    res.pohozaev_residual = pohozaev_relative(res.w, unit, table);
    res.decay_exponent_fit = decay_exponent(grid, res.w, 10.0, 30.0);
    const std::size_t n = res.w.size();
    for (std::size_t i = 0; i < n; ++i) {
        res.symmetric_error = std::max(res.symmetric_error, std::abs(res.w[i] - res.w[n - 1 - i]));
    }
    return res;
}

std::vector<double> gaussian_bump(const Grid& grid, double x0, double width) {
    std::vector<double> u;
    u.reserve(grid.interior_count);
    for (double x : grid.interior_nodes()) {
        const double z = (x - x0) / width;
        u.push_back(1.0 + 2.0 * std::exp(-z * z));
    }
    return u;
}

std::vector<double> transplant(const GroundStateResult& gs, const Grid& grid, const Params& params, double x0) {
    const double eps = params.intrinsic_length();
    std::vector<double> u;
    u.reserve(grid.interior_count);
    for (double x : grid.interior_nodes()) u.push_back(gs.evaluate((x - x0) / eps));
    return u;
}

LeastEnergyResult solve_least_energy(const Params& params, const KernelTable& table, const SolverConfig& config,
                                     std::span<const double> initial) {
    params.validate_neumann();
    config.validate();
    const Grid& grid = table.grid();
    if (grid.layout != Layout::neumann) throw PreconditionError("solve_least_energy: needs a Neumann grid");
    const double eps = params.intrinsic_length();
    if (grid.h > eps / 10.0 * (1.0 + 1e-12)) {
        throw PreconditionError(
            fmt::format("solve_least_energy: h = {:.3g} does not resolve d^(1/2s) = {:.3g} (need h <= {:.3g})",
                        grid.h, eps, eps / 10.0));
    }
    std::vector<double> start;
    if (!initial.empty()) {
        if (initial.size() != grid.interior_count) {
            throw PreconditionError("solve_least_energy: initial field size does not match the interior");
        }
        start.assign(initial.begin(), initial.end());
    } else if (config.init == SolverConfig::Init::gaussian_bump) {
        start = gaussian_bump(grid, grid.a, std::min(eps, grid.b - grid.a));
    } else {
        throw PreconditionError(fmt::format("solve_least_energy: init {} needs an initial field", to_string(config.init)));
    }

    const RayProblem prob(table, params.d, params.p, false);
    const double h = grid.h;
    auto residual = [h](const std::vector<double>& g, const std::vector<double>& u) {
        double sup = 0.0, l1 = 0.0, mass = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) {
            sup = std::max(sup, std::abs(g[i]));
            l1 += std::abs(g[i]);
            mass += u[i];
        }
        return std::max(sup, h * l1 / (h * mass));
    };
    DescentOutcome out = descend(prob, std::move(start), config, residual, true);

    // A flattened iterate, or a critical point above the constant solution,
    // reports the constant solution u = 1.
    const double constant_energy = (grid.b - grid.a) * (0.5 - 1.0 / (params.p + 1.0));
    const bool constant = out.flattened || out.last.M >= constant_energy;
    std::vector<double> u_int = std::move(out.last.u);
    if (constant) std::fill(u_int.begin(), u_int.end(), 1.0);

    ExtendedField u = extend(u_int, table);
    const EnergyBreakdown e = J_d(u, params, table);
    const double quadratic = e.seminorm_term + e.mass_term;
    const double potential = e.potential_term * (params.p + 1.0);
    double sum_u = 0.0, sum_up = 0.0;
    for (double v : u.interior()) {
        sum_u += v;
        sum_up += std::pow(v, params.p);
    }
    const auto interior = u.interior();
    const auto top = std::max_element(interior.begin(), interior.end());
    const auto imax = static_cast<std::size_t>(top - interior.begin());

    LeastEnergyResult res(std::move(u));
    res.c_d = e.total;
    res.M_d = *top;
    res.argmax_x = grid.interior_nodes()[imax];
    res.nehari_residual = std::abs(quadratic - potential) / quadratic;
    res.flux_residual = std::abs(h * sum_u - h * sum_up) / (h * sum_u);
    res.residual = out.residual;
    res.iterations = out.iterations;
    res.constant_branch = constant;
    res.init = initial.empty() ? SolverConfig::Init::gaussian_bump : config.init;
    res.energy_history = std::move(out.energies);
    return res;
}

Grid GridPolicy::grid_for(double d, double s) const {
    const double eps = std::pow(d, 1.0 / (2.0 * s));
    return build_grid(a, b, std::min(h_max, eps / resolution), r_ext_factor * (b - a));
}

SweepRecord make_record(const LeastEnergyResult& result, const Params& params, const KernelTable& table) {
    const Grid& g = table.grid();
    const double h = g.h;
    SweepRecord r;
    r.d = params.d;
    r.c_d = result.c_d;
    r.sup_u = result.M_d;
    r.argmax_x = result.argmax_x;
    r.dist_boundary = std::min(result.argmax_x - g.a, g.b - result.argmax_x);
    auto integral = [&](double q) {
        double acc = 0.0;
        for (double v : result.u.interior()) acc += std::pow(v, q);
        return h * acc;
    };
    r.L0_5 = integral(0.5);
    r.L1 = integral(1.0);
    r.L2 = integral(2.0);
    r.Lp1 = integral(params.p + 1.0);
    r.L4 = integral(4.0);
    r.nehari_residual = result.nehari_residual;
    r.flux_residual = result.flux_residual;
    r.constant_branch = result.constant_branch;
    r.h = h;
    return r;
}

std::vector<SweepRecord> sweep(std::span<const double> d_values, const Params& params, const GridPolicy& policy,
                               const SolverConfig& config, const GroundStateResult* ground, int workers,
                               const SweepObserver& observer) {
    for (std::size_t i = 1; i < d_values.size(); ++i) {
        if (!(d_values[i] < d_values[i - 1])) throw PreconditionError("sweep: d values must be strictly decreasing");
    }
    std::vector<SweepRecord> records;
    Grid prev_grid;
    std::vector<double> prev_u;
    for (double d : d_values) {
        Params pd = params;
        pd.d = d;
        SolverConfig cfg = config;
        try {
            const Grid grid = policy.grid_for(d, params.s);
            const KernelTable table(grid, pd, workers);
            std::vector<double> start;
            if (!prev_u.empty()) {
                start = interpolate_interior(prev_grid, prev_u, grid);
                cfg.init = SolverConfig::Init::warm_start;
            } else if (ground != nullptr) {
                start = transplant(*ground, grid, pd, grid.a);
                cfg.init = SolverConfig::Init::transplanted_ground_state;
            } else {
                cfg.init = SolverConfig::Init::gaussian_bump;
            }
            LeastEnergyResult res = solve_least_energy(pd, table, cfg, start);
            records.push_back(make_record(res, pd, table));
            if (observer) observer(records.back(), res, table);
            if (res.constant_branch) {
                prev_u.clear();
            } else {
                prev_grid = grid;
                prev_u.assign(res.u.interior().begin(), res.u.interior().end());
            }
        } catch (const Error& e) {
            throw SweepError(fmt::format("sweep failed at d = {:.6g}: {}", d, e.what()), std::move(records));
        }
    }
    return records;
}

}  // namespace fracneumann
