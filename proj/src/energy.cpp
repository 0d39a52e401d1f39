#include "fracneumann/energy.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "fracneumann/error.hpp"

namespace fracneumann {

namespace {

double direct_seminorm(std::span<const double> u, const KernelTable& table) {
    const Grid& g = table.grid();
    const std::size_t n = g.size();
    const std::size_t f = g.first_interior;
    const std::size_t e = g.end_interior();
    const auto w = table.weight_profile();
    const auto [vl, vr] = table.far_values(u);
    std::vector<double> rows(e - f, 0.0);
    const auto count = static_cast<std::ptrdiff_t>(e - f);
#pragma omp parallel for num_threads(table.workers()) schedule(static)
    for (std::ptrdiff_t q = 0; q < count; ++q) {
        const std::size_t i = f + static_cast<std::size_t>(q);
        const double ui = u[i];
        double acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            const double diff = ui - u[j];
            const double mult = (j >= f && j < e) ? 1.0 : 2.0;
            acc += mult * w[i > j ? i - j : j - i] * diff * diff;
        }
        acc += 2.0 * (table.tail_left(i) * (ui - vl) * (ui - vl) + table.tail_right(i) * (ui - vr) * (ui - vr));
        rows[static_cast<std::size_t>(q)] = acc;
    }
    double total = 0.0;
    for (double r : rows) total += r;
    return g.h * total;
}

/// (2h/c) Σ_Ω u_i (-Δ)^s u_i, valid when N_s u = 0 on the collar.
double operator_seminorm(std::span<const double> u, const KernelTable& table) {
    const Grid& g = table.grid();
    const auto op = frac_laplacian_apply(u, table);
    double acc = 0.0;
    for (std::size_t i = g.first_interior; i < g.end_interior(); ++i) acc += u[i] * op[i];
    return 2.0 * g.h * acc / table.c_ns();
}

double stationary_seminorm(std::span<const double> u, const KernelTable& table) {
    if (table.size() <= KernelTable::dense_limit) return direct_seminorm(u, table);
    return operator_seminorm(u, table);
}

double power_integral(std::span<const double> u, double h, double q) {
    double acc = 0.0;
    for (double v : u) acc += std::pow(std::abs(v), q);
    return h * acc;
}

double square_integral(std::span<const double> u, double h) {
    double acc = 0.0;
    for (double v : u) acc += v * v;
    return h * acc;
}

}  // namespace

double seminorm_T(const ExtendedField& u, const KernelTable& table) {
    if (u.size() != table.size()) throw PreconditionError("seminorm_T: field size does not match grid");
    return stationary_seminorm(u.values(), table);
}

double seminorm_T(std::span<const double> u, const KernelTable& table) {
    if (u.size() != table.size()) throw PreconditionError("seminorm_T: field size does not match grid");
    return direct_seminorm(u, table);
}

EnergyBreakdown J_d(const ExtendedField& u, const Params& params, const KernelTable& table) {
    const double h = table.h();
    EnergyBreakdown e;
    e.seminorm_term = params.d * table.c_ns() / 2.0 * seminorm_T(u, table);
    e.mass_term = square_integral(u.interior(), h);
    e.potential_term = power_integral(u.interior(), h, params.p + 1.0) / (params.p + 1.0);
    e.total = (e.seminorm_term + e.mass_term) / 2.0 - e.potential_term;
    return e;
}

double nehari_scale(const ExtendedField& u, const Params& params, const KernelTable& table) {
    const EnergyBreakdown e = J_d(u, params, table);
    const double potential = e.potential_term * (params.p + 1.0);
    if (!(potential > 0.0)) throw PreconditionError("nehari_scale: ∫|u|^{p+1} = 0 (degenerate direction)");
    const double quadratic = e.seminorm_term + e.mass_term;
    return std::pow(quadratic / potential, 1.0 / (params.p - 1.0));
}

double peak_energy(const ExtendedField& u, const Params& params, const KernelTable& table) {
    const double t0 = nehari_scale(u, params, table);
    const double potential = power_integral(u.interior(), table.h(), params.p + 1.0);
    return (0.5 - 1.0 / (params.p + 1.0)) * std::pow(t0, params.p + 1.0) * potential;
}

WholeSpaceTerms whole_space_terms(std::span<const double> u, const Params& params, const KernelTable& table) {
    if (table.grid().layout != Layout::whole_space) {
        throw PreconditionError("whole-space functional needs a whole-space window grid");
    }
    if (u.size() != table.size()) throw PreconditionError("whole-space functional: field size does not match grid");
    WholeSpaceTerms t;
    t.seminorm = stationary_seminorm(u, table);
    t.mass = square_integral(u, table.h());
    t.potential = power_integral(u, table.h(), params.p + 1.0);
    return t;
}

double F_energy(std::span<const double> u, const Params& params, const KernelTable& table) {
    const WholeSpaceTerms t = whole_space_terms(u, params, table);
    return 0.5 * (table.c_ns() / 2.0 * t.seminorm + t.mass) - t.potential / (params.p + 1.0);
}

namespace {

struct PohozaevTerms {
    double kinetic, mass, potential;
};

PohozaevTerms pohozaev_terms(std::span<const double> u, const Params& params, const KernelTable& table) {
    const WholeSpaceTerms t = whole_space_terms(u, params, table);
    const double n = params.n;
    return {(n - 2.0 * params.s) * table.c_ns() / 4.0 * t.seminorm, n / 2.0 * t.mass,
            n / (params.p + 1.0) * t.potential};
}

}  // namespace

double pohozaev(std::span<const double> u, const Params& params, const KernelTable& table) {
    const PohozaevTerms t = pohozaev_terms(u, params, table);
    return t.kinetic + t.mass - t.potential;
}

double pohozaev_relative(std::span<const double> u, const Params& params, const KernelTable& table) {
    const PohozaevTerms t = pohozaev_terms(u, params, table);
    const double scale = std::max({std::abs(t.kinetic), std::abs(t.mass), std::abs(t.potential)});
    if (scale == 0.0) return 0.0;
    return (t.kinetic + t.mass - t.potential) / scale;
}

}  // namespace fracneumann
