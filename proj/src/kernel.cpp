#include "fracneumann/kernel.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>

#include <fmt/format.h>
#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>
#include <gsl/gsl_sf_gamma.h>

#include "convolution.hpp"
#include "fracneumann/error.hpp"

namespace fracneumann {

namespace {

constexpr double quad_rel_tol = 1e-11;
constexpr std::size_t quad_limit = 1000;

struct GslWorkspace {
    explicit GslWorkspace(std::size_t n) : w(gsl_integration_workspace_alloc(n)) {}
    ~GslWorkspace() { gsl_integration_workspace_free(w); }
    GslWorkspace(const GslWorkspace&) = delete;
    GslWorkspace& operator=(const GslWorkspace&) = delete;
    gsl_integration_workspace* w;
};

void check_quad(int status, double result, double abserr, const char* what) {
    if (status != GSL_SUCCESS || !(std::abs(abserr) <= 1e-8 * std::abs(result))) {
        throw ConvergenceError(fmt::format("normalizing_constant: {} quadrature failed ({}), achieved "
                                           "relative accuracy {:.3g}",
                                           what, gsl_strerror(status), std::abs(abserr / result)),
                               {std::abs(abserr / result)});
    }
}

/// ∫_R (1 - cos x)|x|^{-1-2s} dx.
double one_dim_integral(double s) {
    GslWorkspace ws(quad_limit);
    GslWorkspace cycle(quad_limit);
    double near = 0.0, near_err = 0.0;
    double far = 0.0, far_err = 0.0;

    auto near_fn = [](double x, void* params) {
        const double ss = *static_cast<double*>(params);
        const double sh = std::sin(0.5 * x);
        return 2.0 * sh * sh * std::pow(x, -1.0 - 2.0 * ss);
    };
    auto far_fn = [](double x, void* params) {
        const double ss = *static_cast<double*>(params);
        return std::pow(x, -1.0 - 2.0 * ss);
    };
    double sp = s;
    gsl_function f_near{+near_fn, &sp};
    gsl_function f_far{+far_fn, &sp};

    int status = gsl_integration_qags(&f_near, 0.0, 1.0, 0.0, quad_rel_tol, quad_limit, ws.w, &near, &near_err);
    check_quad(status, near, near_err, "near-field");

    gsl_integration_qawo_table* table = gsl_integration_qawo_table_alloc(1.0, 1.0, GSL_INTEG_COSINE, 50);
    status = gsl_integration_qawf(&f_far, 1.0, 1e-14, quad_limit, ws.w, cycle.w, table, &far, &far_err);
    gsl_integration_qawo_table_free(table);
    if (status != GSL_SUCCESS || !(far_err <= 1e-12)) {
        throw ConvergenceError(fmt::format("normalizing_constant: oscillatory tail quadrature failed ({}), "
                                           "achieved absolute accuracy {:.3g}",
                                           gsl_strerror(status), far_err),
                               {far_err});
    }
    // ∫_1^∞ (1 - cos x) x^{-1-2s} = 1/(2s) - ∫_1^∞ cos x x^{-1-2s}.
    return 2.0 * (near + 1.0 / (2.0 * s) - far);
}

/// ∫_{R^{n-1}} (1 + |z|^2)^{-(n+2s)/2} dz.
double transverse_integral(int n, double s) {
    if (n == 1) return 1.0;
    GslWorkspace ws(quad_limit);
    struct P {
        int n;
        double s;
    } prm{n, s};
    auto fn = [](double r, void* params) {
        const auto* q = static_cast<P*>(params);
        return std::pow(r, q->n - 2) * std::pow(1.0 + r * r, -0.5 * (q->n + 2.0 * q->s));
    };
    gsl_function f{+fn, &prm};
    double radial = 0.0, err = 0.0;
    const int status = gsl_integration_qagiu(&f, 0.0, 0.0, quad_rel_tol, quad_limit, ws.w, &radial, &err);
    check_quad(status, radial, err, "transverse");
    const double k = n - 1;
    const double sphere = 2.0 * std::pow(std::numbers::pi, 0.5 * k) / std::tgamma(0.5 * k);
    return sphere * radial;
}

/// Σ_{k=lo}^{hi} ((k - 1/2)^{-2s} - (k + 1/2)^{-2s})/(2s), without cancellation.
double unit_cell_sum(std::size_t lo, std::size_t hi, double s) {
    if (hi < lo) return 0.0;
    const double top = static_cast<double>(hi) + 0.5;
    const double span = static_cast<double>(hi - lo + 1);
    return std::pow(top, -2.0 * s) * std::expm1(-2.0 * s * std::log1p(-span / top)) / (2.0 * s);
}

double compute_quadratic_defect_sum(double s) {
    constexpr std::size_t order = 20;
    constexpr std::size_t k_max = std::size_t{1} << 17;
    gsl_integration_glfixed_table* gl = gsl_integration_glfixed_table_alloc(order);
    std::vector<std::pair<double, double>> half;  // (σ > 0, weight) on [-1/2, 1/2]
    for (std::size_t i = 0; i < order; ++i) {
        double xi = 0.0, wi = 0.0;
        gsl_integration_glfixed_point(-0.5, 0.5, i, &xi, &wi, gl);
        if (xi > 0.0) half.emplace_back(xi, wi);
    }
    gsl_integration_glfixed_table_free(gl);

    const double q = -1.0 - 2.0 * s;
    double total = 0.0;
    // Smallest terms first.
    for (std::size_t kk = k_max; kk >= 1; --kk) {
        const double k = static_cast<double>(kk);
        const double kq = std::pow(k, q);
        double term = 0.0;
        for (const auto& [sigma, w] : half) {
            const double r = sigma / k;
            const double ep = std::expm1(q * std::log1p(r));
            const double em = std::expm1(q * std::log1p(-r));
            // f(σ) + f(-σ) with f(σ) = (2kσ + σ²)(k + σ)^q.
            const double even = sigma * sigma * (2.0 + ep + em);
            const double odd = 2.0 * k * sigma * (ep - em);
            term += w * kq * (even + odd);
        }
        total += term;
    }
    const double tail_start = static_cast<double>(k_max) + 0.5;
    total += -(1.0 + 4.0 * s) / 12.0 * std::pow(tail_start, -2.0 * s) / (2.0 * s);
    return total;
}

}  // namespace

double normalizing_constant(int n, double s) {
    if (n < 1) throw PreconditionError(fmt::format("normalizing_constant: need n >= 1, got {}", n));
    if (!(s > 0.0 && s < 1.0)) throw PreconditionError(fmt::format("normalizing_constant: need 0 < s < 1, got {}", s));
    if (!(n >= 2.0 * s)) {
        throw PreconditionError(fmt::format("normalizing_constant: n > 2s violated (n = {}, s = {})", n, s));
    }
    gsl_error_handler_t* old = gsl_set_error_handler_off();
    double value = 0.0;
    try {
        value = 1.0 / (one_dim_integral(s) * transverse_integral(n, s));
    } catch (...) {
        gsl_set_error_handler(old);
        throw;
    }
    gsl_set_error_handler(old);
    return value;
}

double quadratic_defect_sum(double s) {
    static std::mutex mutex;
    static std::map<double, double> cache;
    {
        std::lock_guard lock(mutex);
        if (auto it = cache.find(s); it != cache.end()) return it->second;
    }
    const double value = compute_quadratic_defect_sum(s);
    std::lock_guard lock(mutex);
    cache.emplace(s, value);
    return value;
}

KernelTable::KernelTable(const Grid& grid, const Params& params, int workers) {
    params.validate_common();
    if (params.n != 1) throw PreconditionError("kernel_weights: only n = 1 grids are supported");
    if (grid.size() < 2 || !(grid.h > 0.0)) throw PreconditionError("kernel_weights: invalid grid");
    grid_ = grid;
    s_ = params.s;
    workers_ = std::max(workers, 1);
    c_ns_ = normalizing_constant(1, s_);

    const double h = grid_.h;
    const std::size_t n = grid_.size();
    const double scale = std::pow(h, -2.0 * s_);
    pv_coefficient_ = std::pow(0.5 * h, 2.0 - 2.0 * s_) / (2.0 - 2.0 * s_) +
                      std::pow(h, 2.0 - 2.0 * s_) * quadratic_defect_sum(s_);

    cell_profile_.assign(n, 0.0);
    for (std::size_t k = 1; k < n; ++k) cell_profile_[k] = scale * unit_cell_sum(k, k, s_);
    profile_ = cell_profile_;
    profile_[1] += pv_coefficient_ / (h * h);

    tail_left_.resize(n);
    tail_right_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double dl = (static_cast<double>(i) + 0.5) * h;
        const double dr = (static_cast<double>(n - 1 - i) + 0.5) * h;
        tail_left_[i] = std::pow(dl, -2.0 * s_) / (2.0 * s_);
        tail_right_[i] = std::pow(dr, -2.0 * s_) / (2.0 * s_);
    }

    // Row sums and interior masses from the closed-form cell sums.
    const double adj = pv_coefficient_ / (h * h);
    const std::size_t f = grid_.first_interior;
    const std::size_t e = grid_.end_interior();
    row_sum_.resize(n);
    interior_mass_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t left = i;
        const std::size_t right = n - 1 - i;
        row_sum_[i] = scale * (unit_cell_sum(1, left, s_) + unit_cell_sum(1, right, s_)) +
                      adj * static_cast<double>((left > 0) + (right > 0));
        if (i < f) {
            interior_mass_[i] = scale * unit_cell_sum(f - i, e - 1 - i, s_) + (f - i == 1 ? adj : 0.0);
        } else if (i >= e) {
            interior_mass_[i] = scale * unit_cell_sum(i - e + 1, i - f, s_) + (i - e + 1 == 1 ? adj : 0.0);
        } else {
            const std::size_t nl = i - f;
            const std::size_t nr = e - 1 - i;
            interior_mass_[i] = scale * (unit_cell_sum(1, nl, s_) + unit_cell_sum(1, nr, s_)) +
                                adj * static_cast<double>((nl > 0) + (nr > 0));
        }
    }
    finish_setup();
}

void KernelTable::finish_setup() {
    tail_left_total_ = 0.0;
    tail_right_total_ = 0.0;
    for (std::size_t i = grid_.first_interior; i < grid_.end_interior(); ++i) {
        tail_left_total_ += tail_left_[i];
        tail_right_total_ += tail_right_[i];
    }
    convolver_ = std::make_shared<const detail::ToeplitzConvolver>(profile_, dense_limit);
}

double KernelTable::cell_integral(std::size_t i, std::size_t j) const {
    if (i >= size() || j >= size()) throw PreconditionError("cell_integral: index outside grid");
    if (i == j) return std::numeric_limits<double>::infinity();
    return cell_profile_[i > j ? i - j : j - i];
}

double KernelTable::weight(std::size_t i, std::size_t j) const {
    if (i >= size() || j >= size()) throw PreconditionError("weight: index outside grid");
    return profile_[i > j ? i - j : j - i];
}

void KernelTable::convolve(std::span<const double> in, std::span<double> out) const {
    convolver_->apply(in, out, workers_);
}

std::pair<double, double> KernelTable::far_values(std::span<const double> u) const {
    if (u.size() != size()) throw PreconditionError("far_values: field size does not match grid");
    if (grid_.layout == Layout::whole_space) return {0.0, 0.0};
    // Mean taken relative to a reference value so constants come back exactly.
    const std::size_t f = grid_.first_interior;
    const double ref = u[f];
    double sl = 0.0, sr = 0.0;
    for (std::size_t i = f; i < grid_.end_interior(); ++i) {
        sl += tail_left_[i] * (u[i] - ref);
        sr += tail_right_[i] * (u[i] - ref);
    }
    return {ref + sl / tail_left_total_, ref + sr / tail_right_total_};
}

KernelTable KernelTable::scaled(double factor) const {
    KernelTable t;
    t.grid_ = grid_;
    t.s_ = s_;
    t.c_ns_ = c_ns_;
    t.workers_ = workers_;
    t.pv_coefficient_ = pv_coefficient_ * factor;
    auto mul = [factor](std::vector<double> v) {
        for (double& x : v) x *= factor;
        return v;
    };
    t.cell_profile_ = mul(cell_profile_);
    t.profile_ = mul(profile_);
    t.tail_left_ = mul(tail_left_);
    t.tail_right_ = mul(tail_right_);
    t.row_sum_ = mul(row_sum_);
    t.interior_mass_ = mul(interior_mass_);
    t.finish_setup();
    return t;
}

KernelTable kernel_weights(const Grid& grid, const Params& params, int workers) {
    return KernelTable(grid, params, workers);
}

std::vector<double> frac_laplacian_apply(std::span<const double> u, const KernelTable& table,
                                         std::span<const std::size_t> at) {
    const std::size_t n = table.size();
    if (u.size() != n) throw PreconditionError("frac_laplacian_apply: field size does not match grid");
    for (std::size_t i : at) {
        if (i >= n) throw PreconditionError(fmt::format("frac_laplacian_apply: node {} outside grid", i));
    }
    const auto [vl, vr] = table.far_values(u);
    const auto w = table.weight_profile();
    const double c = table.c_ns();
    std::vector<double> out(at.size());
    const auto count = static_cast<std::ptrdiff_t>(at.size());
#pragma omp parallel for num_threads(table.workers()) schedule(static)
    for (std::ptrdiff_t q = 0; q < count; ++q) {
        const std::size_t i = at[static_cast<std::size_t>(q)];
        const double ui = u[i];
        double acc = 0.0;
        for (std::size_t j = 0; j < i; ++j) acc += w[i - j] * (ui - u[j]);
        for (std::size_t j = i + 1; j < n; ++j) acc += w[j - i] * (ui - u[j]);
        acc += table.tail_left(i) * (ui - vl) + table.tail_right(i) * (ui - vr);
        out[static_cast<std::size_t>(q)] = c * acc;
    }
    return out;
}

std::vector<double> frac_laplacian_apply(std::span<const double> u, const KernelTable& table) {
    const std::size_t n = table.size();
    if (u.size() != n) throw PreconditionError("frac_laplacian_apply: field size does not match grid");
    if (n <= KernelTable::dense_limit) {
        std::vector<std::size_t> all(n);
        for (std::size_t i = 0; i < n; ++i) all[i] = i;
        return frac_laplacian_apply(u, table, all);
    }
    const auto [vl, vr] = table.far_values(u);
    std::vector<double> out(n);
    table.convolve(u, out);
    const double c = table.c_ns();
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = c * (table.row_sum(i) * u[i] - out[i] + table.tail_left(i) * (u[i] - vl) +
                      table.tail_right(i) * (u[i] - vr));
    }
    return out;
}

}  // namespace fracneumann
