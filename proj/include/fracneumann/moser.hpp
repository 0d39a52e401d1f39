#pragma once

#include <cstdint>
#include <vector>

#include "fracneumann/kernel.hpp"

namespace fracneumann {

struct MoserParams {
    int n = 1;
    double s = 0.25;
    double p = 1.5;
    double A = 1.0;   ///< embedding constant
    double C0 = 1.0;  ///< energy constant of ∫u^{p+1} <= C0 d^{n/2s}

    double two_star() const noexcept { return 2.0 * n / (n - 2.0 * s); }
    /// Requires 2* > 2, 1 < p < 2* - 1, A > 0, C0 > 0.
    void validate() const;
};

/// L_j = (2* - 2)^{-1} [(2*/2)^{j+1}(2* - p - 1) + p - 1].
double L_closed_form(int j, const MoserParams& mp);

/// L_j from L_0 by p - 1 + 2 L_{j+1} = 2* L_j.
double L_recurrence(int j, const MoserParams& mp);

/// λ_j = (2*/2) log(A L_j).
double moser_lambda(int j, const MoserParams& mp);

/// η_j = log M_j: η_0 = (2*/2) log(A C0), η_{j+1} = (2*/2) η_j + λ_j.
double M_sequence(int j, const MoserParams& mp);

/// C* = max_{0 <= j <= 30} λ_j/(j + 1).
double moser_c_star(const MoserParams& mp);

struct MoserRow {
    int j = 0;
    double L = 0.0;
    double lambda = 0.0;
    double eta = 0.0;
    double gamma = 0.0;
    double eta_over_L_prev = 0.0;  ///< η_j/L_{j-1}; NaN at j = 0
};

/// Rows j = 0..jmax; γ_0 = η_0, γ_{j+1} = (2*/2)γ_j + C*(j + 1).
std::vector<MoserRow> moser_table(const MoserParams& mp, int jmax);

struct MoserBound {
    double m = 0.0;            ///< smallest m with η_j <= m L_{j-1}, 1 <= j <= J
    double limit = 0.0;        ///< (2*-2)(η_0 + 2C* 2*(2*-2)^{-2}) / (2*(2*-p-1))
    double gamma_ratio = 0.0;  ///< γ_J/(2* L_{J-1}), which tends to `limit`
    double eta_ratio = 0.0;    ///< η_J/(2* L_{J-1})
    double c_star = 0.0;
};

MoserBound moser_bound_constant(const MoserParams& mp, int J);

/// (x - y)(x^{2k-1} - y^{2k-1}) - (1/k)(x^k - y^k)^2 for x, y >= 0, k >= 1.
double elementary_inequality_margin(double x, double y, double k);

/// Running maximum over random smooth trial fields on Ω of
/// ‖v‖²_{L^{2*}} d / (d c/2 ∬_{Ω×Ω} + ∫v²) for d in {d0, d0/10, d0/100}.
/// The first trial is v = 1. Needs trials >= 100.
double sobolev_constant_estimate(const KernelTable& table, int trials, std::uint64_t seed, double d0 = 1.0);

}  // namespace fracneumann
