#include "fracneumann/moser.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include <fmt/format.h>

#include "fracneumann/error.hpp"

namespace fracneumann {

namespace {

constexpr int c_star_range = 30;

/// x^a - y^a for x >= y >= 0, a > 0, without cancellation.
double power_gap(double x, double y, double a) {
    if (y == 0.0) return std::pow(x, a);
    return -std::pow(x, a) * std::expm1(a * std::log(y / x));
}

}  // namespace

void MoserParams::validate() const {
    if (n < 1 || !(s > 0.0 && s < 1.0) || !(n > 2.0 * s)) {
        throw PreconditionError(fmt::format("MoserParams: need n >= 1, 0 < s < 1, n > 2s (n = {}, s = {})", n, s));
    }
    const double ts = two_star();
    if (!(ts > 2.0)) throw PreconditionError("MoserParams: need 2* > 2");
    if (!(p > 1.0 && p < ts - 1.0)) {
        throw PreconditionError(fmt::format("MoserParams: need 1 < p < 2* - 1 = {}, got {}", ts - 1.0, p));
    }
    if (!(A > 0.0) || !(C0 > 0.0)) throw PreconditionError("MoserParams: A and C0 must be positive");
}

double L_closed_form(int j, const MoserParams& mp) {
    if (j < 0) throw PreconditionError("L_closed_form: j must be >= 0");
    const double ts = mp.two_star();
    return (std::pow(ts / 2.0, j + 1) * (ts - mp.p - 1.0) + mp.p - 1.0) / (ts - 2.0);
}

double L_recurrence(int j, const MoserParams& mp) {
    if (j < 0) throw PreconditionError("L_recurrence: j must be >= 0");
    const double ts = mp.two_star();
    double L = L_closed_form(0, mp);
    for (int i = 0; i < j; ++i) L = (ts * L - (mp.p - 1.0)) / 2.0;
    return L;
}

double moser_lambda(int j, const MoserParams& mp) {
    return mp.two_star() / 2.0 * std::log(mp.A * L_closed_form(j, mp));
}

double M_sequence(int j, const MoserParams& mp) {
    mp.validate();
    if (j < 0) throw PreconditionError("M_sequence: j must be >= 0");
    const double r = mp.two_star() / 2.0;
    double eta = r * std::log(mp.A * mp.C0);
    for (int i = 0; i < j; ++i) eta = r * eta + moser_lambda(i, mp);
    return eta;
}

double moser_c_star(const MoserParams& mp) {
    double c = -std::numeric_limits<double>::infinity();
    for (int j = 0; j <= c_star_range; ++j) c = std::max(c, moser_lambda(j, mp) / (j + 1));
    return c;
}

std::vector<MoserRow> moser_table(const MoserParams& mp, int jmax) {
    mp.validate();
    if (jmax < 0) throw PreconditionError("moser_table: jmax must be >= 0");
    const double r = mp.two_star() / 2.0;
    const double c_star = moser_c_star(mp);
    std::vector<MoserRow> rows;
    double eta = r * std::log(mp.A * mp.C0);
    double gamma = eta;
    for (int j = 0; j <= jmax; ++j) {
        MoserRow row;
        row.j = j;
        row.L = L_closed_form(j, mp);
        row.lambda = moser_lambda(j, mp);
        row.eta = eta;
        row.gamma = gamma;
        row.eta_over_L_prev = j == 0 ? std::numeric_limits<double>::quiet_NaN() : eta / L_closed_form(j - 1, mp);
        rows.push_back(row);
        eta = r * eta + row.lambda;
        gamma = r * gamma + c_star * (j + 1);
    }
    return rows;
}

MoserBound moser_bound_constant(const MoserParams& mp, int J) {
    if (J < 2) throw PreconditionError("moser_bound_constant: J must be >= 2");
    const auto rows = moser_table(mp, J);
    const double ts = mp.two_star();
    MoserBound b;
    b.c_star = moser_c_star(mp);
    b.m = -std::numeric_limits<double>::infinity();
    for (int j = 1; j <= J; ++j) b.m = std::max(b.m, rows[j].eta_over_L_prev);
    const double eta0 = rows[0].eta;
    b.limit = (ts - 2.0) * (eta0 + 2.0 * b.c_star * ts / ((ts - 2.0) * (ts - 2.0))) / (ts * (ts - mp.p - 1.0));
    const double L_prev = L_closed_form(J - 1, mp);
    b.gamma_ratio = rows[J].gamma / (ts * L_prev);
    b.eta_ratio = rows[J].eta / (ts * L_prev);
    return b;
}

double elementary_inequality_margin(double x, double y, double k) {
    if (!(x >= 0.0) || !(y >= 0.0) || !(k >= 1.0)) {
        throw PreconditionError("elementary_inequality_margin: need x, y >= 0 and k >= 1");
    }
    if (x == y) return 0.0;
    const double hi = std::max(x, y);
    const double lo = std::min(x, y);
    const double a = power_gap(hi, lo, 2.0 * k - 1.0);
    const double b = power_gap(hi, lo, k);
    return (hi - lo) * a - b * b / k;
}

double sobolev_constant_estimate(const KernelTable& table, int trials, std::uint64_t seed, double d0) {
    if (trials < 100) throw PreconditionError("sobolev_constant_estimate: trials must be >= 100");
    const Grid& g = table.grid();
    const std::size_t f = g.first_interior;
    const std::size_t e = g.end_interior();
    const double h = g.h;
    const double ts = 2.0 / (1.0 - 2.0 * table.s());
    const auto w = table.weight_profile();
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    constexpr int modes = 8;

    double best = 0.0;
    std::vector<double> v(e - f);
    for (int t = 0; t < trials; ++t) {
        if (t == 0) {
            std::fill(v.begin(), v.end(), 1.0);
        } else {
            double coef[modes];
            for (int m = 0; m < modes; ++m) coef[m] = normal(rng) / (1.0 + m * m);
            for (std::size_t i = 0; i < v.size(); ++i) {
                const double z = (g.nodes[f + i] - g.a) / (g.b - g.a);
                double acc = 0.0;
                for (int m = 0; m < modes; ++m) acc += coef[m] * std::cos(m * std::numbers::pi * z);
                v[i] = acc;
            }
        }
        double semi = 0.0, mass = 0.0, crit = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i) {
            for (std::size_t j = 0; j < v.size(); ++j) {
                if (i == j) continue;
                const double diff = v[i] - v[j];
                semi += w[i > j ? i - j : j - i] * diff * diff;
            }
            mass += v[i] * v[i];
            crit += std::pow(std::abs(v[i]), ts);
        }
        semi *= h;
        mass *= h;
        const double norm2 = std::pow(h * crit, 2.0 / ts);
        for (double d : {d0, d0 / 10.0, d0 / 100.0}) {
            const double ratio = norm2 * d / (d * table.c_ns() / 2.0 * semi + mass);
            best = std::max(best, ratio);
        }
    }
    return best;
}

}  // namespace fracneumann
