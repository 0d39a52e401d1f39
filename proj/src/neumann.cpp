#include "fracneumann/neumann.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "fracneumann/error.hpp"

namespace fracneumann {

double neumann_derivative(std::span<const double> u, const KernelTable& table, std::size_t x) {
    const Grid& g = table.grid();
    if (u.size() != g.size()) throw PreconditionError("neumann_derivative: field size does not match grid");
    if (x >= g.size()) throw PreconditionError(fmt::format("neumann_derivative: node {} outside grid", x));
    if (g.is_interior(x)) throw PreconditionError(fmt::format("neumann_derivative: node {} is interior", x));
    const auto w = table.weight_profile();
    double acc = 0.0;
    for (std::size_t j = g.first_interior; j < g.end_interior(); ++j) {
        acc += w[x > j ? x - j : j - x] * (u[x] - u[j]);
    }
    return table.c_ns() * acc;
}

ExtendedField extend(std::span<const double> u_int, const KernelTable& table) {
    const Grid& g = table.grid();
    if (u_int.size() != g.interior_count) {
        throw PreconditionError(fmt::format("extend: expected {} interior values, got {}", g.interior_count,
                                            u_int.size()));
    }
    const std::size_t n = g.size();
    const std::size_t f = g.first_interior;
    const std::size_t e = g.end_interior();
    std::vector<double> out(n, 0.0);
    std::copy(u_int.begin(), u_int.end(), out.begin() + static_cast<std::ptrdiff_t>(f));
    if (f == 0 && e == n) return ExtendedField(std::move(out), f, e - f);

    const auto [lo_it, hi_it] = std::minmax_element(u_int.begin(), u_int.end());
    const double lo = *lo_it;
    const double hi = *hi_it;
    double mean = 0.0;
    for (double v : u_int) mean += v;
    mean /= static_cast<double>(u_int.size());

    // Averages of deviations from the mean: constants are reproduced exactly.
    std::vector<double> numer(n, 0.0);
    if (n <= KernelTable::dense_limit) {
        const auto w = table.weight_profile();
        const auto nn = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for num_threads(table.workers()) schedule(static)
        for (std::ptrdiff_t xi = 0; xi < nn; ++xi) {
            const auto x = static_cast<std::size_t>(xi);
            if (x >= f && x < e) continue;
            double acc = 0.0;
            for (std::size_t j = f; j < e; ++j) acc += w[x > j ? x - j : j - x] * (u_int[j - f] - mean);
            numer[x] = acc;
        }
    } else {
        std::vector<double> dev(n, 0.0);
        for (std::size_t j = f; j < e; ++j) dev[j] = u_int[j - f] - mean;
        table.convolve(dev, numer);
    }
    for (std::size_t x = 0; x < n; ++x) {
        if (x >= f && x < e) continue;
        out[x] = std::clamp(mean + numer[x] / table.interior_mass(x), lo, hi);
    }
    return ExtendedField(std::move(out), f, e - f);
}

}  // namespace fracneumann
