#include "fracneumann/grid.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "fracneumann/error.hpp"

namespace fracneumann {

namespace {

std::size_t cells_covering(double length, double h) {
    // Tolerate representation error in ratios such as 1/0.01.
    return static_cast<std::size_t>(std::ceil(length / h - 1e-9));
}

}  // namespace

Grid build_grid(double a, double b, double h, double r_ext) {
    if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(h) || !std::isfinite(r_ext)) {
        throw PreconditionError("build_grid: non-finite input");
    }
    if (!(b > a)) throw PreconditionError(fmt::format("build_grid: need b > a, got [{}, {}]", a, b));
    if (!(h > 0.0)) throw PreconditionError("build_grid: need h > 0");
    if (h >= (b - a) / 8.0) {
        throw PreconditionError(
            fmt::format("build_grid: h = {} too coarse for (b - a) = {} (need h < (b - a)/8)", h, b - a));
    }
    if (r_ext < 2.0 * (b - a)) {
        throw PreconditionError(fmt::format("build_grid: need r_ext >= 2(b - a), got {}", r_ext));
    }

    Grid g;
    g.a = a;
    g.b = b;
    g.layout = Layout::neumann;
    const std::size_t n_int = cells_covering(b - a, h);
    g.h = (b - a) / static_cast<double>(n_int);
    const std::size_t n_side = cells_covering(r_ext, g.h);
    g.r_ext = static_cast<double>(n_side) * g.h;
    g.first_interior = n_side;
    g.interior_count = n_int;

    const std::size_t n = n_int + 2 * n_side;
    g.nodes.resize(n);
    g.labels.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        // Offsets measured from the nearer endpoint keep a and b exact faces.
        if (i < n_side + n_int) {
            g.nodes[i] = a + (static_cast<double>(i) - static_cast<double>(n_side) + 0.5) * g.h;
        } else {
            g.nodes[i] = b + (static_cast<double>(i - n_side - n_int) + 0.5) * g.h;
        }
        g.labels[i] = (g.nodes[i] > a && g.nodes[i] < b) ? NodeLabel::interior : NodeLabel::exterior;
    }
    return g;
}

Grid build_window(double half_width, double h) {
    if (!std::isfinite(half_width) || !std::isfinite(h) || !(half_width > 0.0) || !(h > 0.0)) {
        throw PreconditionError("build_window: need finite half_width > 0 and h > 0");
    }
    if (h >= half_width / 8.0) throw PreconditionError("build_window: h too coarse");

    Grid g;
    g.a = -half_width;
    g.b = half_width;
    g.layout = Layout::whole_space;
    const std::size_t half = cells_covering(half_width, h);
    g.h = half_width / static_cast<double>(half);
    g.r_ext = 0.0;
    const std::size_t n = 2 * half;
    g.first_interior = 0;
    g.interior_count = n;
    g.nodes.resize(n);
    g.labels.assign(n, NodeLabel::interior);
    for (std::size_t i = 0; i < half; ++i) {
        const double x = (static_cast<double>(i) + 0.5) * g.h;
        g.nodes[half + i] = x;
        g.nodes[half - 1 - i] = -x;
    }
    return g;
}

std::vector<double> interpolate_interior(const Grid& from, std::span<const double> from_interior,
                                         const Grid& to) {
    if (from_interior.size() != from.interior_count) {
        throw PreconditionError("interpolate_interior: data size does not match source grid");
    }
    const auto xs = from.interior_nodes();
    std::vector<double> out(to.interior_count);
    const auto targets = to.interior_nodes();
    for (std::size_t k = 0; k < targets.size(); ++k) {
        const double x = targets[k];
        if (x <= xs.front()) {
            out[k] = from_interior.front();
        } else if (x >= xs.back()) {
            out[k] = from_interior.back();
        } else {
            const auto it = std::upper_bound(xs.begin(), xs.end(), x);
            const std::size_t j = static_cast<std::size_t>(it - xs.begin());
            const double t = (x - xs[j - 1]) / (xs[j] - xs[j - 1]);
            out[k] = (1.0 - t) * from_interior[j - 1] + t * from_interior[j];
        }
    }
    return out;
}

}  // namespace fracneumann
