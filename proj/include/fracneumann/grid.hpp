#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace fracneumann {

enum class NodeLabel : std::uint8_t { interior, exterior };

/// How the region beyond the represented nodes is modelled.
enum class Layout : std::uint8_t {
    neumann,      ///< Ω = (a, b) with an exterior collar on each side
    whole_space,  ///< symmetric window [-L, L], zero beyond the window
};

/// Uniform cell-centred 1D grid.
///
/// Node i sits at the centre of the cell [x_i - h/2, x_i + h/2]. For the
/// Neumann layout the interior cells tile [a, b] exactly, so no node lies on
/// the boundary, and the collar cells tile [a - r_ext, a] and [b, b + r_ext].
struct Grid {
    double a = 0.0;
    double b = 1.0;
    double h = 0.0;
    double r_ext = 0.0;
    Layout layout = Layout::neumann;
    std::vector<double> nodes;
    std::vector<NodeLabel> labels;
    std::size_t first_interior = 0;
    std::size_t interior_count = 0;

    std::size_t size() const noexcept { return nodes.size(); }
    std::size_t end_interior() const noexcept { return first_interior + interior_count; }
    bool is_interior(std::size_t i) const noexcept { return labels[i] == NodeLabel::interior; }

    /// Outer faces of the first and last cell.
    double left_edge() const noexcept { return nodes.front() - 0.5 * h; }
    double right_edge() const noexcept { return nodes.back() + 0.5 * h; }

    std::span<const double> interior_nodes() const noexcept {
        return std::span<const double>(nodes).subspan(first_interior, interior_count);
    }
};

/// Neumann layout on (a, b) with a collar of half-width r_ext.
///
/// If (b - a)/h is not an integer the spacing is reduced to
/// (b - a)/ceil((b - a)/h) so that both endpoints are cell faces.
/// Throws PreconditionError when h >= (b - a)/8, r_ext < 2(b - a), or an
/// input is not finite.
Grid build_grid(double a, double b, double h, double r_ext);

/// Whole-space window [-half_width, half_width]; every node is interior.
Grid build_window(double half_width, double h);

/// Piecewise-linear interpolation of interior data onto another grid's
/// interior nodes. Values outside the source range are clamped to the end
/// values.
std::vector<double> interpolate_interior(const Grid& from, std::span<const double> from_interior,
                                         const Grid& to);

}  // namespace fracneumann
