#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "fracneumann/grid.hpp"
#include "fracneumann/params.hpp"

namespace fracneumann {

namespace detail {
class ToeplitzConvolver;
}

/// c_{n,s} = (∫_{R^n} (1 - cos x_1)/|x|^{n+2s} dx)^{-1}, by adaptive
/// quadrature to ~1e-10 relative accuracy.
///
/// Requires n >= 1, 0 < s < 1 and n >= 2s. Throws ConvergenceError if the
/// quadrature cannot reach its tolerance.
double normalizing_constant(int n, double s);

/// Sum over k >= 1 of ∫_{k-1/2}^{k+1/2} (t^2 - k^2) t^{-1-2s} dt.
///
/// This is the second-order error of replacing u by its cell value in each
/// off-diagonal cell; folding it into the diagonal rule makes the discrete
/// operator exact on quadratics.
double quadratic_defect_sum(double s);

/// Kernel weights for a uniform grid, stored as a Toeplitz profile.
///
/// Two families of weights are kept:
///  - cell_integral(i, j) = ∫_{cell j} |x_i - y|^{-(1+2s)} dy, exactly;
///  - weight(i, j), the operator weight: the cell integral plus, for
///    |i - j| = 1, the principal-value coefficient divided by h^2.
/// The discrete operator is
///   c_{n,s} [ Σ_j weight(i,j)(u_i - u_j) + tail_left(i)(u_i - v_L)
///             + tail_right(i)(u_i - v_R) ]
/// where v_L, v_R are the far-field values of the layout (zero for a
/// whole-space window, tail-weighted interior means for a Neumann grid).
class KernelTable {
public:
    KernelTable(const Grid& grid, const Params& params, int workers = 1);

    const Grid& grid() const noexcept { return grid_; }
    double c_ns() const noexcept { return c_ns_; }
    double s() const noexcept { return s_; }
    double h() const noexcept { return grid_.h; }
    std::size_t size() const noexcept { return grid_.size(); }
    int workers() const noexcept { return workers_; }

    double cell_integral(std::size_t i, std::size_t j) const;
    double weight(std::size_t i, std::size_t j) const;
    /// Weight profile indexed by |i - j|; entry 0 is zero.
    std::span<const double> weight_profile() const noexcept { return profile_; }
    /// Own-cell coefficient D: the own cell contributes -D (u_{i+1} - 2u_i + u_{i-1})/h^2.
    double pv_coefficient() const noexcept { return pv_coefficient_; }

    /// Kernel mass beyond the left/right grid edge, R^{-2s}/(2s) (not scaled by c_{n,s}).
    double tail_left(std::size_t i) const { return tail_left_[i]; }
    double tail_right(std::size_t i) const { return tail_right_[i]; }
    /// Σ_j weight(i, j) over every grid node.
    double row_sum(std::size_t i) const { return row_sum_[i]; }
    /// Σ_{j interior} weight(x, j); meaningful for any node.
    double interior_mass(std::size_t x) const { return interior_mass_[x]; }

    /// out_i = Σ_j weight(i, j) in_j for every node. Dense row sums (parallel
    /// over rows, fixed left-to-right order) up to dense_limit nodes, FFT above.
    void convolve(std::span<const double> in, std::span<double> out) const;

    /// Far-field values (v_L, v_R) implied by the layout for a full-grid field.
    std::pair<double, double> far_values(std::span<const double> u) const;

    /// Copy with every weight multiplied by factor (fault injection in tests).
    KernelTable scaled(double factor) const;

    static constexpr std::size_t dense_limit = 4096;

private:
    KernelTable() = default;
    void finish_setup();

    Grid grid_;
    double s_ = 0.0;
    double c_ns_ = 0.0;
    double pv_coefficient_ = 0.0;
    int workers_ = 1;
    std::vector<double> cell_profile_;
    std::vector<double> profile_;
    std::vector<double> tail_left_;
    std::vector<double> tail_right_;
    std::vector<double> row_sum_;
    std::vector<double> interior_mass_;
    double tail_left_total_ = 0.0;
    double tail_right_total_ = 0.0;
    std::shared_ptr<const detail::ToeplitzConvolver> convolver_;
};

/// Builds the table (n must be 1).
KernelTable kernel_weights(const Grid& grid, const Params& params, int workers = 1);

/// Discrete (-Δ)^s at the requested nodes, each evaluated by a direct sum.
std::vector<double> frac_laplacian_apply(std::span<const double> u, const KernelTable& table,
                                         std::span<const std::size_t> at);

/// Discrete (-Δ)^s at every node (uses KernelTable::convolve).
std::vector<double> frac_laplacian_apply(std::span<const double> u, const KernelTable& table);

}  // namespace fracneumann
