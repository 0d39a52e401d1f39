#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "fracneumann/kernel.hpp"

namespace fracneumann {

/// Full-grid field whose exterior values were produced by extend().
class ExtendedField {
public:
    std::span<const double> values() const noexcept { return values_; }
    std::span<const double> interior() const noexcept {
        return std::span<const double>(values_).subspan(first_, count_);
    }
    std::size_t size() const noexcept { return values_.size(); }
    double operator[](std::size_t i) const { return values_[i]; }

private:
    ExtendedField(std::vector<double> values, std::size_t first, std::size_t count)
        : values_(std::move(values)), first_(first), count_(count) {}
    friend ExtendedField extend(std::span<const double> u_int, const KernelTable& table);

    std::vector<double> values_;
    std::size_t first_ = 0;
    std::size_t count_ = 0;
};

/// N_s u(x) = c_{n,s} Σ_{j interior} weight(x, j)(u(x) - u(x_j)) at an exterior node.
double neumann_derivative(std::span<const double> u, const KernelTable& table, std::size_t x);

/// Fills the collar with the kernel-weighted interior averages that make
/// N_s u vanish at every exterior node.
ExtendedField extend(std::span<const double> u_int, const KernelTable& table);

}  // namespace fracneumann
