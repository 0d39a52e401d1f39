#pragma once

namespace fracneumann {

/// Model parameters. n only enters formulas; the discretisation is 1D.
struct Params {
    int n = 1;
    double s = 0.25;
    double p = 1.5;
    double d = 1.0;

    /// Fractional Sobolev exponent 2n/(n - 2s).
    double two_star() const noexcept { return 2.0 * n / (n - 2.0 * s); }
    /// Upper bound on p for the Neumann problem, (n + s)/(n - s).
    double neumann_p_bound() const noexcept { return (n + s) / (n - s); }
    /// Upper bound on p for the whole-space problem, (n + 2s)/(n - 2s).
    double whole_space_p_bound() const noexcept { return (n + 2.0 * s) / (n - 2.0 * s); }
    /// Intrinsic length d^{1/(2s)}.
    double intrinsic_length() const;

    /// Checks n >= 1, 0 < s < 1, n > 2s, p > 1, d > 0.
    void validate_common() const;
    /// validate_common() plus p < (n + s)/(n - s).
    void validate_neumann() const;
    /// validate_common() plus p < (n + 2s)/(n - 2s).
    void validate_whole_space() const;
};

}  // namespace fracneumann
