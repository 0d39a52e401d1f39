#pragma once

#include <cmath>
#include <limits>

namespace fracneumann {

/// Per-d diagnostics of one least-energy solve.
struct SweepRecord {
    double d = 0.0;
    double c_d = 0.0;
    double sup_u = 0.0;
    double argmax_x = 0.0;
    double dist_boundary = 0.0;
    double L0_5 = 0.0;  ///< ∫_Ω u^{1/2}
    double L1 = 0.0;
    double L2 = 0.0;
    double Lp1 = 0.0;   ///< ∫_Ω u^{p+1}
    double L4 = 0.0;
    double nehari_residual = 0.0;
    double flux_residual = 0.0;
    bool constant_branch = false;
    /// Grid spacing of the solve; NaN when read back from CSV.
    double h = std::numeric_limits<double>::quiet_NaN();
};

}  // namespace fracneumann
