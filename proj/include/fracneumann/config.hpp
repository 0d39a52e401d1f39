#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fracneumann/params.hpp"
#include "fracneumann/solvers.hpp"

namespace fracneumann {

/// Settings shared by the CLI subcommands.
struct RunConfig {
    Params params;
    double a = 0.0;
    double b = 1.0;
    std::optional<double> h;      ///< grid.h; unset means min(0.02, d^{1/(2s)}/10)
    std::optional<double> r_ext;  ///< grid.Rext; unset means 2(b - a)
    SolverConfig solver;
    double d_max = 1.0;
    double d_min = 1e-2;
    int points = 13;

    GridPolicy policy() const;
    /// Geometric sequence from d_max down to d_min with `points` entries.
    std::vector<double> d_values() const { return d_values_for(d_max, d_min, points); }
    static std::vector<double> d_values_for(double d_max, double d_min, int points);
};

/// Applies `key = value` lines ('#' starts a comment). Keys: s, p, n,
/// domain.a, domain.b, grid.h, grid.Rext, solver.tol, solver.max_iters,
/// solver.step, sweep.d_max, sweep.d_min, sweep.points. Unknown keys and
/// malformed values throw Error naming the line.
void apply_config_text(const std::string& text, RunConfig& config);

void load_config_file(const std::string& path, RunConfig& config);

}  // namespace fracneumann
