#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "fracneumann/records.hpp"
#include "fracneumann/solvers.hpp"

namespace fracneumann {

/// Shortest-safe decimal form: 17 significant digits, round-trips bitwise.
std::string format_real(double v);
double parse_real(const std::string& text);

/// Writes to a temporary file next to `path`, then renames it over `path`.
void write_file_atomic(const std::string& path, const std::string& content);

/// Plain-text solution snapshot: `# key = value` header lines, then `x value` per node.
struct Snapshot {
    std::vector<std::pair<std::string, std::string>> header;
    std::vector<double> x;
    std::vector<double> values;

    /// Numeric header value; throws Error if the key is missing or not a number.
    double number(const std::string& key) const;
    const std::string* find(const std::string& key) const;
};

std::string format_snapshot(const Snapshot& snap);
Snapshot parse_snapshot(std::istream& in);
void write_snapshot(const std::string& path, const Snapshot& snap);
Snapshot read_snapshot(const std::string& path);

/// Header keys s, p, d, a, b, h, R_ext, c_d, M_d, argmax_x plus init; every grid node.
Snapshot make_snapshot(const LeastEnergyResult& result, const Params& params, const KernelTable& table);
/// Header keys s, p, L, h, F, pohozaev_residual, decay_exponent; every window node.
Snapshot make_snapshot(const GroundStateResult& result, const Params& params);

/// Sweep CSV with the fixed column order
/// d, c_d, sup_u, argmax_x, dist_boundary, L0.5, L1, L2, Lp1, L4, nehari_res, flux_res, constant_branch.
std::string format_sweep_csv(const std::vector<SweepRecord>& records);
std::vector<SweepRecord> parse_sweep_csv(std::istream& in);
std::vector<SweepRecord> read_sweep_csv(const std::string& path);

}  // namespace fracneumann
