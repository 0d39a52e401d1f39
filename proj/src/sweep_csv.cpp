#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "fracneumann/io.hpp"

namespace fracneumann {

namespace {

constexpr const char* csv_header =
    "d,c_d,sup_u,argmax_x,dist_boundary,L0.5,L1,L2,Lp1,L4,nehari_res,flux_res,constant_branch";

}  // namespace

std::string format_sweep_csv(const std::vector<SweepRecord>& records) {
    std::string out = csv_header;
    out += '\n';
    for (const SweepRecord& r : records) {
        for (double v : {r.d, r.c_d, r.sup_u, r.argmax_x, r.dist_boundary, r.L0_5, r.L1, r.L2, r.Lp1, r.L4,
                         r.nehari_residual, r.flux_residual}) {
            out += format_real(v);
            out += ',';
        }
        out += r.constant_branch ? "1\n" : "0\n";
    }
    return out;
}

std::vector<SweepRecord> parse_sweep_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw Error("sweep CSV: empty input");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != csv_header) throw Error(fmt::format("sweep CSV: unexpected header '{}'", line));
    std::vector<SweepRecord> records;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::istringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (cells.size() != 13) throw Error(fmt::format("sweep CSV line {}: expected 13 columns", lineno));
        SweepRecord r;
        double* fields[] = {&r.d,  &r.c_d, &r.sup_u, &r.argmax_x, &r.dist_boundary,   &r.L0_5,
                            &r.L1, &r.L2,  &r.Lp1,   &r.L4,       &r.nehari_residual, &r.flux_residual};
        for (std::size_t k = 0; k < 12; ++k) *fields[k] = parse_real(cells[k]);
        if (cells[12] != "0" && cells[12] != "1") {
            throw Error(fmt::format("sweep CSV line {}: constant_branch must be 0 or 1", lineno));
        }
        r.constant_branch = cells[12] == "1";
        records.push_back(r);
    }
    return records;
}

std::vector<SweepRecord> read_sweep_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(fmt::format("cannot open '{}'", path));
    return parse_sweep_csv(in);
}

}  // namespace fracneumann
