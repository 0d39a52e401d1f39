#include "fracneumann/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "fracneumann/error.hpp"
#include "fracneumann/io.hpp"

namespace fracneumann {

GridPolicy RunConfig::policy() const {
    GridPolicy g;
    g.a = a;
    g.b = b;
    if (h) g.h_max = *h;
    if (r_ext) g.r_ext_factor = *r_ext / (b - a);
    return g;
}

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

int parse_int(const std::string& text) {
    const double v = parse_real(text);
    if (v != static_cast<double>(static_cast<long long>(v))) throw Error(fmt::format("not an integer: '{}'", text));
    return static_cast<int>(v);
}

}  // namespace

void apply_config_text(const std::string& text, RunConfig& c) {
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw Error(fmt::format("config line {}: expected 'key = value'", lineno));
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        try {
            if (key == "s") c.params.s = parse_real(value);
            else if (key == "p") c.params.p = parse_real(value);
            else if (key == "n") c.params.n = parse_int(value);
            else if (key == "domain.a") c.a = parse_real(value);
            else if (key == "domain.b") c.b = parse_real(value);
            else if (key == "grid.h") c.h = parse_real(value);
            else if (key == "grid.Rext") c.r_ext = parse_real(value);
            else if (key == "solver.tol") c.solver.tol_residual = parse_real(value);
            else if (key == "solver.max_iters") c.solver.max_iters = parse_int(value);
            else if (key == "solver.step") c.solver.step = parse_real(value);
            else if (key == "sweep.d_max") c.d_max = parse_real(value);
            else if (key == "sweep.d_min") c.d_min = parse_real(value);
            else if (key == "sweep.points") c.points = parse_int(value);
            else throw Error(fmt::format("unknown key '{}'", key));
        } catch (const Error& e) {
            throw Error(fmt::format("config line {}: {}", lineno, e.what()));
        }
    }
}

void load_config_file(const std::string& path, RunConfig& config) {
    std::ifstream in(path);
    if (!in) throw Error(fmt::format("cannot open config file '{}'", path));
    std::ostringstream ss;
    ss << in.rdbuf();
    apply_config_text(ss.str(), config);
}

std::vector<double> RunConfig::d_values_for(double d_max, double d_min, int points) {
    if (points < 1) throw PreconditionError("sweep: points must be >= 1");
    if (points == 1) return {d_max};
    if (!(d_max > d_min) || !(d_min > 0.0)) throw PreconditionError("sweep: need d_max > d_min > 0");
    std::vector<double> ds;
    for (int i = 0; i < points; ++i) {
        ds.push_back(d_max * std::pow(d_min / d_max, static_cast<double>(i) / (points - 1)));
    }
    return ds;
}

}  // namespace fracneumann
