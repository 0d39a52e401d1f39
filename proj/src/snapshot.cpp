#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "fracneumann/io.hpp"

namespace fracneumann {

std::string format_real(double v) { return fmt::format("{:.17g}", v); }

double parse_real(const std::string& text) {
    const char* begin = text.c_str();
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(begin, &end);
    if (end == begin || errno == ERANGE) throw Error(fmt::format("not a number: '{}'", text));
    while (*end == ' ' || *end == '\t' || *end == '\r') ++end;
    if (*end != '\0') throw Error(fmt::format("trailing characters in number: '{}'", text));
    return v;
}

void write_file_atomic(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path tmp = target;
    tmp += fmt::format(".tmp{}", static_cast<unsigned long>(std::hash<std::string>{}(path) & 0xffffff));
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(fmt::format("cannot open '{}' for writing", tmp.string()));
        out << content;
        out.flush();
        if (!out) throw Error(fmt::format("write to '{}' failed", tmp.string()));
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp);
        throw Error(fmt::format("cannot rename '{}' to '{}': {}", tmp.string(), path, ec.message()));
    }
}

const std::string* Snapshot::find(const std::string& key) const {
    for (const auto& [k, v] : header) {
        if (k == key) return &v;
    }
    return nullptr;
}

double Snapshot::number(const std::string& key) const {
    const std::string* v = find(key);
    if (v == nullptr) throw Error(fmt::format("snapshot header has no key '{}'", key));
    return parse_real(*v);
}

std::string format_snapshot(const Snapshot& snap) {
    if (snap.x.size() != snap.values.size()) throw PreconditionError("snapshot: x and values differ in length");
    std::string out;
    for (const auto& [k, v] : snap.header) out += fmt::format("# {} = {}\n", k, v);
    for (std::size_t i = 0; i < snap.x.size(); ++i) {
        out += format_real(snap.x[i]);
        out += ' ';
        out += format_real(snap.values[i]);
        out += '\n';
    }
    return out;
}

Snapshot parse_snapshot(std::istream& in) {
    Snapshot snap;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        if (line[0] == '#') {
            const auto eq = line.find('=');
            if (eq == std::string::npos) throw Error(fmt::format("snapshot line {}: header without '='", lineno));
            auto trim = [](std::string s) {
                const auto b = s.find_first_not_of(" \t\r");
                const auto e = s.find_last_not_of(" \t\r");
                return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
            };
            snap.header.emplace_back(trim(line.substr(1, eq - 1)), trim(line.substr(eq + 1)));
            continue;
        }
        std::istringstream fields(line);
        std::string xs, vs, extra;
        if (!(fields >> xs >> vs) || (fields >> extra)) {
            throw Error(fmt::format("snapshot line {}: expected 'x value'", lineno));
        }
        snap.x.push_back(parse_real(xs));
        snap.values.push_back(parse_real(vs));
    }
    return snap;
}

void write_snapshot(const std::string& path, const Snapshot& snap) { write_file_atomic(path, format_snapshot(snap)); }

Snapshot read_snapshot(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(fmt::format("cannot open '{}'", path));
    return parse_snapshot(in);
}

Snapshot make_snapshot(const LeastEnergyResult& result, const Params& params, const KernelTable& table) {
    const Grid& g = table.grid();
    Snapshot snap;
    snap.header = {{"s", format_real(params.s)},
                   {"p", format_real(params.p)},
                   {"d", format_real(params.d)},
                   {"a", format_real(g.a)},
                   {"b", format_real(g.b)},
                   {"h", format_real(g.h)},
                   {"R_ext", format_real(g.r_ext)},
                   {"c_d", format_real(result.c_d)},
                   {"M_d", format_real(result.M_d)},
                   {"argmax_x", format_real(result.argmax_x)},
                   {"init", to_string(result.init)}};
    snap.x = g.nodes;
    snap.values.assign(result.u.values().begin(), result.u.values().end());
    return snap;
}

Snapshot make_snapshot(const GroundStateResult& result, const Params& params) {
    Snapshot snap;
    snap.header = {{"s", format_real(params.s)},
                   {"p", format_real(params.p)},
                   {"L", format_real(result.grid.b)},
                   {"h", format_real(result.grid.h)},
                   {"F", format_real(result.F_value)},
                   {"pohozaev_residual", format_real(result.pohozaev_residual)},
                   {"decay_exponent", format_real(result.decay_exponent_fit)}};
    snap.x = result.grid.nodes;
    snap.values = result.w;
    return snap;
}

}  // namespace fracneumann
