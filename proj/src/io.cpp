#include "dpatch/io.hpp"

#include "dpatch/errors.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace dpatch::io {

std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", output_digits, v);
    return buf;
}

void write_macro_csv(std::ostream& os, const MacroTrajectory& traj) {
    os << "time,node_position,node_role,value\n";
    for (std::size_t k = 0; k < traj.times.size(); ++k)
        for (std::size_t m = 0; m < traj.positions.size(); ++m)
            os << format_number(traj.times[k]) << ',' << format_number(traj.positions[m]) << ','
               << to_string(traj.roles[m]) << ',' << format_number(traj.values[k][m]) << '\n';
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) out.push_back(field);
    return out;
}

double parse_double(const std::string& s, std::size_t line) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != s.size())
        throw ConfigError("macro trajectory line " + std::to_string(line) + ": bad number '" + s + "'");
    return v;
}

} // namespace

MacroTrajectory read_macro_csv(std::istream& is) {
    MacroTrajectory traj;
    std::string line;
    std::size_t lineno = 0;
    if (!std::getline(is, line) || line != "time,node_position,node_role,value")
        throw ConfigError("macro trajectory line 1: expected header time,node_position,node_role,value");
    ++lineno;

    std::size_t node = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto f = split_csv(line);
        if (f.size() != 4)
            throw ConfigError("macro trajectory line " + std::to_string(lineno) + ": expected 4 fields");
        const double t = parse_double(f[0], lineno);
        const double x = parse_double(f[1], lineno);
        NodeRole role;
        try {
            role = parse_node_role(f[2]);
        } catch (const ConfigError& e) {
            throw ConfigError("macro trajectory line " + std::to_string(lineno) + ": " + e.what());
        }
        const double v = parse_double(f[3], lineno);

        if (traj.times.empty() || t != traj.times.back()) {
            if (!traj.times.empty() && node != traj.positions.size())
                throw ConfigError("macro trajectory line " + std::to_string(lineno) +
                                  ": previous time block is incomplete");
            traj.times.push_back(t);
            traj.values.emplace_back();
            node = 0;
        }
        if (traj.times.size() == 1) {
            traj.positions.push_back(x);
            traj.roles.push_back(role);
        } else if (node >= traj.positions.size() || traj.positions[node] != x ||
                   traj.roles[node] != role) {
            throw ConfigError("macro trajectory line " + std::to_string(lineno) +
                              ": node does not match the first time block");
        }
        traj.values.back().push_back(v);
        ++node;
    }
    if (!traj.times.empty() && node != traj.positions.size())
        throw ConfigError("macro trajectory: last time block is incomplete");
    return traj;
}

void write_micro_csv(std::ostream& os, const Trajectory& traj, const PatchLayout& layout) {
    os << "time,patch,x,u\n";
    for (const auto& state : traj.states) {
        for (std::size_t j = 0; j < layout.patches().size(); ++j) {
            const auto& p = layout.patches()[j];
            const auto u = state.patch(j);
            for (int i = -p.n(); i <= p.n(); ++i)
                os << format_number(state.time) << ',' << j << ',' << format_number(p.point(i)) << ','
                   << format_number(u[static_cast<std::size_t>(i + p.n())]) << '\n';
        }
    }
}

void write_error_report(std::ostream& os, const ErrorReport& r, const std::string& oracle) {
    os << "oracle: " << oracle << '\n';
    os << "times: " << r.times.size() << '\n';
    os << "nodes: " << r.positions.size() << '\n';
    os << "global_max: " << format_number(r.global_max) << '\n';
    if (r.outside_double_max)
        os << "outside_double_patch_max: " << format_number(*r.outside_double_max) << '\n';
    os << "worst_time: " << format_number(r.worst.time) << '\n';
    os << "worst_position: " << format_number(r.worst.position) << '\n';
    os << "worst_role: " << to_string(r.worst.role) << '\n';
    for (std::size_t m = 0; m < r.positions.size(); ++m)
        os << "node_max[" << format_number(r.positions[m]) << "]: " << format_number(r.max_per_node[m])
           << '\n';
}

void write_error_csv(std::ostream& os, const ErrorReport& r) {
    os << "time,max_error\n";
    for (std::size_t k = 0; k < r.times.size(); ++k)
        os << format_number(r.times[k]) << ',' << format_number(r.max_per_time[k]) << '\n';
}

void write_convergence_report(std::ostream& os, const ConvergenceReport& r) {
    os << "gamma: " << r.gamma << '\n';
    os << "nominal_order: " << 2 * r.gamma << '\n';
    os << "micro_dx: " << format_number(r.micro_dx) << '\n';
    os << "points: " << r.spacings.size() << '\n';
    if (r.exact)
        os << "slope: exact\n";
    else
        os << "slope: " << format_number(r.slope) << '\n';
    os << "monotone: " << (r.monotone ? "true" : "false") << '\n';
}

void write_convergence_csv(std::ostream& os, const ConvergenceReport& r) {
    os << "H,max_error\n";
    for (std::size_t k = 0; k < r.spacings.size(); ++k)
        os << format_number(r.spacings[k]) << ',' << format_number(r.errors[k]) << '\n';
}

void write_fine_grid_csv(std::ostream& os, const FineGridSolution& s) {
    os << "x,t,u\n";
    for (std::size_t k = 0; k < s.times().size(); ++k) {
        const auto& u = s.snapshot(k);
        for (std::size_t i = 0; i < s.grid().size(); ++i)
            os << format_number(s.grid()[i]) << ',' << format_number(s.times()[k]) << ','
               << format_number(u[i]) << '\n';
    }
}

} // namespace dpatch::io
