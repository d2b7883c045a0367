#include "dpatch/config.hpp"

#include "dpatch/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace dpatch {

namespace {

// Width whose standard spacing width / (points - 1) is exactly dx, so a
// printed layout reloads to the same micro grid.
double width_for(double dx, int points) {
    const double steps = points - 1;
    double w = dx * steps;
    for (int k = 0; k < 8 && w / steps != dx; ++k)
        w = std::nextafter(w, w / steps < dx ? HUGE_VAL : -HUGE_VAL);
    return w;
}

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> words(const std::string& s) {
    std::string copy = s;
    for (auto& c : copy)
        if (c == ',') c = ' ';
    std::istringstream ss(copy);
    std::vector<std::string> out;
    std::string w;
    while (ss >> w) out.push_back(w);
    return out;
}

struct Entry {
    std::string key;
    std::string value;
    int line = 0;
};

class Reader {
public:
    Reader(std::string source, const Entry& e) : source_(std::move(source)), e_(e) {}

    [[noreturn]] void fail(const std::string& what) const {
        throw ConfigError(source_ + " line " + std::to_string(e_.line) + ": key '" + e_.key +
                          "': " + what);
    }

    double number(const std::string& text) const {
        double v = 0.0;
        const char* end = text.data() + text.size();
        const auto [ptr, ec] = std::from_chars(text.data(), end, v);
        if (ec != std::errc() || ptr != end || !std::isfinite(v))
            fail("expected a finite number, got '" + text + "'");
        return v;
    }

    int integer(const std::string& text) const {
        int v = 0;
        const char* end = text.data() + text.size();
        const auto [ptr, ec] = std::from_chars(text.data(), end, v);
        if (ec != std::errc() || ptr != end) fail("expected an integer, got '" + text + "'");
        return v;
    }

    double number() const { return number(single()); }
    int integer() const { return integer(single()); }

    bool boolean() const {
        const auto s = single();
        if (s == "true" || s == "yes" || s == "1") return true;
        if (s == "false" || s == "no" || s == "0") return false;
        fail("expected true or false, got '" + s + "'");
    }

    std::string single() const {
        const auto w = words(e_.value);
        if (w.size() != 1) fail("expected one value");
        return w.front();
    }

    std::vector<double> numbers() const {
        std::vector<double> out;
        for (const auto& w : words(e_.value)) out.push_back(number(w));
        return out;
    }

    std::vector<int> integers() const {
        std::vector<int> out;
        for (const auto& w : words(e_.value)) out.push_back(integer(w));
        return out;
    }

    // Wraps errors raised by library parsers with the line and key.
    template <class F>
    auto guarded(F&& f) const {
        try {
            return f();
        } catch (const ConfigError& err) {
            fail(err.what());
        }
    }

private:
    std::string source_;
    const Entry& e_;
};

using Section = std::vector<Entry>;

const Entry* find_name(const Section& section) {
    for (const auto& e : section)
        if (e.key == "name") return &e;
    return nullptr;
}

void apply_problem(RunConfig& cfg, const Section& section, const std::string& src) {
    if (const auto* e = find_name(section)) {
        Reader r(src, *e);
        const auto name = r.single();
        if (name == "custom") {
            cfg.problem_name = "custom";
            cfg.problem = ProblemSpec{};
        } else {
            cfg.set_problem(r.guarded([&] { return parse_archetype(name); }));
        }
    } else {
        cfg.problem_name = "custom";
    }
    if (cfg.problem_name != "custom" && section.size() > 1) cfg.problem_name = "custom";

    auto& p = cfg.problem;
    double eps1 = p.diffusivity.eps1(), eps2 = p.diffusivity.eps2();
    const Entry* eps_entry = nullptr;
    for (const auto& e : section) {
        Reader r(src, e);
        if (e.key == "name") continue;
        if (e.key == "domain") {
            const auto v = r.numbers();
            if (v.size() != 2) r.fail("expected two values x_lo x_hi");
            p.x_lo = v[0];
            p.x_hi = v[1];
        } else if (e.key == "eps1") {
            eps1 = r.number();
            eps_entry = &e;
        } else if (e.key == "eps2") {
            eps2 = r.number();
            eps_entry = &e;
        } else if (e.key == "ic") {
            const auto s = r.single();
            p.initial.family = r.guarded([&] { return InitialCondition::parse_family(s); });
        } else if (e.key == "ic_param") {
            p.initial.param = r.number();
        } else if (e.key == "bc_left") {
            p.bc_left = r.number();
        } else if (e.key == "bc_right") {
            p.bc_right = r.number();
        } else if (e.key == "t_final") {
            p.final_time = r.number();
        } else {
            r.fail("unknown key in [problem]");
        }
    }
    if (eps_entry) {
        Reader r(src, *eps_entry);
        p.diffusivity = r.guarded([&] { return Diffusivity(eps1, eps2); });
    }
    try {
        p.validate();
    } catch (const ConfigError& err) {
        throw ConfigError(src + " [problem]: " + err.what());
    }
}

PatchEntry parse_patch(const Reader& r, const std::string& value) {
    const auto w = words(value);
    if (w.size() != 4 && w.size() != 6)
        r.fail("expected 'centre width points standard|double [left right]'");
    PatchEntry p;
    p.centre = r.number(w[0]);
    p.width = r.number(w[1]);
    p.points = r.integer(w[2]);
    if (w[3] == "double") {
        p.is_double = true;
        if (w.size() == 6) p.offsets = {r.integer(w[4]), r.integer(w[5])};
    } else if (w[3] == "standard") {
        if (w.size() == 6) r.fail("shock offsets only apply to a double patch");
    } else {
        r.fail("patch kind must be 'standard' or 'double', got '" + w[3] + "'");
    }
    r.guarded([&] { return p.build(); });
    return p;
}

void apply_layout(RunConfig& cfg, const Section& section, const std::string& src) {
    if (const auto* e = find_name(section)) {
        Reader r(src, *e);
        const auto name = r.single();
        if (name == "custom") {
            cfg.layout_name = "custom";
            cfg.patches.clear();
        } else {
            cfg.set_layout(r.guarded([&] { return parse_archetype(name); }));
        }
    } else {
        cfg.layout_name = "custom";
        cfg.patches.clear();
    }

    bool replaced = false;
    for (const auto& e : section) {
        Reader r(src, e);
        if (e.key == "name") continue;
        if (e.key == "gamma") {
            cfg.gamma = r.integer();
            if (cfg.gamma < 1) r.fail("gamma must be >= 1");
            if (cfg.layout_name != "custom") cfg.layout_name = "custom";
        } else if (e.key == "patch") {
            if (!replaced) cfg.patches.clear();
            replaced = true;
            cfg.layout_name = "custom";
            cfg.patches.push_back(parse_patch(r, e.value));
        } else {
            r.fail("unknown key in [layout]");
        }
    }
}

void apply_stepper(RunConfig& cfg, const Section& section, const std::string& src) {
    for (const auto& e : section) {
        Reader r(src, e);
        if (e.key == "dt") {
            cfg.dt = r.number();
            if (cfg.dt < 0.0) r.fail("dt must be >= 0 (0 selects the stability bound)");
        } else if (e.key == "safety") {
            cfg.safety = r.number();
            if (!(cfg.safety > 0.0 && cfg.safety <= 1.0)) r.fail("safety must lie in (0, 1]");
        } else if (e.key == "output_count") {
            cfg.output_count = r.integer();
            if (cfg.output_count < 2) r.fail("output_count must be >= 2");
        } else if (e.key == "output_times") {
            cfg.output_times = r.numbers();
            for (std::size_t k = 0; k < cfg.output_times.size(); ++k)
                if (cfg.output_times[k] < 0.0 || (k > 0 && cfg.output_times[k] <= cfg.output_times[k - 1]))
                    r.fail("output times must be non-negative and strictly increasing");
        } else if (e.key == "blowup_bound") {
            cfg.blowup_bound = r.number();
            if (!(cfg.blowup_bound > 0.0)) r.fail("blowup_bound must be positive");
        } else {
            r.fail("unknown key in [stepper]");
        }
    }
}

void apply_oracle(RunConfig& cfg, const Section& section, const std::string& src) {
    for (const auto& e : section) {
        Reader r(src, e);
        if (e.key == "kind") {
            const auto s = r.single();
            cfg.oracle = r.guarded([&] { return parse_oracle_kind(s); });
        } else if (e.key == "tol_window") {
            cfg.quadrature.tol_window = r.number();
        } else if (e.key == "opt_samples") {
            cfg.quadrature.opt_samples = r.integer();
        } else if (e.key == "quad_rel_tol") {
            cfg.quadrature.quad_rel_tol = r.number();
        } else if (e.key == "points") {
            cfg.fine_points = r.integer();
            if (cfg.fine_points < 3) r.fail("points must be >= 3");
        } else if (e.key == "dt") {
            cfg.fine_dt = r.number();
            if (cfg.fine_dt < 0.0) r.fail("dt must be >= 0 (0 selects d^2/2)");
        } else if (e.key == "samples") {
            cfg.oracle_samples = r.integer();
            if (cfg.oracle_samples < 2) r.fail("samples must be >= 2");
        } else {
            r.fail("unknown key in [oracle]");
        }
        if (e.key == "tol_window" || e.key == "opt_samples" || e.key == "quad_rel_tol")
            r.guarded([&] {
                cfg.quadrature.validate();
                return 0;
            });
    }
}

void apply_converge(RunConfig& cfg, const Section& section, const std::string& src) {
    for (const auto& e : section) {
        Reader r(src, e);
        if (e.key == "gamma") {
            cfg.converge_gamma = r.integer();
            if (cfg.converge_gamma < 1) r.fail("gamma must be >= 1");
        } else if (e.key == "intervals") {
            cfg.converge_intervals = r.integers();
            for (int n : cfg.converge_intervals)
                if (n < 2) r.fail("every interval count must be >= 2");
        } else if (e.key == "half_points") {
            cfg.converge_half_points = r.integer();
        } else if (e.key == "max_micro_dx") {
            cfg.converge_max_micro_dx = r.number();
            if (!(cfg.converge_max_micro_dx > 0.0)) r.fail("max_micro_dx must be positive");
        } else if (e.key == "oracle_dt") {
            cfg.converge_oracle_dt = r.number();
        } else {
            r.fail("unknown key in [converge]");
        }
    }
}

void apply_output(RunConfig& cfg, const Section& section, const std::string& src) {
    for (const auto& e : section) {
        Reader r(src, e);
        if (e.key == "dir") {
            if (e.value.empty()) r.fail("expected a directory");
            cfg.output_dir = e.value;
        } else if (e.key == "micro") {
            cfg.write_micro = r.boolean();
        } else {
            r.fail("unknown key in [output]");
        }
    }
}

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

Patch PatchEntry::build() const {
    if (is_double) return Patch::double_patch(centre, width, points, offsets);
    return Patch::standard(centre, width, points);
}

PatchEntry PatchEntry::from(const Patch& patch) {
    PatchEntry e;
    e.centre = patch.centre();
    e.points = patch.point_count();
    e.width = width_for(patch.dx(), e.points);
    e.is_double = patch.is_double();
    if (patch.shock_offsets()) e.offsets = *patch.shock_offsets();
    return e;
}

std::string_view to_string(OracleKind kind) noexcept {
    return kind == OracleKind::quadrature ? "quadrature" : "brute";
}

OracleKind parse_oracle_kind(std::string_view name) {
    if (name == "quadrature") return OracleKind::quadrature;
    if (name == "brute") return OracleKind::brute;
    throw ConfigError("unknown oracle '" + std::string(name) + "' (expected quadrature or brute)");
}

void RunConfig::set_problem(ArchetypeId id) {
    problem_name = std::string(to_string(id));
    problem = make_archetype(id);
}

void RunConfig::set_layout(ArchetypeId id) {
    const auto layout = archetype_layout(id);
    layout_name = std::string(to_string(id));
    patches.clear();
    for (const auto& p : layout.patches()) patches.push_back(PatchEntry::from(p));
    gamma = layout.gamma();
}

PatchLayout RunConfig::layout() const {
    if (!has_layout() || patches.empty())
        throw ConfigError("layout: no patches given (use --layout or a [layout] section)");
    std::vector<Patch> built;
    built.reserve(patches.size());
    for (const auto& e : patches) built.push_back(e.build());
    return PatchLayout(problem.x_lo, problem.x_hi, std::move(built), gamma);
}

std::vector<double> RunConfig::times() const {
    if (!output_times.empty()) return output_times;
    return uniform_times(problem.final_time, static_cast<std::size_t>(output_count));
}

StepperConfig RunConfig::stepper() const {
    StepperConfig s;
    s.dt = dt;
    s.safety = safety;
    s.output_times = times();
    s.blowup_bound = blowup_bound;
    return s;
}

FineGridConfig RunConfig::fine_grid() const {
    FineGridConfig f;
    f.points = fine_points;
    f.dt = fine_dt;
    f.snapshot_times = times();
    f.blowup_bound = blowup_bound;
    return f;
}

ConvergenceConfig RunConfig::convergence() const {
    ConvergenceConfig c;
    const double length = problem.x_hi - problem.x_lo;
    for (int n : converge_intervals) c.spacings.push_back(length / n);
    c.half_points = converge_half_points;
    c.max_micro_dx = converge_max_micro_dx;
    c.oracle_dt = converge_oracle_dt;
    return c;
}

RunConfig parse_config(std::istream& is, const std::string& source) {
    static const std::vector<std::string> known{"problem", "layout", "stepper",
                                                "oracle",  "converge", "output"};
    std::map<std::string, Section> sections;
    std::string current;
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find_first_of("#;");
        const auto text = trim(std::string_view(line).substr(0, hash));
        if (text.empty()) continue;
        const auto where = source + " line " + std::to_string(lineno);
        if (text.front() == '[') {
            if (text.back() != ']') throw ConfigError(where + ": malformed section header");
            current = trim(std::string_view(text).substr(1, text.size() - 2));
            if (std::find(known.begin(), known.end(), current) == known.end())
                throw ConfigError(where + ": unknown section [" + current + "]");
            if (sections.count(current))
                throw ConfigError(where + ": section [" + current + "] given twice");
            sections[current];
            continue;
        }
        const auto eq = text.find('=');
        if (eq == std::string::npos) throw ConfigError(where + ": expected 'key = value'");
        if (current.empty()) throw ConfigError(where + ": key outside of any section");
        Entry e{trim(std::string_view(text).substr(0, eq)), trim(std::string_view(text).substr(eq + 1)),
                lineno};
        if (e.key.empty()) throw ConfigError(where + ": empty key");
        auto& sec = sections[current];
        if (e.key != "patch")
            for (const auto& prev : sec)
                if (prev.key == e.key)
                    throw ConfigError(where + ": key '" + e.key + "' repeated (first on line " +
                                      std::to_string(prev.line) + ")");
        sec.push_back(std::move(e));
    }

    RunConfig cfg;
    if (auto it = sections.find("problem"); it != sections.end()) apply_problem(cfg, it->second, source);
    if (auto it = sections.find("layout"); it != sections.end()) apply_layout(cfg, it->second, source);
    if (auto it = sections.find("stepper"); it != sections.end()) apply_stepper(cfg, it->second, source);
    if (auto it = sections.find("oracle"); it != sections.end()) apply_oracle(cfg, it->second, source);
    if (auto it = sections.find("converge"); it != sections.end()) apply_converge(cfg, it->second, source);
    if (auto it = sections.find("output"); it != sections.end()) apply_output(cfg, it->second, source);
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    return parse_config(in, path);
}

void write_config(std::ostream& os, const RunConfig& cfg) {
    if (cfg.has_problem()) {
        const auto& p = cfg.problem;
        os << "[problem]\n";
        os << "name = custom\n";
        os << "# expanded from " << cfg.problem_name << '\n';
        os << "domain = " << num(p.x_lo) << ' ' << num(p.x_hi) << '\n';
        os << "eps1 = " << num(p.diffusivity.eps1()) << '\n';
        os << "eps2 = " << num(p.diffusivity.eps2()) << '\n';
        os << "ic = " << p.initial.family_name() << '\n';
        os << "ic_param = " << num(p.initial.param) << '\n';
        os << "bc_left = " << num(p.bc_left) << '\n';
        os << "bc_right = " << num(p.bc_right) << '\n';
        os << "t_final = " << num(p.final_time) << "\n\n";
    }
    if (cfg.has_layout()) {
        os << "[layout]\n";
        os << "name = custom\n";
        os << "# expanded from " << cfg.layout_name << '\n';
        os << "gamma = " << cfg.gamma << '\n';
        for (const auto& e : cfg.patches) {
            os << "patch = " << num(e.centre) << ' ' << num(e.width) << ' ' << e.points << ' '
               << (e.is_double ? "double" : "standard");
            if (e.is_double) os << ' ' << e.offsets.left_steps << ' ' << e.offsets.right_steps;
            os << '\n';
        }
        os << '\n';
    }
    os << "[stepper]\n";
    os << "dt = " << num(cfg.dt) << '\n';
    os << "safety = " << num(cfg.safety) << '\n';
    os << "output_count = " << cfg.output_count << '\n';
    if (!cfg.output_times.empty()) {
        os << "output_times =";
        for (double t : cfg.output_times) os << ' ' << num(t);
        os << '\n';
    }
    os << "blowup_bound = " << num(cfg.blowup_bound) << "\n\n";

    os << "[oracle]\n";
    os << "kind = " << to_string(cfg.oracle) << '\n';
    os << "tol_window = " << num(cfg.quadrature.tol_window) << '\n';
    os << "opt_samples = " << cfg.quadrature.opt_samples << '\n';
    os << "quad_rel_tol = " << num(cfg.quadrature.quad_rel_tol) << '\n';
    os << "points = " << cfg.fine_points << '\n';
    os << "dt = " << num(cfg.fine_dt) << '\n';
    os << "samples = " << cfg.oracle_samples << "\n\n";

    os << "[converge]\n";
    os << "gamma = " << cfg.converge_gamma << '\n';
    os << "intervals =";
    for (int n : cfg.converge_intervals) os << ' ' << n;
    os << '\n';
    os << "half_points = " << cfg.converge_half_points << '\n';
    os << "max_micro_dx = " << num(cfg.converge_max_micro_dx) << '\n';
    os << "oracle_dt = " << num(cfg.converge_oracle_dt) << "\n\n";

    os << "[output]\n";
    os << "dir = " << cfg.output_dir << '\n';
    os << "micro = " << (cfg.write_micro ? "true" : "false") << '\n';
}

} // namespace dpatch
