#include "dpatch/cli.hpp"

#include "dpatch/analysis.hpp"
#include "dpatch/config.hpp"
#include "dpatch/errors.hpp"
#include "dpatch/io.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <ostream>
#include <sstream>

namespace dpatch {

namespace {

struct Options {
    std::string config;
    std::string problem;
    std::string layout;
    std::string oracle;
    std::string out;
    bool print_config = false;
    bool micro = false;
    int gamma = 0;
};

void add_common(CLI::App* cmd, Options& o) {
    cmd->add_option("--config", o.config, "INI run configuration");
    cmd->add_option("--problem", o.problem, "archetype problem M1..M4");
    cmd->add_option("--layout", o.layout, "archetype patch layout M1..M4");
    cmd->add_option("--oracle", o.oracle, "trusted solution")
        ->check(CLI::IsMember({"quadrature", "brute"}));
    cmd->add_option("--out", o.out, "output directory");
    cmd->add_flag("--print-config", o.print_config, "print the expanded configuration and exit");
}

ArchetypeId archetype_flag(const std::string& flag, const std::string& value) {
    try {
        return parse_archetype(value);
    } catch (const ConfigError& e) {
        throw ConfigError(flag + ": " + e.what());
    }
}

enum class Command { run, compare, converge, oracle };

RunConfig resolve(const Options& o, Command cmd) {
    RunConfig cfg = o.config.empty() ? RunConfig{} : load_config(o.config);
    if (!o.problem.empty()) {
        const auto id = archetype_flag("--problem", o.problem);
        cfg.set_problem(id);
        if (!cfg.has_layout() && o.layout.empty()) cfg.set_layout(id);
    }
    if (!o.layout.empty()) cfg.set_layout(archetype_flag("--layout", o.layout));
    if (cfg.has_problem() && !cfg.has_layout() && cfg.problem_name != "custom")
        cfg.set_layout(parse_archetype(cfg.problem_name));
    if (!o.oracle.empty()) cfg.oracle = parse_oracle_kind(o.oracle);
    if (!o.out.empty()) cfg.output_dir = o.out;
    if (o.micro) cfg.write_micro = true;

    if (cmd == Command::converge) {
        if (!cfg.has_problem()) {
            cfg.problem_name = "custom";
            cfg.problem = smooth_convergence_problem();
        }
        if (o.gamma > 0) cfg.converge_gamma = o.gamma;
    } else if (!cfg.has_problem()) {
        throw ConfigError("no problem given (use --problem NAME or a [problem] section)");
    }
    return cfg;
}

std::filesystem::path output_path(const RunConfig& cfg, const std::string& name) {
    std::filesystem::path dir(cfg.output_dir);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw ConfigError("output dir '" + cfg.output_dir + "': " + ec.message());
    return dir / name;
}

template <class Writer>
std::string write_file(const RunConfig& cfg, const std::string& name, Writer&& writer) {
    const auto path = output_path(cfg, name);
    std::ofstream os(path);
    if (!os) throw ConfigError("cannot write '" + path.string() + "'");
    writer(os);
    os.flush();
    if (!os) throw ConfigError("write to '" + path.string() + "' failed");
    return path.string();
}

std::unique_ptr<TrustedSolution> make_oracle(const RunConfig& cfg) {
    if (cfg.oracle == OracleKind::quadrature)
        return std::make_unique<ColeHopfOracle>(cfg.problem, cfg.quadrature);
    return std::make_unique<FineGridSolution>(brute_force_solve(cfg.problem, cfg.fine_grid()));
}

int cmd_run(const RunConfig& cfg, std::ostream& out) {
    const auto layout = cfg.layout();
    const auto traj = simulate(cfg.problem, layout, cfg.stepper());
    const auto macro = MacroTrajectory::from(traj);
    const auto path = write_file(cfg, "macro.csv", [&](std::ostream& os) { io::write_macro_csv(os, macro); });
    out << "macro: " << path << " (" << macro.times.size() << " times x " << macro.positions.size()
        << " nodes)\n";
    if (cfg.write_micro) {
        const auto micro =
            write_file(cfg, "micro.csv", [&](std::ostream& os) { io::write_micro_csv(os, traj, layout); });
        out << "micro: " << micro << '\n';
    }
    return exit_ok;
}

int cmd_compare(const RunConfig& cfg, std::ostream& out) {
    const auto layout = cfg.layout();
    // Quadrature refusal happens here, before any simulation work.
    const auto oracle = make_oracle(cfg);
    const auto traj = simulate(cfg.problem, layout, cfg.stepper());
    // The report is computed from the values as written, so rereading the
    // file reproduces it.
    const auto macro = MacroTrajectory::from(traj).rounded(io::output_digits);
    const auto report = max_error(macro, *oracle);
    const std::string name(to_string(cfg.oracle));

    write_file(cfg, "macro.csv", [&](std::ostream& os) { io::write_macro_csv(os, macro); });
    write_file(cfg, "report.txt", [&](std::ostream& os) { io::write_error_report(os, report, name); });
    write_file(cfg, "errors.csv", [&](std::ostream& os) { io::write_error_csv(os, report); });
    io::write_error_report(out, report, name);
    return exit_ok;
}

int cmd_converge(const RunConfig& cfg, std::ostream& out) {
    const auto report = convergence_study(cfg.problem, cfg.converge_gamma, cfg.convergence());
    write_file(cfg, "convergence.txt", [&](std::ostream& os) { io::write_convergence_report(os, report); });
    write_file(cfg, "convergence.csv", [&](std::ostream& os) { io::write_convergence_csv(os, report); });
    io::write_convergence_report(out, report);
    return exit_ok;
}

int cmd_oracle(const RunConfig& cfg, std::ostream& out) {
    const auto oracle = make_oracle(cfg);
    const auto times = cfg.times();
    const auto xs = equispaced_between(cfg.problem.x_lo, cfg.problem.x_hi, cfg.oracle_samples - 2);
    std::vector<double> grid;
    grid.push_back(cfg.problem.x_lo);
    grid.insert(grid.end(), xs.begin(), xs.end());
    grid.push_back(cfg.problem.x_hi);

    const auto path = write_file(cfg, "oracle.csv", [&](std::ostream& os) {
        os << "x,t,u\n";
        for (double t : times)
            for (double x : grid)
                os << io::format_number(x) << ',' << io::format_number(t) << ','
                   << io::format_number(oracle->evaluate(x, t)) << '\n';
    });
    out << "oracle: " << oracle->name() << " -> " << path << " (" << grid.size() << " x "
        << times.size() << ")\n";
    return exit_ok;
}

int cmd_list(std::ostream& out) {
    out << "name  eps1    eps2   ic    patches  gamma  double_width  nodes  simulated\n";
    for (auto id : all_archetypes) {
        const auto p = make_archetype(id);
        const auto layout = archetype_layout(id);
        const auto& dbl = layout.patches()[*layout.double_index()];
        char line[160];
        std::snprintf(line, sizeof line, "%-4s  %-6g  %-5g  %-4s  %7zu  %5d  %12g  %5zu  %8.1f%%\n",
                      std::string(to_string(id)).c_str(), p.diffusivity.eps1(), p.diffusivity.eps2(),
                      std::string(p.initial.family_name()).c_str(), layout.patches().size(),
                      layout.gamma(), 2.0 * dbl.half_width(), layout.macro_nodes().size(),
                      100.0 * layout.simulated_fraction());
        out << line;
    }
    return exit_ok;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Patch dynamics with a double patch for the modified Burgers equation", "dpatch"};
    app.require_subcommand(1);

    Options o;
    auto* run = app.add_subcommand("run", "simulate and write the macro trajectory");
    add_common(run, o);
    run->add_flag("--micro", o.micro, "also write every micro point");
    auto* compare = app.add_subcommand("compare", "simulate and measure the error against an oracle");
    add_common(compare, o);
    auto* converge = app.add_subcommand("converge", "grid-refinement study of the coupling order");
    add_common(converge, o);
    converge->add_option("--gamma", o.gamma, "interpolation half-width")->check(CLI::PositiveNumber);
    auto* oracle = app.add_subcommand("oracle", "tabulate a trusted solution");
    add_common(oracle, o);
    app.add_subcommand("list", "enumerate the archetypes");

    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_config;
    }

    const auto* chosen = app.get_subcommands().front();
    const std::string name = chosen->get_name();
    try {
        if (name == "list") return cmd_list(out);

        const Command cmd = name == "run"       ? Command::run
                            : name == "compare" ? Command::compare
                            : name == "converge" ? Command::converge
                                                 : Command::oracle;
        const auto cfg = resolve(o, cmd);
        if (o.print_config) {
            write_config(out, cfg);
            return exit_ok;
        }
        switch (cmd) {
        case Command::run: return cmd_run(cfg, out);
        case Command::compare: return cmd_compare(cfg, out);
        case Command::converge: return cmd_converge(cfg, out);
        case Command::oracle: return cmd_oracle(cfg, out);
        }
    } catch (const NumericalError& e) {
        err << "dpatch " << name << ": numerical failure: " << e.what() << '\n';
        return exit_numerical;
    } catch (const ConfigError& e) {
        err << "dpatch " << name << ": " << e.what() << '\n';
        return exit_config;
    } catch (const DomainError& e) {
        err << "dpatch " << name << ": " << e.what() << '\n';
        return exit_config;
    } catch (const std::exception& e) {
        err << "dpatch " << name << ": " << e.what() << '\n';
        return exit_numerical;
    }
    return exit_ok;
}

} // namespace dpatch
