#include "dpatch/errors.hpp"
#include "dpatch/io.hpp"

#include <doctest.h>

#include <algorithm>
#include <sstream>

using namespace dpatch;

namespace {

MacroTrajectory small_trajectory() {
    MacroTrajectory m;
    m.times = {0.0, 0.05};
    m.positions = {-1.0471975511965979, -0.0225, 0.0225, 1.0471975511965979};
    m.roles = {NodeRole::centre, NodeRole::shock_left, NodeRole::shock_right, NodeRole::centre};
    m.values = {{0.6666666666666666, 0.99, -0.99, -0.6666666666666666},
                {0.65, 0.98123456789012345, -0.98123456789012345, -0.65}};
    return m;
}

std::size_t line_count(const std::string& s) {
    return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

} // namespace

TEST_SUITE("io") {

TEST_CASE("number format") {
    CHECK(io::format_number(0.1) == "0.1");
    CHECK(io::format_number(1.0 / 3.0) == "0.333333333333");
    CHECK(io::format_number(-2.5e-7) == "-2.5e-07");
    CHECK(io::format_number(3.0) == "3");
}

TEST_CASE("macro trajectory round trip") {
    const auto m = small_trajectory();
    std::ostringstream os;
    io::write_macro_csv(os, m);
    CHECK(line_count(os.str()) == 1 + m.times.size() * m.positions.size());
    CHECK(os.str().rfind("time,node_position,node_role,value\n", 0) == 0);

    std::istringstream is(os.str());
    const auto back = io::read_macro_csv(is);
    const auto expected = m.rounded(io::output_digits);
    CHECK(back.times == expected.times);
    CHECK(back.positions == expected.positions);
    CHECK(back.roles == expected.roles);
    CHECK(back.values == expected.values);

    // A second pass is a fixed point.
    std::ostringstream again;
    io::write_macro_csv(again, back);
    CHECK(again.str() == os.str());
}

TEST_CASE("macro trajectory diagnostics name the line") {
    const auto expect_line = [](const std::string& text, const std::string& fragment) {
        std::istringstream is(text);
        try {
            io::read_macro_csv(is);
            FAIL("accepted malformed input");
        } catch (const ConfigError& e) {
            CAPTURE(e.what());
            CHECK(std::string(e.what()).find(fragment) != std::string::npos);
        }
    };
    const std::string header = "time,node_position,node_role,value\n";
    expect_line("t,x,role,u\n", "line 1");
    expect_line(header + "0,-1,centre,0.5\n0,1,centre,abc\n", "line 3");
    expect_line(header + "0,-1,centre\n", "line 2");
    expect_line(header + "0,-1,middle,0.5\n", "line 2");
    expect_line(header + "0,-1,centre,0.5\n0,1,centre,0.5\n0.1,-1,centre,0.4\n0.1,2,centre,0.1\n", "line 5");
    expect_line(header + "0,-1,centre,0.5\n0,1,centre,0.5\n0.1,-1,centre,0.4\n", "incomplete");
}

TEST_CASE("reports") {
    ErrorReport r;
    r.times = {0.0, 1.0};
    r.max_per_time = {0.0, 2.5e-4};
    r.positions = {-1.0, 1.0};
    r.roles = {NodeRole::centre, NodeRole::centre};
    r.max_per_node = {2.5e-4, 1e-5};
    r.global_max = 2.5e-4;
    r.worst = {1.0, -1.0, NodeRole::centre, 2.5e-4};

    std::ostringstream os;
    io::write_error_report(os, r, "quadrature");
    const auto text = os.str();
    CHECK(text.find("oracle: quadrature\n") != std::string::npos);
    CHECK(text.find("global_max: 0.00025\n") != std::string::npos);
    CHECK(text.find("outside_double_patch_max") == std::string::npos);
    CHECK(text.find("worst_role: centre\n") != std::string::npos);

    r.outside_double_max = 1e-5;
    std::ostringstream with;
    io::write_error_report(with, r, "brute");
    CHECK(with.str().find("outside_double_patch_max: 1e-05\n") != std::string::npos);

    std::ostringstream csv;
    io::write_error_csv(csv, r);
    CHECK(csv.str() == "time,max_error\n0,0\n1,0.00025\n");

    ConvergenceReport c;
    c.gamma = 2;
    c.spacings = {0.2, 0.1, 0.05};
    c.errors = {1.6e-3, 1e-4, 6.25e-6};
    c.slope = 4.0;
    std::ostringstream conv;
    io::write_convergence_report(conv, c);
    CHECK(conv.str().find("slope: 4\n") != std::string::npos);
    CHECK(conv.str().find("nominal_order: 4\n") != std::string::npos);
    std::ostringstream conv_csv;
    io::write_convergence_csv(conv_csv, c);
    CHECK(conv_csv.str() == "H,max_error\n0.2,0.0016\n0.1,0.0001\n0.05,6.25e-06\n");

    c.exact = true;
    std::ostringstream ex;
    io::write_convergence_report(ex, c);
    CHECK(ex.str().find("slope: exact\n") != std::string::npos);
}

TEST_CASE("micro and fine-grid tables") {
    const auto p = make_archetype(ArchetypeId::M1);
    const auto layout = archetype_layout(ArchetypeId::M1);
    StepperConfig cfg;
    cfg.output_times = {0.0, 0.1};
    const auto traj = simulate(p, layout, cfg);
    std::ostringstream micro;
    io::write_micro_csv(micro, traj, layout);
    CHECK(line_count(micro.str()) == 1 + 2 * layout.total_points());
    CHECK(micro.str().rfind("time,patch,x,u\n", 0) == 0);

    FineGridConfig fine;
    fine.points = 9;
    fine.snapshot_times = {0.0, 0.01};
    const auto sol = brute_force_solve(p, fine);
    std::ostringstream grid;
    io::write_fine_grid_csv(grid, sol);
    CHECK(line_count(grid.str()) == 1 + 2 * 11);
    CHECK(grid.str().rfind("x,t,u\n", 0) == 0);
}

}
