// qmsurf: command-line front end for the quaternionic construction.
//
//   qmsurf algebra -a -1 -b 3
//   qmsurf construct -a -1 -b 3 --units-height 2
//   qmsurf fibers --tau 0.3+1.2i --format csv
//   qmsurf leray --ms 3,2 --h11 5 --extremal

#include "qmsurf/report.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

namespace {

struct Flags {
    std::string a = "-1";
    std::string b = "3";
    std::string order;
    bool no_saturate = false;
    std::string mu;
    int mu_radius = 10;
    int units_height = 2;
    std::vector<std::string> taus;
    std::string grid;
    std::string omega_direct;
    double theta_eps = 1e-14;
    double null_threshold = qmsurf::kDefaultNullThreshold;
    double riemann_tol = 1e-9;
    double ks_step = 1e-5;
    std::string format = "json";
    std::string ms;
    std::optional<std::int64_t> h11;
    bool extremal = false;
    std::string replay;
};

void add_algebra_flags(CLI::App* cmd, Flags& f) {
    cmd->add_option("-a", f.a, "first structure constant (p/q)")->allow_extra_args(false);
    cmd->add_option("-b", f.b, "second structure constant (p/q)")->allow_extra_args(false);
}

void add_pipeline_flags(CLI::App* cmd, Flags& f) {
    add_algebra_flags(cmd, f);
    cmd->add_option("--order", f.order, "order basis: four 'x0,x1,x2,x3' separated by ';'");
    cmd->add_flag("--no-saturate", f.no_saturate, "use the order as given");
    cmd->add_option("--mu", f.mu, "pure quaternion 'x0,x1,x2,x3' with mu^2 = -D");
    cmd->add_option("--mu-radius", f.mu_radius, "coordinate radius of the mu search");
    cmd->add_option("--theta-eps", f.theta_eps, "theta series truncation tolerance");
    cmd->add_option("--null-threshold", f.null_threshold, "relative even-null threshold");
    cmd->add_option("--riemann-tol", f.riemann_tol, "Riemann relation tolerance");
    cmd->add_option("--ks-step", f.ks_step, "finite-difference step in tau");
    cmd->add_option("--replay", f.replay, "re-run with the config recorded in a JSON report");
}

qmsurf::RunConfig to_config(const Flags& f) {
    qmsurf::RunConfig c;
    c.a = qmsurf::parse_rational(f.a);
    c.b = qmsurf::parse_rational(f.b);
    if (!f.order.empty()) c.order_basis = qmsurf::parse_basis(f.order);
    c.saturate = !f.no_saturate;
    if (!f.mu.empty()) c.mu = qmsurf::parse_element(f.mu);
    c.mu_radius = f.mu_radius;
    c.units_height = f.units_height;
    for (const auto& t : f.taus) c.taus.push_back(qmsurf::parse_complex(t));
    if (!f.grid.empty()) c.grid = qmsurf::parse_grid(f.grid);
    if (!f.omega_direct.empty()) c.omega_direct = f.omega_direct;
    c.theta_eps = f.theta_eps;
    c.null_threshold = f.null_threshold;
    c.riemann_tol = f.riemann_tol;
    c.ks_step = f.ks_step;
    if (f.format != "json" && f.format != "csv") throw std::invalid_argument("format must be json or csv");
    c.format = f.format == "csv" ? qmsurf::OutputFormat::Csv : qmsurf::OutputFormat::Json;
    c.ms = qmsurf::parse_int_list(f.ms);
    c.h11 = f.h11;
    c.extremal = f.extremal;
    return c;
}

qmsurf::RunConfig load_replay(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open " + path);
    return qmsurf::config_from_json(qmsurf::json::parse(in).at("config"));
}

/// Splices "--config FILE" into the argument list as the flags it contains,
/// ahead of the explicit flags so those win.
std::vector<std::string> expand_config(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    for (std::size_t k = 0; k + 1 < args.size(); ++k) {
        if (args[k] != "--config") continue;
        std::ifstream in(args[k + 1]);
        if (!in) throw std::invalid_argument("cannot open config " + args[k + 1]);
        auto extra = qmsurf::config_file_arguments(in);
        args.erase(args.begin() + static_cast<std::ptrdiff_t>(k), args.begin() + static_cast<std::ptrdiff_t>(k) + 2);
        // keep the subcommand name first
        const std::size_t insert_at = args.empty() ? 0 : 1;
        args.insert(args.begin() + static_cast<std::ptrdiff_t>(insert_at), extra.begin(), extra.end());
        break;
    }
    return args;
}

int emit(const qmsurf::Report& report, bool csv) {
    if (csv)
        std::cout << report.text;
    else
        std::cout << report.document.dump(2) << "\n";
    if (report.exit_code != 0 && report.document.contains("error"))
        std::cerr << report.document["error"]["message"].get<std::string>() << "\n";
    return report.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quaternion algebras, QM abelian surfaces and their theta divisors"};
    app.require_subcommand(1);
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    Flags f;

    auto* algebra = app.add_subcommand("algebra", "local invariants and discriminant of (a, b | Q)");
    add_algebra_flags(algebra, f);

    auto* construct = app.add_subcommand("construct", "maximal order, polarization, symplectic unit embedding");
    add_pipeline_flags(construct, f);
    construct->add_option("--units-height", f.units_height, "coordinate bound for enumerated units");

    auto* fibers = app.add_subcommand("fibers", "period matrices and theta-divisor classification over tau");
    add_pipeline_flags(fibers, f);
    fibers->add_option("--tau", f.taus, "sample point(s) x+yi")->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
    fibers->add_option("--grid", f.grid, "re_min:re_max:steps,im_min:im_max:steps");
    fibers->add_option("--omega-direct", f.omega_direct, "classify a given period matrix (diag:z1,z2 | full:a,b,c)");
    fibers->add_option("--format", f.format, "json or csv");

    auto* leray = app.add_subcommand("leray", "Leray rank bookkeeping and Picard verdict");
    leray->add_option("--ms", f.ms, "component counts of singular fibers, comma separated");
    leray->add_option("--h11", f.h11, "Hodge number h^{1,1}");
    leray->add_flag("--extremal", f.extremal, "the fibration is extremal");

    try {
        std::vector<std::string> args = expand_config(argc, argv);
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return 1;
    }

    try {
        qmsurf::RunConfig config = f.replay.empty() ? to_config(f) : load_replay(f.replay);
        if (algebra->parsed()) return emit(qmsurf::run_algebra(config.a, config.b), false);
        if (construct->parsed()) return emit(qmsurf::run_construct(config), false);
        if (fibers->parsed())
            return emit(qmsurf::run_fibers(config), config.format == qmsurf::OutputFormat::Csv);
        if (leray->parsed()) return emit(qmsurf::run_leray(config), false);
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return 1;
    }
    return 1;
}
