// masslab command-line driver: solve spectra, check gradients, optimize
// densities, run the continuity experiment, and run the verification matrix.
//
// Exit codes: 0 ok, 2 invalid configuration, 3 solver failure, 4 gradient
// check failed, 5 verification failed.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "masslab/analysis.hpp"
#include "masslab/io.hpp"
#include "masslab/optimize.hpp"
#include "masslab/rng.hpp"
#include "masslab/spectrum.hpp"
#include "masslab/verify.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitSolver = 3;
constexpr int kExitGradcheck = 4;
constexpr int kExitVerify = 5;

std::uint64_t env_seed() {
    if (const char* env = std::getenv("MASSLAB_SEED")) return std::strtoull(env, nullptr, 0);
    return masslab::kDefaultSeed;
}

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(std::stoi(item));
    }
    if (out.empty()) throw std::invalid_argument("expected a comma-separated integer list, got '" + text + "'");
    return out;
}

std::vector<std::pair<int, int>> parse_cells(const std::string& text) {
    std::vector<std::pair<int, int>> cells;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        const auto colon = item.find(':');
        if (colon == std::string::npos) throw std::invalid_argument("cell must look like m:k, got '" + item + "'");
        cells.emplace_back(std::stoi(item.substr(0, colon)), std::stoi(item.substr(colon + 1)));
    }
    return cells;
}

struct SolveArgs {
    std::string problem;
    std::string density;
    std::string out = ".";
    int count = 6;
};

int cmd_solve(const SolveArgs& args) {
    const std::string text = masslab::read_text_file(args.problem);
    const masslab::ProblemSpec spec = masslab::problem_from_json_text(text);
    const masslab::DensityField rho = masslab::resolve_density(spec, text, args.density);
    const masslab::BasisDescriptor basis = masslab::build_basis(spec);
    if (args.count < 1 || args.count > basis.dof())
        throw std::invalid_argument("count exceeds dof (" + std::to_string(basis.dof()) + ")");

    const masslab::SpectralDecomposition dec = masslab::eigenvalues(spec, rho, args.count);

    std::filesystem::create_directories(args.out);
    std::vector<std::vector<std::string>> rows;
    for (int n = 1; n <= dec.count(); ++n) {
        const double lambda = dec.lambdas[n - 1];
        rows.push_back({std::to_string(n), masslab::format_double(lambda),
                        masslab::format_double(1.0 / (lambda + spec.b))});
    }
    masslab::write_csv(args.out + "/eigenvalues.csv", {"n", "lambda", "mu"}, rows);

    // eigenfunction samples: 10 (p+1) points per element
    const int per_element = 10 * (spec.p + 1);
    std::vector<std::string> header{"x"};
    for (int n = 1; n <= dec.count(); ++n) header.push_back("u_" + std::to_string(n));
    std::vector<std::vector<std::string>> samples;
    for (int e = 0; e < spec.n_e; ++e) {
        for (int s = 0; s < per_element; ++s) {
            const double x = (e + static_cast<double>(s) / per_element) * spec.element_width();
            std::vector<std::string> row{masslab::format_double(x)};
            for (int n = 1; n <= dec.count(); ++n)
                row.push_back(masslab::format_double(masslab::eval_spline(basis, dec.vectors[n - 1], x, 0)));
            samples.push_back(std::move(row));
        }
    }
    {
        std::vector<std::string> row{masslab::format_double(spec.L)};
        for (int n = 1; n <= dec.count(); ++n)
            row.push_back(masslab::format_double(masslab::eval_spline(basis, dec.vectors[n - 1], spec.L, 0)));
        samples.push_back(std::move(row));
    }
    masslab::write_csv(args.out + "/eigenfunctions.csv", header, samples);
    return kExitOk;
}

struct GradcheckArgs {
    std::string problem;
    std::string density;
    std::string out = ".";
    std::string f_list = "1";
    int h = 1;
    int directions = 20;
    std::uint64_t seed = 0;
    double step = 1e-5;
};

int cmd_gradcheck(const GradcheckArgs& args) {
    const std::string text = masslab::read_text_file(args.problem);
    const masslab::ProblemSpec spec = masslab::problem_from_json_text(text);
    const masslab::DensityField rho = masslab::resolve_density(spec, text, args.density);
    const masslab::IndexSet f = parse_int_list(args.f_list);

    const masslab::ExperimentReport report =
        masslab::gradient_fd_check(spec, rho, f, args.h, args.directions, args.seed, 1e-4, args.step);
    std::filesystem::create_directories(args.out);
    masslab::write_report_csv(args.out + "/gradcheck.csv", report);
    if (!report.pass()) {
        std::cerr << "gradcheck: worst relative error margin " << masslab::format_double(report.worst_margin())
                  << "\n";
        return kExitGradcheck;
    }
    return kExitOk;
}

struct OptimizeArgs {
    std::string problem;
    std::string density;
    std::string out = ".";
    std::string f_list = "1";
    int h = 1;
    std::string sense = "min";
    double box_lo = 0.5;
    double box_hi = 2.0;
    double mass = 0.0;
    int iters = 2000;
    double tol = 1e-8;
};

int cmd_optimize(const OptimizeArgs& args) {
    const std::string text = masslab::read_text_file(args.problem);
    const masslab::ProblemSpec spec = masslab::problem_from_json_text(text);
    const masslab::DensityField rho0 = masslab::resolve_density(spec, text, args.density);
    const masslab::IndexSet f = parse_int_list(args.f_list);
    if (args.sense != "min" && args.sense != "max")
        throw std::invalid_argument("sense must be 'min' or 'max'");
    if (!(args.mass > 0.0)) throw std::invalid_argument("a positive --mass target is required");

    const masslab::BoxConstraint box = masslab::BoxConstraint::uniform(spec.n_e, args.box_lo, args.box_hi);
    const masslab::MassConstraint mass{args.mass};
    masslab::OptimizerConfig config;
    config.max_iters = args.iters;
    config.tol = args.tol;

    const masslab::OptimizerTrace trace =
        masslab::run(spec, rho0, f, args.h,
                     args.sense == "min" ? masslab::OptimizeSense::minimize : masslab::OptimizeSense::maximize,
                     box, mass, config);

    std::filesystem::create_directories(args.out);
    std::vector<std::vector<std::string>> rows;
    for (const auto& pt : trace.points)
        rows.push_back({std::to_string(pt.iter), masslab::format_double(pt.objective),
                        masslab::format_double(pt.step), masslab::format_double(pt.pg_norm),
                        masslab::format_double(pt.bangbang)});
    masslab::write_csv(args.out + "/trace.csv", {"iterate", "objective", "step", "pg_norm", "bangbang_fraction"},
                       rows);
    masslab::write_text_file(args.out + "/final_density.json", masslab::density_to_json(trace.final_rho));

    if (trace.reason == masslab::StopReason::cluster_changed) {
        std::cerr << "optimize: " << trace.message << "\n";
        return kExitSolver;
    }
    if (!trace.message.empty()) std::cerr << "optimize: " << trace.message << "\n";
    return kExitOk;
}

struct WeakstarArgs {
    std::string problem;
    std::string density;
    std::string out = ".";
    double theta = 0.5;
    std::string j_list = "2,4,8,16,32";
};

int cmd_weakstar(const WeakstarArgs& args) {
    const std::string text = masslab::read_text_file(args.problem);
    const masslab::ProblemSpec spec = masslab::problem_from_json_text(text);
    const masslab::DensityField rho = masslab::resolve_density(spec, text, args.density);

    const masslab::WeakstarExperiment exp =
        masslab::weakstar_experiment(spec, rho, args.theta, parse_int_list(args.j_list));
    std::filesystem::create_directories(args.out);
    masslab::write_report_csv(args.out + "/weakstar.csv", exp.report);
    return exp.report.pass() ? kExitOk : kExitVerify;
}

struct VerifyArgs {
    std::string out = ".";
    std::uint64_t seed = 0;
    std::string cells = "1:1,2:2,2:1";
    bool break_comb = false;
};

int cmd_verify(const VerifyArgs& args) {
    masslab::VerifyOptions options;
    options.out_dir = args.out;
    options.seed = args.seed;
    options.cells = parse_cells(args.cells);
    options.break_comb = args.break_comb;

    const masslab::VerifySummary summary = masslab::run_verify(options);
    bool all = true;
    for (const auto& check : summary.checks) {
        std::cout << (check.pass ? "PASS " : "FAIL ") << check.name << " worst_margin="
                  << masslab::format_double(check.worst_margin) << "\n";
        all = all && check.pass;
    }
    if (!all) {
        std::cerr << "verify: some checks failed\n";
        return kExitVerify;
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"masslab: weighted eigenvalue laboratory for polyharmonic operators on an interval"};
    app.require_subcommand(1);
    app.set_help_flag("--help", "print help"); // leave --h free for the symmetric-function degree

    const std::uint64_t default_seed = env_seed();

    SolveArgs solve_args;
    auto* solve = app.add_subcommand("solve", "compute eigenvalues and eigenfunction samples");
    solve->set_help_flag("--help", "print help");
    solve->add_option("--problem", solve_args.problem, "problem JSON document")->required();
    solve->add_option("--density", solve_args.density, "density JSON path or uniform:<value>");
    solve->add_option("--out", solve_args.out, "output directory");
    solve->add_option("--count", solve_args.count, "number of eigenpairs");

    GradcheckArgs grad_args;
    grad_args.seed = default_seed;
    auto* grad = app.add_subcommand("gradcheck", "analytic vs finite-difference gradients of Lambda_{F,h}");
    grad->set_help_flag("--help", "print help");
    grad->add_option("--problem", grad_args.problem)->required();
    grad->add_option("--density", grad_args.density);
    grad->add_option("--out", grad_args.out);
    grad->add_option("--F", grad_args.f_list, "eigenvalue indices, e.g. 1,2,3");
    grad->add_option("--h", grad_args.h, "symmetric function degree");
    grad->add_option("--directions", grad_args.directions);
    grad->add_option("--seed", grad_args.seed);
    grad->add_option("--step", grad_args.step, "finite-difference step scale");

    OptimizeArgs opt_args;
    auto* opt = app.add_subcommand("optimize", "projected-gradient density optimization");
    opt->set_help_flag("--help", "print help");
    opt->add_option("--problem", opt_args.problem)->required();
    opt->add_option("--density", opt_args.density, "starting density");
    opt->add_option("--out", opt_args.out);
    opt->add_option("--F", opt_args.f_list);
    opt->add_option("--h", opt_args.h);
    opt->add_option("--sense", opt_args.sense, "min or max");
    opt->add_option("--box-lower", opt_args.box_lo);
    opt->add_option("--box-upper", opt_args.box_hi);
    opt->add_option("--mass", opt_args.mass, "total mass target")->required();
    opt->add_option("--iters", opt_args.iters);
    opt->add_option("--tol", opt_args.tol);

    WeakstarArgs weak_args;
    auto* weak = app.add_subcommand("weakstar", "oscillating-density continuity experiment");
    weak->set_help_flag("--help", "print help");
    weak->add_option("--problem", weak_args.problem)->required();
    weak->add_option("--density", weak_args.density);
    weak->add_option("--out", weak_args.out);
    weak->add_option("--theta", weak_args.theta);
    weak->add_option("--j", weak_args.j_list, "oscillation indices, e.g. 2,4,8,16");

    VerifyArgs verify_args;
    verify_args.seed = default_seed;
    auto* verify = app.add_subcommand("verify", "run the verification matrix");
    verify->set_help_flag("--help", "print help");
    verify->add_option("--out", verify_args.out);
    verify->add_option("--seed", verify_args.seed);
    verify->add_option("--cells", verify_args.cells, "m:k cells, e.g. 1:1,2:2");
    verify->add_flag("--break-comb", verify_args.break_comb)->group(""); // test-only fault injection

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve->parsed()) return cmd_solve(solve_args);
        if (grad->parsed()) return cmd_gradcheck(grad_args);
        if (opt->parsed()) return cmd_optimize(opt_args);
        if (weak->parsed()) return cmd_weakstar(weak_args);
        if (verify->parsed()) return cmd_verify(verify_args);
    } catch (const std::invalid_argument& err) {
        std::cerr << "configuration error: " << err.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& err) {
        std::cerr << "solver error: " << err.what() << "\n";
        return kExitSolver;
    }
    return kExitConfig;
}
