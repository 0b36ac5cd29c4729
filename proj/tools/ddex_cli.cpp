// ddex: command-line front end for the delay-equation experiments.
//
//   ddex convergence --problem f1 --N-list 10,100,1000 --K 200 --ref-step 1e-4 --csv err.csv
//   ddex compare     --problem comparison --N-list 16,32,64,128,256 --ref-m 64
//   ddex certify     --problem kainhofer --N 4096 --p inf
//   ddex solve       --problem kainhofer --N 64 --csv traj.csv
//
// Exit codes: 0 success, 1 configuration error, 2 solver divergence.

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ddex/analysis.hpp"
#include "ddex/experiment.hpp"
#include "ddex/problems.hpp"
#include "ddex/solvers.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitDivergence = 2;

struct CommonOptions {
    std::string problem = "kainhofer";
    ddex::PresetParams params;
    std::uint64_t seed = 0;
    std::string p_text = "2";
};

struct StudyOptions {
    std::string n_list;
    int samples = 100;
    std::optional<int> ref_m;
    std::optional<double> ref_step;
    bool oracle = false;
    std::string scheme = "randomized";
    std::string reference_scheme = "randomized";
    bool serial = false;
    std::string csv;
    std::string slopes_csv;
    std::string svg;
};

void add_common(CLI::App* app, CommonOptions& o) {
    app->add_option("--problem", o.problem, "f1|f2|kainhofer|comparison|wiener")
        ->check(CLI::IsMember({"f1", "f2", "kainhofer", "comparison", "wiener"}));
    app->add_option("--alpha", o.params.alpha, "Hoelder exponent in the delayed argument");
    app->add_option("--gamma", o.params.gamma, "singular weight exponent");
    app->add_option("--M", o.params.M);
    app->add_option("--P", o.params.P);
    app->add_option("--lambda", o.params.lambda, "kainhofer frequency");
    app->add_option("--lambda1", o.params.lambda1, "comparison forcing frequency");
    app->add_option("--tau", o.params.tau, "lag");
    app->add_option("--n", o.params.horizon, "horizon: number of lag intervals beyond the first");
    app->add_option("--x0", o.params.x0, "constant initial value");
    app->add_option("--path-step", o.params.path_step, "wiener path grid step");
    app->add_option("--seed", o.seed, "master seed (decimal 64-bit)");
    app->add_option("--p", o.p_text, "norm order (real >= 1, or inf where allowed)");
}

void add_study(CLI::App* app, StudyOptions& o, bool with_scheme) {
    app->add_option("--N-list", o.n_list, "comma-separated steps per lag interval")->required();
    app->add_option("--K", o.samples, "Monte Carlo samples");
    app->add_option("--ref-m", o.ref_m, "reference refinement factor m");
    app->add_option("--ref-step", o.ref_step, "absolute reference step");
    app->add_flag("--oracle", o.oracle, "measure against the closed-form solution");
    if (with_scheme) {
        app->add_option("--scheme", o.scheme)->check(CLI::IsMember({"randomized", "classical"}));
    }
    app->add_option("--reference-scheme", o.reference_scheme)
        ->check(CLI::IsMember({"randomized", "classical"}));
    app->add_flag("--serial", o.serial, "run Monte Carlo samples without OpenMP");
    app->add_option("--csv", o.csv, "error table CSV");
    app->add_option("--slopes-csv", o.slopes_csv, "slope CSV (default: <csv stem>_slopes.csv)");
    app->add_option("--svg", o.svg, "log-log error plot");
}

double parse_p(const std::string& text) {
    std::size_t used = 0;
    double p = 0.0;
    try {
        p = std::stod(text, &used);
    } catch (const std::exception&) {
        throw ddex::ValidationError("cannot parse --p '" + text + "'");
    }
    if (used != text.size()) {
        throw ddex::ValidationError("cannot parse --p '" + text + "'");
    }
    return p;
}

std::vector<int> parse_n_list(const std::string& text) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) {
            continue;
        }
        std::size_t used = 0;
        long v = 0;
        try {
            v = std::stol(item, &used);
        } catch (const std::exception&) {
            throw ddex::ValidationError("bad entry '" + item + "' in --N-list");
        }
        if (used != item.size() || v < 1 || v > std::numeric_limits<int>::max()) {
            throw ddex::ValidationError("bad entry '" + item + "' in --N-list");
        }
        out.push_back(static_cast<int>(v));
    }
    return out;
}

ddex::Scheme parse_scheme(const std::string& s) {
    return s == "classical" ? ddex::Scheme::classical : ddex::Scheme::randomized;
}

ddex::PresetKind preset_kind(const std::string& name) {
    auto kind = ddex::parse_preset_kind(name);
    if (!kind) {
        throw ddex::ValidationError("unknown problem '" + name + "'");
    }
    return *kind;
}

ddex::ExperimentConfig build_config(const CommonOptions& c, const StudyOptions& s) {
    ddex::ExperimentConfig cfg;
    cfg.preset = preset_kind(c.problem);
    cfg.params = c.params;
    cfg.steps_list = parse_n_list(s.n_list);
    cfg.samples = s.samples;
    cfg.ref_factor = s.ref_m;
    cfg.ref_step = s.ref_step;
    cfg.oracle = s.oracle;
    if (!s.ref_m && !s.ref_step && !s.oracle) {
        cfg.ref_factor = 100;
    }
    cfg.seed = c.seed;
    cfg.p = parse_p(c.p_text);
    cfg.scheme = parse_scheme(s.scheme);
    cfg.reference_scheme = parse_scheme(s.reference_scheme);
    cfg.parallel = !s.serial;
    cfg.csv_path = s.csv;
    cfg.slopes_csv_path = s.slopes_csv;
    if (cfg.slopes_csv_path.empty() && !s.csv.empty()) {
        cfg.slopes_csv_path = ddex::with_suffix(s.csv, "_slopes");
    }
    cfg.svg_path = s.svg;
    return cfg;
}

void print_result(std::ostream& os, const ddex::ExperimentResult& r) {
    os << "scheme: " << ddex::scheme_name(r.scheme) << '\n';
    os << std::setw(8) << "N" << std::setw(4) << "j" << std::setw(16) << "err" << std::setw(16)
       << "spread" << std::setw(6) << "K" << '\n';
    for (const auto& row : r.rows) {
        os << std::setw(8) << row.N << std::setw(4) << row.j << std::setw(16) << std::setprecision(6)
           << row.err << std::setw(16) << row.spread << std::setw(6) << row.K << '\n';
    }
    for (const auto& s : r.interval_slopes) {
        os << "interval j=" << s.interval.value_or(-1) << ": pairwise";
        for (const auto& p : s.pairwise) {
            os << ' ' << std::setprecision(3) << p.slope;
        }
        os << " | ols " << std::setprecision(4) << s.ols_slope << " (r2 " << s.r_squared << ")\n";
    }
    if (r.max_slopes) {
        os << "max over j: pairwise";
        for (const auto& p : r.max_slopes->pairwise) {
            os << ' ' << std::setprecision(3) << p.slope;
        }
        os << " | ols " << std::setprecision(4) << r.max_slopes->ols_slope << '\n';
    }
    for (const auto& note : r.notices) {
        std::cerr << "note: " << note << '\n';
    }
}

int run_certify(const CommonOptions& c, int steps, const std::string& scheme, const std::string& csv) {
    auto params = c.params;
    params.seed = c.seed;
    const auto preset = ddex::make_preset(preset_kind(c.problem), params);
    const double p = parse_p(c.p_text);
    const auto norms = preset.envelope(p);
    const auto cert = ddex::bound_certificate(norms.l1, norms.lp, ddex::euclidean_norm(preset.problem.x0()), p);

    ddex::SolverConfig solver;
    solver.steps = steps;
    solver.scheme = parse_scheme(scheme);
    solver.stream = ddex::RandomStream(c.seed).derive("certify", {});
    const auto traj = ddex::solve(preset.problem, solver);
    const auto bounds = ddex::check_bounds(traj, cert);
    const auto holder = ddex::check_holder(traj, cert, p);

    std::cout << "j,K_j,max_norm,bounds_ok,C_j,worst_ratio,holder_ok\n";
    for (std::size_t j = 0; j < bounds.intervals.size(); ++j) {
        const auto& b = bounds.intervals[j];
        const auto& h = holder.intervals[j];
        std::cout << b.j << ',' << ddex::format_real(b.limit) << ',' << ddex::format_real(b.observed)
                  << ',' << (b.ok ? "pass" : "FAIL") << ',' << ddex::format_real(h.limit) << ','
                  << ddex::format_real(h.observed) << ',' << (h.ok ? "pass" : "FAIL") << '\n';
    }
    if (!csv.empty()) {
        std::ofstream os(csv, std::ios::binary);
        ddex::write_trajectory_csv(os, traj);
    }
    const bool ok = bounds.passed() && holder.passed();
    std::cout << (ok ? "certificate holds" : "certificate violated") << '\n';
    return kExitOk;
}

int run_solve(const CommonOptions& c, int steps, const std::string& scheme, const std::string& csv,
              const std::string& path_csv) {
    auto params = c.params;
    params.seed = c.seed;
    const auto preset = ddex::make_preset(preset_kind(c.problem), params);
    ddex::SolverConfig solver;
    solver.steps = steps;
    solver.scheme = parse_scheme(scheme);
    solver.stream = ddex::RandomStream(c.seed).derive("solve", {});
    if (auto warning = solver.admissibility_warning(preset.problem.tau())) {
        std::cerr << "warning: " << *warning << '\n';
    }
    const auto traj = ddex::solve(preset.problem, solver);
    if (csv.empty()) {
        ddex::write_trajectory_csv(std::cout, traj);
    } else {
        std::ofstream os(csv, std::ios::binary);
        ddex::write_trajectory_csv(os, traj);
    }
    if (!path_csv.empty()) {
        if (!preset.path) {
            throw ddex::ValidationError("--path-csv is only meaningful for --problem wiener");
        }
        std::ofstream os(path_csv, std::ios::binary);
        ddex::write_path_csv(os, *preset.path);
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Randomized Euler experiments for delay differential equations"};
    app.require_subcommand(1);

    CommonOptions conv_common, cmp_common, cert_common, solve_common;
    StudyOptions conv_study, cmp_study;

    auto* convergence = app.add_subcommand("convergence", "Monte Carlo error table and slope fit");
    add_common(convergence, conv_common);
    add_study(convergence, conv_study, true);

    auto* compare = app.add_subcommand("compare", "randomized vs classical Euler, same reference");
    add_common(compare, cmp_common);
    add_study(compare, cmp_study, false);

    int cert_steps = 4096;
    std::string cert_scheme = "randomized";
    std::string cert_csv;
    auto* certify = app.add_subcommand("certify", "a priori bound and Hoelder certificate check");
    add_common(certify, cert_common);
    certify->add_option("--N", cert_steps, "steps per lag interval of the checked run");
    certify->add_option("--scheme", cert_scheme)->check(CLI::IsMember({"randomized", "classical"}));
    certify->add_option("--csv", cert_csv, "trajectory CSV of the checked run");

    int solve_steps = 64;
    std::string solve_scheme = "randomized";
    std::string solve_csv;
    std::string path_csv;
    auto* solve = app.add_subcommand("solve", "single trajectory dump");
    add_common(solve, solve_common);
    solve->add_option("--N", solve_steps, "steps per lag interval");
    solve->add_option("--scheme", solve_scheme)->check(CLI::IsMember({"randomized", "classical"}));
    solve->add_option("--csv", solve_csv, "trajectory CSV (default stdout)");
    solve->add_option("--path-csv", path_csv, "wiener path CSV i,t,Z");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (*convergence) {
            const auto cfg = build_config(conv_common, conv_study);
            const auto result = ddex::run_experiment(cfg);
            print_result(std::cout, result);
            return result.partial ? kExitDivergence : kExitOk;
        }
        if (*compare) {
            const auto cfg = build_config(cmp_common, cmp_study);
            const auto result = ddex::compare_schemes(cfg);
            print_result(std::cout, result.randomized);
            print_result(std::cout, result.classical);
            return result.randomized.partial || result.classical.partial ? kExitDivergence : kExitOk;
        }
        if (*certify) {
            return run_certify(cert_common, cert_steps, cert_scheme, cert_csv);
        }
        if (*solve) {
            return run_solve(solve_common, solve_steps, solve_scheme, solve_csv, path_csv);
        }
    } catch (const ddex::SolverDivergence& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitDivergence;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    }
    return kExitConfig;
}
