#include "ddex/solvers.hpp"

#include <cmath>
#include <sstream>
#include <string>

namespace ddex {
namespace {

std::string divergence_message(int j, int k, double theta) {
    std::ostringstream os;
    os.precision(17);
    os << "solver diverged: non-finite state at interval j=" << j << ", step k=" << k
       << ", theta=" << theta;
    return os.str();
}

Trajectory run_scheme(const DDEProblem& problem, int steps, Scheme scheme, RandomStream stream) {
    if (scheme == Scheme::classical) {
        return classical_euler(problem, steps);
    }
    return randomized_euler(problem, steps, stream);
}

}  // namespace

const char* scheme_name(Scheme scheme) noexcept {
    return scheme == Scheme::randomized ? "randomized" : "classical";
}

SolverDivergence::SolverDivergence(int j, int k, double theta)
    : std::runtime_error(divergence_message(j, k, theta)), j_(j), k_(k), theta_(theta) {}

void SolverConfig::validate() const {
    if (steps < 1) {
        throw ValidationError("solver needs N >= 1 steps per lag interval");
    }
    if (scheme == Scheme::randomized && !stream) {
        throw ValidationError("randomized scheme needs a random stream");
    }
}

std::optional<std::string> SolverConfig::admissibility_warning(double tau) const {
    const double needed = std::ceil(tau);
    if (static_cast<double>(steps) < needed) {
        return "N=" + std::to_string(steps) + " is below ceil(tau)=" +
               std::to_string(static_cast<long long>(needed)) +
               "; the error rate guarantee assumes N >= ceil(tau)";
    }
    return std::nullopt;
}

Trajectory randomized_euler(const DDEProblem& problem, const SolverConfig& cfg) {
    cfg.validate();
    RandomStream stream = *cfg.stream;
    return randomized_euler(problem, cfg.steps, stream);
}

Trajectory classical_euler(const DDEProblem& problem, int steps) {
    return detail::euler_recursion(problem, steps,
                                   [](const Mesh& mesh, int j, int k) { return mesh.time(j, k); });
}

Trajectory classical_euler(const DDEProblem& problem, const SolverConfig& cfg) {
    if (cfg.steps < 1) {
        throw ValidationError("solver needs N >= 1 steps per lag interval");
    }
    return classical_euler(problem, cfg.steps);
}

Trajectory solve(const DDEProblem& problem, const SolverConfig& cfg) {
    return cfg.scheme == Scheme::randomized ? randomized_euler(problem, cfg)
                                            : classical_euler(problem, cfg);
}

SolutionPair solve_pair(const DDEProblem& problem, int steps, int refinement,
                        const RandomStream& sample, const PairOptions& options) {
    if (refinement < 1) {
        throw ValidationError("refinement factor m must be >= 1");
    }
    if (steps < 1) {
        throw ValidationError("solver needs N >= 1 steps per lag interval");
    }
    const RandomStream coarse_stream = sample.derive("coarse", {});
    const RandomStream reference_stream =
        options.shared_stream ? coarse_stream : sample.derive("reference", {});
    Trajectory coarse = run_scheme(problem, steps, options.coarse_scheme, coarse_stream);
    Trajectory fine =
        run_scheme(problem, steps * refinement, options.reference_scheme, reference_stream);
    return {std::move(coarse), restrict(fine, refinement)};
}

}  // namespace ddex
