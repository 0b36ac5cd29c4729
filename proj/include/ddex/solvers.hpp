#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ddex/core.hpp"
#include "ddex/random.hpp"

namespace ddex {

enum class Scheme { randomized, classical };

const char* scheme_name(Scheme scheme) noexcept;

// Non-finite state produced at step (j, k) -> (j, k+1) with f evaluated at `theta`.
class SolverDivergence : public std::runtime_error {
public:
    SolverDivergence(int j, int k, double theta);

    int interval() const noexcept { return j_; }
    int step() const noexcept { return k_; }
    double theta() const noexcept { return theta_; }

private:
    int j_;
    int k_;
    double theta_;
};

struct SolverConfig {
    int steps = 1;
    Scheme scheme = Scheme::randomized;
    std::optional<RandomStream> stream;  // required for the randomized scheme

    void validate() const;
    // Set when N < ceil(tau); the scheme still runs.
    std::optional<std::string> admissibility_warning(double tau) const;
};

namespace detail {

// Shared explicit recursion
//   y_0^j = y_N^{j-1},  y_{k+1}^j = y_k^j + h f(node(j,k), y_k^j, y_k^{j-1})
// with the node chosen per step in (j, k) lexicographic order. The increments
// h f are accumulated with Kahan compensation.
template <class NodeFn>
Trajectory euler_recursion(const DDEProblem& problem, int steps, NodeFn&& node) {
    const Mesh mesh(problem.tau(), steps, problem.horizon());
    Trajectory traj(mesh, problem.dimension(), problem.x0());
    const auto& f = problem.rhs();
    const std::size_t d = problem.dimension();
    const double h = mesh.step_size();
    std::vector<double> slope(d, 0.0);
    std::vector<double> carry(d, 0.0);  // compensated summation of the increments

    for (int j = 0; j <= mesh.horizon(); ++j) {
        {
            const auto prev = traj.row_unchecked(j - 1, steps);
            auto first = traj.row_unchecked(j, 0);
            for (std::size_t c = 0; c < d; ++c) {
                first[c] = prev[c];
            }
        }
        for (int k = 0; k < steps; ++k) {
            const double t = node(mesh, j, k);
            const auto y = traj.row_unchecked(j, k);
            const auto delayed = traj.row_unchecked(j - 1, k);
            f(t, y, delayed, slope);
            auto next = traj.row_unchecked(j, k + 1);
            bool finite = true;
            for (std::size_t c = 0; c < d; ++c) {
                const double increment = h * slope[c] - carry[c];
                const double sum = y[c] + increment;
                carry[c] = (sum - y[c]) - increment;
                next[c] = sum;
                finite = finite && std::isfinite(sum);
            }
            if (!finite) {
                throw SolverDivergence(j, k, t);
            }
        }
    }
    return traj;
}

}  // namespace detail

/// Randomized Euler scheme: each f-evaluation happens at a uniformly drawn
/// time inside its step. Consumes exactly (n+1)*N uniforms from `source`.
template <UniformSource S>
Trajectory randomized_euler(const DDEProblem& problem, int steps, S& source) {
    return detail::euler_recursion(problem, steps, [&source](const Mesh& mesh, int j, int k) {
        return sample_theta(source, mesh, j, k);
    });
}

Trajectory randomized_euler(const DDEProblem& problem, const SolverConfig& cfg);

// Explicit Euler with f evaluated at the left node of each step.
Trajectory classical_euler(const DDEProblem& problem, int steps);
Trajectory classical_euler(const DDEProblem& problem, const SolverConfig& cfg);

Trajectory solve(const DDEProblem& problem, const SolverConfig& cfg);

struct PairOptions {
    Scheme coarse_scheme = Scheme::randomized;
    Scheme reference_scheme = Scheme::randomized;
    // Both runs draw from the same derived stream (self-tests with m = 1).
    bool shared_stream = false;
};

struct SolutionPair {
    Trajectory coarse;
    Trajectory reference;  // restricted to the coarse mesh
};

// Coarse run at N and reference run at m*N. The runs use the substreams
// "coarse" and "reference" derived from `sample`.
SolutionPair solve_pair(const DDEProblem& problem, int steps, int refinement,
                        const RandomStream& sample, const PairOptions& options = {});

}  // namespace ddex
