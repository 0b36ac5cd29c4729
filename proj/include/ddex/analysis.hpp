#pragma once

// Monte Carlo L^p error estimation, log-log slope fits, and the a priori
// solution-bound certificate.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ddex/core.hpp"
#include "ddex/solvers.hpp"

namespace ddex {

using ExactSolution = std::function<State(double)>;

struct ErrorRow {
    int N = 0;
    double h = 0.0;
    int j = 0;
    double err = 0.0;     // (mean over samples of max_i |ref - y|^p)^(1/p)
    double spread = 0.0;  // sample standard deviation of the per-sample maxima
    int K = 0;            // completed samples
    double p = 2.0;
};

using ErrorTable = std::vector<ErrorRow>;

struct McConfig {
    int steps = 0;
    int samples = 1;
    // Exactly one of ref_factor / ref_step / oracle selects the reference.
    std::optional<int> ref_factor;
    std::optional<double> ref_step;
    bool oracle = false;
    std::uint64_t seed = 0;
    double p = 2.0;
    Scheme scheme = Scheme::randomized;
    Scheme reference_scheme = Scheme::randomized;
    bool shared_stream = false;  // self-tests only
};

struct McResult {
    ErrorTable rows;  // one per interval j
    bool partial = false;
    std::vector<int> failed_samples;
    std::string first_failure;
};

// Refinement factor m for a coarse mesh with `steps` per lag interval.
int resolve_refinement(const McConfig& cfg, double tau);

// Per-interval max-over-grid deviation of sample `s`, written to `out` (size n+1).
// Throws SolverDivergence from the underlying runs.
void sample_interval_maxima(const DDEProblem& problem, const ExactSolution& exact,
                            const McConfig& cfg, int refinement, int s, std::span<double> out);

// OpenMP over samples; reduction in sample-index order, so the result is
// bitwise identical to mc_error_serial for any thread count.
McResult mc_error(const DDEProblem& problem, const McConfig& cfg, const ExactSolution& exact = {});

// Serial reference. `order`, if given, is the sample execution order (a
// permutation of 0..K-1); the reduction is still in sample-index order.
McResult mc_error_serial(const DDEProblem& problem, const McConfig& cfg,
                         const ExactSolution& exact = {}, std::span<const int> order = {});

class DegenerateFit : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct PairwiseSlope {
    int from_N = 0;
    int to_N = 0;
    double slope = 0.0;
};

/// Convergence order fit. Slopes are reported as positive orders:
/// err ~ C h^slope.
struct SlopeReport {
    std::optional<int> interval;  // nullopt: max over intervals
    std::vector<PairwiseSlope> pairwise;
    double ols_slope = 0.0;
    double ols_intercept = 0.0;
    double r_squared = 0.0;
    std::vector<std::string> notices;

    double mean_pairwise() const;
};

// Fit on interval `interval`, or on max over j when nullopt. Rows with zero
// error are dropped with a notice; fewer than two usable N values throws
// DegenerateFit.
SlopeReport fit_slopes(std::span<const ErrorRow> table, std::optional<int> interval);

struct BoundCertificate {
    std::vector<double> K;       // K[j+1] = K_j, j = -1..n; K[0] = ||x0||
    std::vector<double> holder;  // C_j, j = 0..n
    std::vector<double> l1_norms;
    std::vector<double> lp_norms;
    double x0_norm = 0.0;
    double p = 2.0;

    int horizon() const noexcept { return static_cast<int>(holder.size()) - 1; }
    double bound(int j) const { return K.at(static_cast<std::size_t>(j + 1)); }
};

// K_j = (1 + K_{j-1}) (1 + l1_j) exp((1 + K_{j-1}) l1_j),  C_j = (1 + K_{j-1}) (1 + K_j) lp_j
BoundCertificate bound_certificate(std::span<const double> l1_norms,
                                   std::span<const double> lp_norms, double x0_norm, double p);

struct IntervalCheck {
    int j = 0;
    double observed = 0.0;  // max ||y_k^j|| or worst Hoelder ratio
    double limit = 0.0;
    bool ok = true;
    int first = -1;   // offending grid index (bounds) or first of a pair (Hoelder)
    int second = -1;  // second of the offending pair (Hoelder)
};

struct CheckReport {
    std::vector<IntervalCheck> intervals;
    bool passed() const;
    std::vector<int> violations() const;
};

CheckReport check_bounds(const Trajectory& traj, const BoundCertificate& cert);

// ||y_i^j - y_k^j|| <= C_j |t_i - t_k|^(1 - 1/p) over all grid pairs of each interval.
CheckReport check_holder(const Trajectory& traj, const BoundCertificate& cert, double p);

}  // namespace ddex
