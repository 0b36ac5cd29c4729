#include "ddex/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace ddex {
namespace {

void validate(const DDEProblem& problem, const McConfig& cfg, const ExactSolution& exact) {
    if (cfg.steps < 1) {
        throw ValidationError("N must be >= 1");
    }
    if (cfg.samples < 1) {
        throw ValidationError("sample count K must be >= 1");
    }
    if (!(cfg.p >= 1.0)) {
        throw ValidationError("error norm order p must be >= 1");
    }
    const int modes = (cfg.ref_factor ? 1 : 0) + (cfg.ref_step ? 1 : 0) + (cfg.oracle ? 1 : 0);
    if (modes != 1) {
        throw ValidationError("choose exactly one of refinement factor, reference step, oracle");
    }
    if (cfg.oracle && !exact) {
        throw ValidationError("oracle mode needs a closed-form solution for this problem");
    }
    (void)problem;
}

// Max-over-grid deviation per interval between the coarse trajectory and
// either a restricted reference or the exact solution.
void interval_maxima(const Trajectory& coarse, const Trajectory* reference,
                     const ExactSolution& exact, std::span<double> out) {
    const Mesh& mesh = coarse.mesh();
    for (int j = 0; j <= mesh.horizon(); ++j) {
        double m = 0.0;
        for (int k = 0; k <= mesh.steps(); ++k) {
            double d = 0.0;
            if (reference != nullptr) {
                d = euclidean_distance(coarse.row_unchecked(j, k), reference->row_unchecked(j, k));
            } else {
                const State x = exact(mesh.time(j, k));
                d = euclidean_distance(coarse.row_unchecked(j, k), x);
            }
            m = std::max(m, d);
        }
        out[static_cast<std::size_t>(j)] = m;
    }
}

McResult reduce(const DDEProblem& problem, const McConfig& cfg,
                const std::vector<double>& maxima, const std::vector<char>& failed,
                const std::vector<std::string>& messages) {
    const int intervals = problem.horizon() + 1;
    McResult result;
    for (int s = 0; s < cfg.samples; ++s) {
        if (failed[static_cast<std::size_t>(s)]) {
            result.failed_samples.push_back(s);
            if (result.first_failure.empty()) {
                result.first_failure =
                    "sample " + std::to_string(s) + ": " + messages[static_cast<std::size_t>(s)];
            }
        }
    }
    result.partial = !result.failed_samples.empty();
    const int done = cfg.samples - static_cast<int>(result.failed_samples.size());
    const double h = problem.tau() / cfg.steps;
    for (int j = 0; j < intervals; ++j) {
        double sum_p = 0.0;
        double sum = 0.0;
        double sum_sq = 0.0;
        for (int s = 0; s < cfg.samples; ++s) {
            if (failed[static_cast<std::size_t>(s)]) {
                continue;
            }
            const double v = maxima[static_cast<std::size_t>(s) * intervals + j];
            sum_p += std::pow(v, cfg.p);
            sum += v;
            sum_sq += v * v;
        }
        ErrorRow row;
        row.N = cfg.steps;
        row.h = h;
        row.j = j;
        row.K = done;
        row.p = cfg.p;
        if (done > 0) {
            row.err = std::pow(sum_p / done, 1.0 / cfg.p);
            if (done > 1) {
                const double mean = sum / done;
                row.spread = std::sqrt(std::max(0.0, (sum_sq - done * mean * mean) / (done - 1)));
            }
        } else {
            row.err = std::numeric_limits<double>::quiet_NaN();
        }
        result.rows.push_back(row);
    }
    return result;
}

}  // namespace

int resolve_refinement(const McConfig& cfg, double tau) {
    if (cfg.oracle) {
        return 1;
    }
    if (cfg.ref_factor) {
        if (*cfg.ref_factor < 1) {
            throw ValidationError("refinement factor m must be >= 1");
        }
        return *cfg.ref_factor;
    }
    if (!cfg.ref_step || !(*cfg.ref_step > 0.0)) {
        throw ValidationError("reference step must be positive");
    }
    const double h = tau / cfg.steps;
    const double ratio = h / *cfg.ref_step;
    const double m = std::round(ratio);
    if (m < 1.0 || std::abs(ratio - m) > 1e-9 * m) {
        throw ValidationError("reference step " + format_real(*cfg.ref_step) +
                              " does not divide h=" + format_real(h));
    }
    return static_cast<int>(m);
}

void sample_interval_maxima(const DDEProblem& problem, const ExactSolution& exact,
                            const McConfig& cfg, int refinement, int s, std::span<double> out) {
    const RandomStream sample = RandomStream(cfg.seed).derive("sample", {s});
    if (cfg.oracle) {
        const Trajectory coarse =
            cfg.scheme == Scheme::randomized
                ? [&] {
                      RandomStream stream = sample.derive("coarse", {});
                      return randomized_euler(problem, cfg.steps, stream);
                  }()
                : classical_euler(problem, cfg.steps);
        interval_maxima(coarse, nullptr, exact, out);
        return;
    }
    PairOptions options;
    options.coarse_scheme = cfg.scheme;
    options.reference_scheme = cfg.reference_scheme;
    options.shared_stream = cfg.shared_stream;
    const SolutionPair pair = solve_pair(problem, cfg.steps, refinement, sample, options);
    interval_maxima(pair.coarse, &pair.reference, exact, out);
}

McResult mc_error(const DDEProblem& problem, const McConfig& cfg, const ExactSolution& exact) {
    validate(problem, cfg, exact);
    const int refinement = resolve_refinement(cfg, problem.tau());
    const int intervals = problem.horizon() + 1;
    const auto samples = static_cast<std::size_t>(cfg.samples);
    std::vector<double> maxima(samples * intervals, 0.0);
    std::vector<char> failed(samples, 0);
    std::vector<std::string> messages(samples);

#pragma omp parallel for schedule(dynamic, 1)
    for (int s = 0; s < cfg.samples; ++s) {
        const auto idx = static_cast<std::size_t>(s);
        try {
            sample_interval_maxima(problem, exact, cfg, refinement, s,
                                   std::span<double>(maxima).subspan(idx * intervals, intervals));
        } catch (const std::exception& e) {
            failed[idx] = 1;
            messages[idx] = e.what();
        }
    }
    return reduce(problem, cfg, maxima, failed, messages);
}

McResult mc_error_serial(const DDEProblem& problem, const McConfig& cfg,
                         const ExactSolution& exact, std::span<const int> order) {
    validate(problem, cfg, exact);
    const int refinement = resolve_refinement(cfg, problem.tau());
    const int intervals = problem.horizon() + 1;
    const auto samples = static_cast<std::size_t>(cfg.samples);
    std::vector<int> sequence(samples);
    if (order.empty()) {
        std::iota(sequence.begin(), sequence.end(), 0);
    } else {
        if (order.size() != samples) {
            throw ValidationError("execution order must list every sample once");
        }
        sequence.assign(order.begin(), order.end());
    }
    std::vector<double> maxima(samples * intervals, 0.0);
    std::vector<char> failed(samples, 0);
    std::vector<std::string> messages(samples);
    for (int s : sequence) {
        const auto idx = static_cast<std::size_t>(s);
        try {
            sample_interval_maxima(problem, exact, cfg, refinement, s,
                                   std::span<double>(maxima).subspan(idx * intervals, intervals));
        } catch (const std::exception& e) {
            failed[idx] = 1;
            messages[idx] = e.what();
        }
    }
    return reduce(problem, cfg, maxima, failed, messages);
}

double SlopeReport::mean_pairwise() const {
    if (pairwise.empty()) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    double sum = 0.0;
    for (const auto& s : pairwise) {
        sum += s.slope;
    }
    return sum / static_cast<double>(pairwise.size());
}

SlopeReport fit_slopes(std::span<const ErrorRow> table, std::optional<int> interval) {
    struct Point {
        int N;
        double h;
        double err;
    };
    std::vector<Point> points;
    for (const auto& row : table) {
        if (interval && row.j != *interval) {
            continue;
        }
        auto it = std::find_if(points.begin(), points.end(),
                               [&](const Point& p) { return p.N == row.N; });
        if (it == points.end()) {
            points.push_back({row.N, row.h, row.err});
        } else {
            it->err = std::max(it->err, row.err);
        }
    }
    std::sort(points.begin(), points.end(), [](const Point& a, const Point& b) { return a.N < b.N; });

    SlopeReport report;
    report.interval = interval;
    std::vector<Point> usable;
    for (const auto& p : points) {
        if (p.err > 0.0 && std::isfinite(p.err)) {
            usable.push_back(p);
        } else {
            report.notices.push_back("N=" + std::to_string(p.N) +
                                     " dropped from fit: error is zero or not finite");
        }
    }
    if (usable.size() < 2) {
        throw DegenerateFit(usable.empty() && !points.empty()
                                ? "degenerate: zero errors"
                                : "degenerate: fewer than two usable points");
    }
    for (std::size_t i = 0; i + 1 < usable.size(); ++i) {
        const double dlog_err = std::log(usable[i + 1].err) - std::log(usable[i].err);
        const double dlog_N = std::log(static_cast<double>(usable[i + 1].N)) -
                              std::log(static_cast<double>(usable[i].N));
        report.pairwise.push_back({usable[i].N, usable[i + 1].N, -dlog_err / dlog_N});
    }

    const auto n = static_cast<double>(usable.size());
    double mx = 0.0;
    double my = 0.0;
    for (const auto& p : usable) {
        mx += std::log(p.h);
        my += std::log(p.err);
    }
    mx /= n;
    my /= n;
    double sxx = 0.0;
    double sxy = 0.0;
    double syy = 0.0;
    for (const auto& p : usable) {
        const double dx = std::log(p.h) - mx;
        const double dy = std::log(p.err) - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    report.ols_slope = sxy / sxx;
    report.ols_intercept = my - report.ols_slope * mx;
    report.r_squared = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
    return report;
}

BoundCertificate bound_certificate(std::span<const double> l1_norms,
                                   std::span<const double> lp_norms, double x0_norm, double p) {
    if (l1_norms.size() != lp_norms.size() || l1_norms.empty()) {
        throw ValidationError("need one L1 and one Lp norm per interval");
    }
    if (!(p > 1.0)) {
        throw ValidationError("certificate needs p > 1");
    }
    if (!(x0_norm >= 0.0)) {
        throw ValidationError("initial value norm must be nonnegative");
    }
    BoundCertificate cert;
    cert.l1_norms.assign(l1_norms.begin(), l1_norms.end());
    cert.lp_norms.assign(lp_norms.begin(), lp_norms.end());
    cert.x0_norm = x0_norm;
    cert.p = p;
    cert.K.push_back(x0_norm);
    for (std::size_t j = 0; j < l1_norms.size(); ++j) {
        if (!(l1_norms[j] >= 0.0) || !(lp_norms[j] >= 0.0)) {
            throw ValidationError("envelope norms must be nonnegative");
        }
        const double prev = cert.K.back();
        const double l1 = l1_norms[j];
        // 0 * inf is taken as 0: a zero envelope leaves the bound at 1 + K_{j-1}.
        const double growth = l1 == 0.0 ? 1.0 : std::exp((1.0 + prev) * l1);
        const double kj = (1.0 + prev) * (1.0 + l1) * growth;
        cert.K.push_back(kj);
        const double lp = lp_norms[j];
        cert.holder.push_back(lp == 0.0 ? 0.0 : (1.0 + prev) * (1.0 + kj) * lp);
    }
    return cert;
}

bool CheckReport::passed() const {
    return std::all_of(intervals.begin(), intervals.end(), [](const auto& c) { return c.ok; });
}

std::vector<int> CheckReport::violations() const {
    std::vector<int> out;
    for (const auto& c : intervals) {
        if (!c.ok) {
            out.push_back(c.j);
        }
    }
    return out;
}

CheckReport check_bounds(const Trajectory& traj, const BoundCertificate& cert) {
    const Mesh& mesh = traj.mesh();
    if (cert.horizon() < mesh.horizon()) {
        throw ValidationError("certificate does not cover every interval of the trajectory");
    }
    CheckReport report;
    for (int j = 0; j <= mesh.horizon(); ++j) {
        IntervalCheck check;
        check.j = j;
        check.limit = cert.bound(j);
        for (int k = 0; k <= mesh.steps(); ++k) {
            const double norm = euclidean_norm(traj.row_unchecked(j, k));
            if (norm > check.observed || !std::isfinite(norm)) {
                check.observed = norm;
                check.first = k;
            }
            if (!(norm <= check.limit) && check.ok) {
                check.ok = false;
                check.first = k;
            }
        }
        report.intervals.push_back(check);
    }
    return report;
}

CheckReport check_holder(const Trajectory& traj, const BoundCertificate& cert, double p) {
    if (!(p > 1.0)) {
        throw ValidationError("Hoelder check needs p > 1");
    }
    const Mesh& mesh = traj.mesh();
    if (cert.horizon() < mesh.horizon()) {
        throw ValidationError("certificate does not cover every interval of the trajectory");
    }
    const double exponent = std::isinf(p) ? 1.0 : 1.0 - 1.0 / p;
    CheckReport report;
    for (int j = 0; j <= mesh.horizon(); ++j) {
        IntervalCheck check;
        check.j = j;
        check.limit = cert.holder[static_cast<std::size_t>(j)];
        for (int i = 0; i <= mesh.steps(); ++i) {
            const auto yi = traj.row_unchecked(j, i);
            const double ti = mesh.time(j, i);
            for (int k = i + 1; k <= mesh.steps(); ++k) {
                const double dy = euclidean_distance(yi, traj.row_unchecked(j, k));
                const double dt = std::pow(mesh.time(j, k) - ti, exponent);
                const double ratio = dy / dt;
                if (ratio > check.observed) {
                    check.observed = ratio;
                }
                if (!(dy <= check.limit * dt) && check.ok) {
                    check.ok = false;
                    check.first = i;
                    check.second = k;
                }
            }
        }
        report.intervals.push_back(check);
    }
    return report;
}

}  // namespace ddex
