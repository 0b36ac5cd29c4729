#include "ddex/problems.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace ddex {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha <= 1.0)) {
        throw ValidationError("alpha must lie in (0, 1]");
    }
}

void require_gamma(double gamma) {
    if (!(gamma > 0.0)) {
        throw ValidationError("gamma must be positive");
    }
}

void require_nonzero_M(double M) {
    if (M == 0.0 || !std::isfinite(M)) {
        throw ValidationError("M must be finite and nonzero");
    }
}

// Norms of s^(-1/gamma) over s in (0, tau].
double singular_l1(double gamma, double tau) {
    const double e = 1.0 - 1.0 / gamma;
    return e > 0.0 ? std::pow(tau, e) / e : kInf;
}

double singular_lp(double gamma, double tau, double p) {
    if (std::isinf(p)) {
        return kInf;
    }
    const double e = 1.0 - p / gamma;
    return e > 0.0 ? std::pow(std::pow(tau, e) / e, 1.0 / p) : kInf;
}

EnvelopeNorms uniform_envelope(double constant, double tau, int horizon, double p) {
    EnvelopeNorms norms;
    norms.p = p;
    const double lp = std::isinf(p) ? constant : constant * std::pow(tau, 1.0 / p);
    norms.l1.assign(horizon + 1, constant * tau);
    norms.lp.assign(horizon + 1, lp);
    return norms;
}

EnvelopeNorms singular_envelope(double scale, double gamma, double tau, int horizon, double p) {
    EnvelopeNorms norms;
    norms.p = p;
    norms.l1.assign(horizon + 1, scale * singular_l1(gamma, tau));
    norms.lp.assign(horizon + 1, scale * singular_lp(gamma, tau, p));
    return norms;
}

double max_abs_on(const PiecewisePath& path, double a, double b) {
    if (b < 0.0) {
        return 0.0;
    }
    const auto& z = path.values();
    const auto last = static_cast<std::ptrdiff_t>(z.size()) - 1;
    auto lo = static_cast<std::ptrdiff_t>(std::floor(std::max(a, 0.0) / path.step())) - 1;
    auto hi = static_cast<std::ptrdiff_t>(std::ceil(b / path.step())) + 1;
    lo = std::clamp<std::ptrdiff_t>(lo, 0, last);
    hi = std::clamp<std::ptrdiff_t>(hi, 0, last);
    double m = 0.0;
    for (auto i = lo; i <= hi; ++i) {
        m = std::max(m, std::abs(z[static_cast<std::size_t>(i)]));
    }
    return m;
}

}  // namespace

double k_weight(double t, double gamma, double tau, int horizon) {
    require_gamma(gamma);
    if (!(t >= 0.0) || !(t < (horizon + 1) * tau)) {
        throw std::domain_error("k_weight: t outside [0, (n+1) tau)");
    }
    int j = std::min(static_cast<int>(std::floor(t / tau)), horizon);
    if (t < j * tau) {
        --j;
    } else if (t >= (j + 1) * tau) {
        ++j;
    }
    return std::pow((j + 1) * tau - t, -1.0 / gamma);
}

DDEProblem make_f1(double M, double P, double alpha, double gamma, double tau, int horizon,
                   double x0) {
    require_alpha(alpha);
    require_gamma(gamma);
    require_nonzero_M(M);
    RhsFunction f = [=](double t, std::span<const double> x, std::span<const double> z,
                        std::span<double> out) {
        const double w = k_weight(t, gamma, tau, horizon);
        for (std::size_t c = 0; c < x.size(); ++c) {
            const double za = std::pow(std::abs(z[c]), alpha);
            out[c] = w * (x[c] + 0.01 * za + std::sin(M * x[c]) * std::cos(P * za));
        }
    };
    return DDEProblem(RightHandSide(1, std::move(f)), tau, horizon, State{x0});
}

DDEProblem make_f2(double M, double P, double alpha, double gamma, double tau, int horizon,
                   double x0) {
    require_alpha(alpha);
    require_gamma(gamma);
    require_nonzero_M(M);
    RhsFunction f = [=](double t, std::span<const double> x, std::span<const double> z,
                        std::span<double> out) {
        const double w = k_weight(t, gamma, tau, horizon);
        for (std::size_t c = 0; c < x.size(); ++c) {
            out[c] = w * std::sin(10.0 * x[c]) * P * std::pow(std::abs(z[c]), alpha) / M;
        }
    };
    return DDEProblem(RightHandSide(1, std::move(f)), tau, horizon, State{x0});
}

DDEProblem make_kainhofer(double lambda, double tau, double x0, int horizon) {
    if (!(lambda > 0.0)) {
        throw ValidationError("lambda must be positive");
    }
    RhsFunction f = [lambda](double t, std::span<const double>, std::span<const double> z,
                             std::span<double> out) {
        const double s = 3.0 * std::sin(lambda * t);
        for (std::size_t c = 0; c < z.size(); ++c) {
            out[c] = s * z[c];
        }
    };
    return DDEProblem(RightHandSide(1, std::move(f)), tau, horizon, State{x0});
}

double kainhofer_exact(double t, double lambda, double tau, double x0) {
    if (!(t >= 0.0 && t <= 2.0 * tau)) {
        throw std::domain_error("kainhofer_exact: t outside [0, 2 tau]");
    }
    const auto phi0 = [&](double s) { return x0 + 3.0 * x0 * (1.0 - std::cos(lambda * s)) / lambda; };
    if (t <= tau) {
        return phi0(t);
    }
    const double l2 = lambda * lambda;
    return phi0(tau) -
           (9.0 * x0 / l2 + 3.0 * x0 / lambda) * (std::cos(lambda * t) - std::cos(lambda * tau)) +
           9.0 * x0 / (2.0 * lambda) * (t - tau) * std::sin(-lambda * tau) +
           9.0 * x0 / (4.0 * l2) * (std::cos(2.0 * lambda * t - lambda * tau) - std::cos(lambda * tau));
}

DDEProblem make_comparison(double lambda1, double alpha, double tau, int horizon) {
    require_alpha(alpha);
    RhsFunction f = [=](double t, std::span<const double> x, std::span<const double> z,
                        std::span<double> out) {
        const double forcing = std::sin(lambda1 * t);
        for (std::size_t c = 0; c < x.size(); ++c) {
            out[c] = forcing + x[c] + std::pow(std::abs(z[c]), alpha);
        }
    };
    return DDEProblem(RightHandSide(1, std::move(f)), tau, horizon, State{1.0});
}

DDEProblem make_wiener_perturbed(std::shared_ptr<const PiecewisePath> path, double tau,
                                 int horizon) {
    if (!path) {
        throw ValidationError("wiener problem needs a path");
    }
    const double end = (horizon + 1) * tau;
    if (path->horizon() < end * (1.0 - 1e-12)) {
        throw ValidationError("path horizon is shorter than (n+1) tau");
    }
    RhsFunction f = [path = std::move(path), tau](double t, std::span<const double> x,
                                                  std::span<const double> z,
                                                  std::span<double> out) {
        const double shift = eval_path_linear(*path, t) + eval_path_linear(*path, t - tau);
        for (std::size_t c = 0; c < x.size(); ++c) {
            out[c] = x[c] + z[c] + shift;
        }
    };
    return DDEProblem(RightHandSide(1, std::move(f)), tau, horizon, State{1.0});
}

std::optional<PresetKind> parse_preset_kind(const std::string& name) {
    if (name == "f1") return PresetKind::f1;
    if (name == "f2") return PresetKind::f2;
    if (name == "kainhofer") return PresetKind::kainhofer;
    if (name == "comparison") return PresetKind::comparison;
    if (name == "wiener") return PresetKind::wiener;
    return std::nullopt;
}

std::string preset_kind_name(PresetKind kind) {
    switch (kind) {
        case PresetKind::f1: return "f1";
        case PresetKind::f2: return "f2";
        case PresetKind::kainhofer: return "kainhofer";
        case PresetKind::comparison: return "comparison";
        case PresetKind::wiener: return "wiener";
    }
    return "unknown";
}

ProblemPreset make_preset(PresetKind kind, const PresetParams& params) {
    const std::string name = preset_kind_name(kind);
    switch (kind) {
        case PresetKind::f1:
        case PresetKind::f2: {
            const double M = params.M.value_or(10.0);
            const double P = params.P.value_or(100.0);
            const double alpha = params.alpha.value_or(1.0);
            const double gamma = params.gamma.value_or(5.0);
            const double tau = params.tau.value_or(1.0);
            const int n = params.horizon.value_or(5);
            const double x0 = params.x0.value_or(1.0);
            auto problem = kind == PresetKind::f1 ? make_f1(M, P, alpha, gamma, tau, n, x0)
                                                  : make_f2(M, P, alpha, gamma, tau, n, x0);
            // f1: |x| + 0.01|z|^a + 1 <= 1.01 (1+|x|)(1+|z|);  f2: P|z|^a/|M| <= P/|M| (1+|z|)
            const double scale = kind == PresetKind::f1 ? 1.01 : P / std::abs(M);
            return ProblemPreset{
                kind,
                name,
                {{"M", M}, {"P", P}, {"alpha", alpha}, {"gamma", gamma}, {"tau", tau},
                 {"n", n}, {"x0", x0}},
                std::move(problem),
                {},
                [=](double p) { return singular_envelope(scale, gamma, tau, n, p); },
                nullptr};
        }
        case PresetKind::kainhofer: {
            const double lambda = params.lambda.value_or(2.0);
            const double tau = params.tau.value_or(1.0);
            const int n = params.horizon.value_or(1);
            const double x0 = params.x0.value_or(1.0);
            std::function<State(double)> exact;
            if (n <= 1) {
                exact = [=](double t) { return State{kainhofer_exact(t, lambda, tau, x0)}; };
            }
            return ProblemPreset{kind,
                                 name,
                                 {{"lambda", lambda}, {"tau", tau}, {"n", n}, {"x0", x0}},
                                 make_kainhofer(lambda, tau, x0, n),
                                 std::move(exact),
                                 [=](double p) { return uniform_envelope(3.0, tau, n, p); },
                                 nullptr};
        }
        case PresetKind::comparison: {
            const double lambda1 = params.lambda1.value_or(512.0 * std::numbers::pi);
            const double alpha = params.alpha.value_or(0.2);
            const double tau = params.tau.value_or(1.0);
            const int n = params.horizon.value_or(2);
            if (params.x0 && *params.x0 != 1.0) {
                throw ValidationError("comparison preset has fixed initial value 1");
            }
            // |sin| + |x| + |z|^a <= 2 (1+|x|)(1+|z|)
            return ProblemPreset{
                kind,
                name,
                {{"lambda1", lambda1}, {"alpha", alpha}, {"tau", tau}, {"n", n}, {"x0", 1.0}},
                make_comparison(lambda1, alpha, tau, n),
                {},
                [=](double p) { return uniform_envelope(2.0, tau, n, p); },
                nullptr};
        }
        case PresetKind::wiener: {
            const double tau = params.tau.value_or(2.0);
            const int n = params.horizon.value_or(1);
            const double step = params.path_step.value_or(std::ldexp(1.0, -12));
            if (params.x0 && *params.x0 != 1.0) {
                throw ValidationError("wiener preset has fixed initial value 1");
            }
            if (!(tau > 0.0) || n < 0) {
                throw ValidationError("wiener preset needs tau > 0 and n >= 0");
            }
            auto path = std::make_shared<const PiecewisePath>(
                brownian_path((n + 1) * tau, step, RandomStream(params.seed).derive("wiener_path", {})));
            // |x + z + Z(t) + Z(t-tau)| <= (1 + |Z(t)| + |Z(t-tau)|)(1+|x|)(1+|z|)
            auto envelope = [=](double p) {
                EnvelopeNorms norms;
                norms.p = p;
                for (int j = 0; j <= n; ++j) {
                    const double sup = 1.0 + max_abs_on(*path, j * tau, (j + 1) * tau) +
                                       max_abs_on(*path, (j - 1) * tau, j * tau);
                    norms.l1.push_back(sup * tau);
                    norms.lp.push_back(std::isinf(p) ? sup : sup * std::pow(tau, 1.0 / p));
                }
                return norms;
            };
            return ProblemPreset{kind,
                                 name,
                                 {{"tau", tau}, {"n", n}, {"x0", 1.0}, {"path_step", step},
                                  {"path_seed", static_cast<double>(params.seed)}},
                                 make_wiener_perturbed(path, tau, n),
                                 {},
                                 std::move(envelope),
                                 path};
        }
    }
    throw ValidationError("unknown preset");
}

}  // namespace ddex
