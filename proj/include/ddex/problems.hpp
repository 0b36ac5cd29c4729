#pragma once

// Test problems with time-irregular right-hand sides, the singular weight
// k(t), and the closed-form solution of the oscillatory linear delay problem
// x'(t) = 3 x(t - tau) sin(lambda t).

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ddex/core.hpp"
#include "ddex/random.hpp"

namespace ddex {

// ((j+1) tau - t)^(-1/gamma) for the half-open interval [j tau, (j+1) tau)
// containing t. Finite everywhere on [0, (n+1) tau); interior multiples of
// tau belong to the interval they start.
double k_weight(double t, double gamma, double tau, int horizon);

// k(t) * (x + 0.01 |z|^alpha + sin(M x) cos(P |z|^alpha))
DDEProblem make_f1(double M, double P, double alpha, double gamma, double tau, int horizon,
                   double x0 = 1.0);

// k(t) * sin(10 x) * P |z|^alpha / M
DDEProblem make_f2(double M, double P, double alpha, double gamma, double tau, int horizon,
                   double x0 = 1.0);

// 3 z sin(lambda t)
DDEProblem make_kainhofer(double lambda, double tau, double x0, int horizon);

// Closed-form solution of the kainhofer problem on [0, 2 tau].
double kainhofer_exact(double t, double lambda, double tau, double x0);

// sin(lambda1 t) + x + |z|^alpha, x = 1 on [-tau, 0)
DDEProblem make_comparison(double lambda1, double alpha, double tau, int horizon);

// x + Z(t) + z + Z(t - tau) for a fixed path Z, x0 = 1.
DDEProblem make_wiener_perturbed(std::shared_ptr<const PiecewisePath> path, double tau,
                                 int horizon);

/// Per-interval norms of an integrable envelope K(t) with
/// ||f(t,x,z)|| <= K(t) (1 + ||x||) (1 + ||z||).
struct EnvelopeNorms {
    std::vector<double> l1;  // ||K||_{L^1([j tau, (j+1) tau])}
    std::vector<double> lp;  // ||K||_{L^p([j tau, (j+1) tau])}, may be +inf
    double p = 2.0;
};

enum class PresetKind { f1, f2, kainhofer, comparison, wiener };

std::optional<PresetKind> parse_preset_kind(const std::string& name);
std::string preset_kind_name(PresetKind kind);

// Unset fields take the preset's documented default.
struct PresetParams {
    std::optional<double> M;
    std::optional<double> P;
    std::optional<double> alpha;
    std::optional<double> gamma;
    std::optional<double> lambda;
    std::optional<double> lambda1;
    std::optional<double> tau;
    std::optional<int> horizon;
    std::optional<double> x0;
    std::optional<double> path_step;  // wiener only
    std::uint64_t seed = 0;           // wiener path realization
};

struct ProblemPreset {
    PresetKind kind;
    std::string name;
    std::map<std::string, double> parameters;
    DDEProblem problem;
    // Exact solution where available (kainhofer, on [0, 2 tau]).
    std::function<State(double)> exact;
    // Envelope norms for the a priori bound certificate, p in (1, inf].
    std::function<EnvelopeNorms(double p)> envelope;
    std::shared_ptr<const PiecewisePath> path;  // wiener only

    bool has_exact() const noexcept { return static_cast<bool>(exact); }
};

ProblemPreset make_preset(PresetKind kind, const PresetParams& params);

}  // namespace ddex
