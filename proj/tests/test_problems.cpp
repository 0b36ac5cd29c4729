#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <memory>
#include <numbers>
#include <sstream>
#include <vector>

#include "ddex/problems.hpp"
#include "ddex/solvers.hpp"

using namespace ddex;

namespace {

double eval(const DDEProblem& problem, double t, double x, double z) {
    return problem.rhs()(t, State{x}, State{z})[0];
}

// Straight transcriptions, written independently of the library.
double f1_reference(double t, double x, double z, double M, double P, double a, double g, double tau) {
    const double j = std::floor(t / tau);
    const double w = 1.0 / std::pow((j + 1.0) * tau - t, 1.0 / g);
    const double za = std::pow(std::fabs(z), a);
    return w * (x + za / 100.0 + std::sin(M * x) * std::cos(P * za));
}

double f2_reference(double t, double x, double z, double M, double P, double a, double g, double tau) {
    const double j = std::floor(t / tau);
    const double w = 1.0 / std::pow((j + 1.0) * tau - t, 1.0 / g);
    return w * std::sin(10.0 * x) * (P / M) * std::pow(std::fabs(z), a);
}

double simpson(auto&& g, double a, double b, int intervals) {
    const double h = (b - a) / intervals;
    double sum = g(a) + g(b);
    for (int i = 1; i < intervals; ++i) {
        sum += (i % 2 == 1 ? 4.0 : 2.0) * g(a + i * h);
    }
    return sum * h / 3.0;
}

}  // namespace

TEST_CASE("k_weight examples") {
    for (double gamma : {0.5, 2.0, 5.0, 100.0}) {
        CHECK(k_weight(0.0, gamma, 1.0, 3) == 1.0);
    }
    CHECK(k_weight(0.75, 2.0, 1.0, 0) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(k_weight(1.75, 2.0, 1.0, 1) == doctest::Approx(2.0).epsilon(1e-15));
    // Interior multiples of tau start a new interval.
    CHECK(k_weight(1.0, 2.0, 1.0, 2) == 1.0);
    CHECK_THROWS_AS(k_weight(-0.1, 2.0, 1.0, 1), std::domain_error);
    CHECK_THROWS_AS(k_weight(2.0, 2.0, 1.0, 1), std::domain_error);
    CHECK_THROWS_AS(k_weight(0.5, 0.0, 1.0, 1), ValidationError);
}

TEST_CASE("k_weight is increasing within an interval and tau-periodic") {
    RandomStream gen(5);
    const double tau = 0.7;
    for (int i = 0; i < 1000; ++i) {
        const double s = gen.uniform() * tau * 0.999;
        const double ds = (tau - s) * 0.5 * gen.uniform();
        CHECK(k_weight(s, 3.0, tau, 4) <= k_weight(s + ds, 3.0, tau, 4));
        const double base = k_weight(s, 3.0, tau, 4);
        for (int j = 1; j <= 4; ++j) {
            CHECK(k_weight(s + j * tau, 3.0, tau, 4) == doctest::Approx(base).epsilon(1e-6));
        }
    }
}

TEST_CASE("k^p is not integrable for gamma = p = 2: truncated sums grow without bound") {
    // Integral over [0, 1 - eps] of (1 - t)^-1 equals log(1/eps).
    double previous = 0.0;
    for (double eps : {1e-2, 1e-4, 1e-6, 1e-8}) {
        const int cells = 200000;
        // Midpoint rule on a geometric grid in s = 1 - t.
        double sum = 0.0;
        const double ratio = std::pow(1.0 / eps, 1.0 / cells);
        double lo = eps;
        for (int i = 0; i < cells; ++i) {
            const double hi = lo * ratio;
            const double w = k_weight(1.0 - 0.5 * (lo + hi), 2.0, 1.0, 0);
            sum += w * w * (hi - lo);
            lo = hi;
        }
        CHECK(sum == doctest::Approx(std::log(1.0 / eps)).epsilon(1e-3));
        CHECK(sum > previous + 4.0);
        previous = sum;
    }
}

TEST_CASE("f1 examples and independent transcription") {
    CHECK(eval(make_f1(10, 100, 1.0, 5.0, 1.0, 0), 0.0, 0.0, 0.0) == 0.0);
    CHECK(eval(make_f1(10, 100, 1.0, 5.0, 1.0, 0), 0.0, 0.0, 1.0) == doctest::Approx(0.01).epsilon(1e-15));
    CHECK(eval(make_f1(10, 100, 0.5, 5.0, 1.0, 0), 0.5, 0.2, 0.3) ==
          doctest::Approx(f1_reference(0.5, 0.2, 0.3, 10, 100, 0.5, 5.0, 1.0)).epsilon(1e-13));

    RandomStream gen(11);
    for (int i = 0; i < 1000; ++i) {
        const double alpha = 0.05 + 0.95 * gen.uniform();
        const double gamma = 0.5 + 5.0 * gen.uniform();
        const double tau = 0.5 + gen.uniform();
        const int n = 3;
        const double t = gen.uniform() * (n + 1) * tau * 0.999;
        const double x = 4.0 * gen.uniform() - 2.0;
        const double z = 4.0 * gen.uniform() - 2.0;
        const double M = 1.0 + 20.0 * gen.uniform();
        const double P = 1.0 + 200.0 * gen.uniform();
        const double got1 = eval(make_f1(M, P, alpha, gamma, tau, n), t, x, z);
        const double want1 = f1_reference(t, x, z, M, P, alpha, gamma, tau);
        CHECK(std::abs(got1 - want1) <= 1e-12 * std::max(1.0, std::abs(want1)));
        const double got2 = eval(make_f2(M, P, alpha, gamma, tau, n), t, x, z);
        const double want2 = f2_reference(t, x, z, M, P, alpha, gamma, tau);
        CHECK(std::abs(got2 - want2) <= 1e-12 * std::max(1.0, std::abs(want2)));
    }
}

TEST_CASE("f2 examples") {
    const auto f2 = make_f2(10, 100, 1.0, 2.1, 1.0, 1);
    CHECK(eval(f2, 0.3, 0.0, 1.7) == 0.0);
    CHECK(eval(f2, 1.6, 0.0, -0.4) == 0.0);
    CHECK(eval(f2, 0.0, std::numbers::pi / 20.0, 1.0) == doctest::Approx(10.0).epsilon(1e-14));
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(make_f1(10, 100, 0.0, 5, 1, 1), ValidationError);
    CHECK_THROWS_AS(make_f1(10, 100, 1.5, 5, 1, 1), ValidationError);
    CHECK_THROWS_AS(make_f1(10, 100, 1.0, -1, 1, 1), ValidationError);
    CHECK_THROWS_AS(make_f2(0, 100, 1.0, 5, 1, 1), ValidationError);
    CHECK_THROWS_AS(make_f1(10, 100, 1.0, 5, 0, 1), ValidationError);
    CHECK_THROWS_AS(make_kainhofer(0.0, 1, 1, 1), ValidationError);
    CHECK_THROWS_AS(make_comparison(1.0, 0.0, 1, 1), ValidationError);
    CHECK_THROWS_AS(make_wiener_perturbed(nullptr, 1, 1), ValidationError);
    CHECK_FALSE(parse_preset_kind("f3").has_value());
    for (auto kind : {PresetKind::f1, PresetKind::f2, PresetKind::kainhofer, PresetKind::comparison,
                      PresetKind::wiener}) {
        CHECK(parse_preset_kind(preset_kind_name(kind)) == kind);
    }
}

TEST_CASE("kainhofer right-hand side") {
    const auto k2 = make_kainhofer(2.0, 1.0, 1.0, 1);
    CHECK(eval(k2, 0.0, 5.0, 7.0) == 0.0);
    CHECK(eval(k2, std::numbers::pi / 4.0, 0.0, 1.0) == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(eval(make_kainhofer(4.0, 1.0, 1.0, 1), 1.0, 0.0, 2.0) ==
          doctest::Approx(6.0 * std::sin(4.0)).epsilon(1e-15));
}

TEST_CASE("kainhofer closed form") {
    CHECK(kainhofer_exact(0.0, 2.0, 1.0, 1.0) == 1.0);
    CHECK(kainhofer_exact(0.0, 256.0, 1.0, -3.0) == -3.0);
    CHECK(kainhofer_exact(1.0, 2.0, 1.0, 1.0) ==
          doctest::Approx(1.0 + 3.0 * (1.0 - std::cos(2.0)) / 2.0).epsilon(1e-15));
    CHECK_THROWS_AS(kainhofer_exact(-0.01, 2.0, 1.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(kainhofer_exact(2.01, 2.0, 1.0, 1.0), std::domain_error);

    SUBCASE("branches meet at tau") {
        for (double lambda : {0.5, 2.0, 7.3, 256.0}) {
            const double tau = 1.3;
            const double left = kainhofer_exact(std::nextafter(tau, 0.0), lambda, tau, 1.0);
            const double right = kainhofer_exact(std::nextafter(tau, 3.0), lambda, tau, 1.0);
            CHECK(left == doctest::Approx(right).epsilon(1e-12));
        }
    }
    SUBCASE("integral identity on [tau, 2 tau]") {
        for (double lambda : {2.0, 5.0, 32.0}) {
            const double tau = 1.0, x0 = 1.5;
            const auto phi0 = [&](double s) { return kainhofer_exact(s, lambda, tau, x0); };
            for (double t : {1.1, 1.5, 1.9, 2.0}) {
                const double integral =
                    simpson([&](double s) { return 3.0 * phi0(s - tau) * std::sin(lambda * s); }, tau, t, 4000);
                CHECK(std::abs(kainhofer_exact(t, lambda, tau, x0) - (phi0(tau) + integral)) < 1e-6);
            }
        }
    }
    SUBCASE("fine classical Euler agrees to 1e-3 relative") {
        const auto traj = classical_euler(make_kainhofer(2.0, 1.0, 1.0, 1), 1 << 14);
        for (int j = 0; j <= 1; ++j) {
            const double exact = kainhofer_exact(j + 1.0, 2.0, 1.0, 1.0);
            CHECK(std::abs(traj.at(j, 1 << 14)[0] - exact) < 1e-3 * std::abs(exact));
        }
    }
}

TEST_CASE("comparison right-hand side") {
    const double lambda1 = 512.0 * std::numbers::pi;
    const auto cmp = make_comparison(lambda1, 0.2, 1.0, 2);
    CHECK(eval(cmp, 0.0, 1.0, 1.0) == 2.0);
    const double trough = 3.0 * std::numbers::pi / (2.0 * lambda1);
    CHECK(eval(cmp, trough, 0.0, 0.0) == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(cmp.x0() == State{1.0});
}

TEST_CASE("wiener-perturbed right-hand side") {
    SUBCASE("zero path reduces to x + z") {
        auto zero = std::make_shared<const PiecewisePath>(0.25, std::vector<double>(9, 0.0));
        const auto p = make_wiener_perturbed(zero, 1.0, 1);
        CHECK(eval(p, 0.3, 2.0, 5.0) == 7.0);
        CHECK(eval(p, 1.7, -1.0, 0.5) == -0.5);
    }
    SUBCASE("grid nodes use stored values; negative delayed time contributes 0") {
        auto path = std::make_shared<const PiecewisePath>(
            brownian_path(4.0, 1.0 / 64.0, RandomStream(3).derive("wiener_path", {})));
        const auto p = make_wiener_perturbed(path, 2.0, 1);
        const auto& z = path->values();
        CHECK(eval(p, 0.5, 1.0, 2.0) == 3.0 + z[32]);  // t - tau < 0
        CHECK(eval(p, 2.5, 1.0, 2.0) == doctest::Approx(3.0 + z[160] + z[32]).epsilon(1e-15));
    }
    SUBCASE("short path rejected") {
        auto path = std::make_shared<const PiecewisePath>(0.5, std::vector<double>(3, 0.0));
        CHECK_THROWS_AS(make_wiener_perturbed(path, 1.0, 1), ValidationError);
    }
}

TEST_CASE("presets") {
    PresetParams params;
    const auto f1 = make_preset(PresetKind::f1, params);
    CHECK(f1.problem.horizon() == 5);
    CHECK(f1.problem.x0() == State{1.0});
    CHECK_FALSE(f1.has_exact());
    CHECK(f1.parameters.at("gamma") == 5.0);

    const auto k = make_preset(PresetKind::kainhofer, params);
    REQUIRE(k.has_exact());
    CHECK(k.exact(1.0)[0] == kainhofer_exact(1.0, 2.0, 1.0, 1.0));
    const auto env = k.envelope(INFINITY);
    CHECK(env.l1 == std::vector<double>{3.0, 3.0});
    CHECK(env.lp == std::vector<double>{3.0, 3.0});

    params.x0 = 2.0;
    CHECK_THROWS_AS(make_preset(PresetKind::comparison, params), ValidationError);
    CHECK_THROWS_AS(make_preset(PresetKind::wiener, params), ValidationError);
    params.x0.reset();

    params.gamma = 2.1;
    const auto f2 = make_preset(PresetKind::f2, params);
    const auto e2 = f2.envelope(2.0);
    CHECK(e2.l1[0] == doctest::Approx(10.0 / (1.0 - 1.0 / 2.1)));
    CHECK(std::isfinite(e2.lp[0]));
    CHECK(std::isinf(f2.envelope(3.0).lp[0]));

    params.seed = 9;
    const auto w1 = make_preset(PresetKind::wiener, params);
    const auto w2 = make_preset(PresetKind::wiener, params);
    REQUIRE(w1.path);
    CHECK(w1.path->values() == w2.path->values());
    CHECK(w1.path->values().front() == 0.0);
}
