#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <vector>

#include "ddex/random.hpp"

using namespace ddex;

TEST_CASE("Philox4x32-10 matches the Random123 known-answer vectors") {
    CHECK(philox4x32_10({0u, 0u, 0u, 0u}, {0u, 0u}) ==
          PhiloxBlock{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
    CHECK(philox4x32_10({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                        {0xffffffffu, 0xffffffffu}) ==
          PhiloxBlock{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
    CHECK(philox4x32_10({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                        {0xa4093822u, 0x299f31d0u}) ==
          PhiloxBlock{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
}

namespace {

std::vector<double> draw(RandomStream s, int count) {
    std::vector<double> out(static_cast<std::size_t>(count));
    for (auto& v : out) {
        v = s.uniform();
    }
    return out;
}

}  // namespace

TEST_CASE("derive_stream is deterministic and distinguishes seeds, roles and indices") {
    const std::int64_t zero[] = {0};
    const std::int64_t one[] = {1};
    CHECK(draw(derive_stream(1, "sample", zero), 10000) == draw(derive_stream(1, "sample", zero), 10000));
    CHECK(draw(derive_stream(1, "sample", zero), 10000) != draw(derive_stream(1, "sample", one), 10000));
    CHECK(draw(derive_stream(1, "sample", zero), 10000) != draw(derive_stream(2, "sample", zero), 10000));
    CHECK(draw(derive_stream(1, "sample", zero), 100) != draw(derive_stream(1, "other", zero), 100));

    // Index lists of different length and order are different paths.
    const RandomStream root(9);
    CHECK(root.derive("x", {1, 2}).key() != root.derive("x", {2, 1}).key());
    CHECK(root.derive("x", {1}).key() != root.derive("x", {1, 0}).key());
}

TEST_CASE("derivation is order independent and does not disturb the parent") {
    RandomStream parent(42);
    const RandomStream first = parent.derive("sample", {7});
    (void)parent.uniform();
    (void)parent.derive("sample", {3});
    const RandomStream second = parent.derive("sample", {7});
    CHECK(first.key() == second.key());
    CHECK(draw(first, 50) == draw(second, 50));
}

TEST_CASE("uniform draws lie in [0, 1)") {
    RandomStream s(3);
    for (int i = 0; i < 100000; ++i) {
        const double u = s.uniform();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
    }
}

namespace {

struct Fixed {
    double u;
    double uniform() const { return u; }
};

}  // namespace

TEST_CASE("sample_theta substitutes into theta = t_k + h u") {
    const Mesh mesh(1.0, 2, 1);
    Fixed zero{0.0};
    CHECK(sample_theta(zero, mesh, 1, 1) == mesh.time(1, 1));
    Fixed half{0.5};
    CHECK(sample_theta(half, mesh, 1, 1) == 1.75);
}

TEST_CASE("theta stays strictly below the next node even for u close to 1") {
    const double u = std::nextafter(1.0, 0.0);
    for (double tau : {0.1, 0.3, 1.0, 2.0, 7.0}) {
        for (int steps : {1, 3, 7, 10, 1000}) {
            const Mesh mesh(tau, steps, 3);
            for (int j = 0; j <= 3; ++j) {
                for (int k = 0; k < steps; ++k) {
                    const double theta = theta_from_uniform(mesh, j, k, u);
                    REQUIRE(theta >= mesh.time(j, k));
                    REQUIRE(theta < mesh.time(j, k + 1));
                }
            }
        }
    }
}

TEST_CASE("theta offsets have mean 1/2") {
    RandomStream s = RandomStream(11).derive("theta", {});
    const Mesh mesh(1.0, 10, 0);
    double sum = 0.0;
    constexpr int draws = 100000;
    for (int i = 0; i < draws; ++i) {
        const int k = i % 10;
        sum += (sample_theta(s, mesh, 0, k) - mesh.time(0, k)) / mesh.step_size();
    }
    CHECK(std::abs(sum / draws - 0.5) < 0.01);
}

namespace {

// One-sample Kolmogorov-Smirnov statistic against Uniform[0,1).
double ks_uniform(std::vector<double> xs) {
    std::sort(xs.begin(), xs.end());
    const auto n = static_cast<double>(xs.size());
    double d = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        d = std::max({d, (static_cast<double>(i) + 1.0) / n - xs[i], xs[i] - static_cast<double>(i) / n});
    }
    return d;
}

}  // namespace

TEST_CASE("pooled theta offsets across sample substreams pass a KS test at 1%") {
    // 100 sample streams x 100 steps: 10^4 (j, k) draws.
    const Mesh mesh(1.0, 100, 0);
    std::vector<double> offsets;
    for (int s = 0; s < 100; ++s) {
        RandomStream stream = RandomStream(2024).derive("sample", {s}).derive("coarse", {});
        for (int k = 0; k < 100; ++k) {
            offsets.push_back((sample_theta(stream, mesh, 0, k) - mesh.time(0, k)) / mesh.step_size());
        }
    }
    const double d = ks_uniform(offsets);
    CHECK(d < 1.628 / std::sqrt(static_cast<double>(offsets.size())));
}

TEST_CASE("normal deviates have unit variance") {
    RandomStream s(5);
    double sum = 0.0;
    double sum_sq = 0.0;
    constexpr int draws = 200000;
    for (int i = 0; i < draws; ++i) {
        const double z = s.normal();
        sum += z;
        sum_sq += z * z;
    }
    CHECK(std::abs(sum / draws) < 0.01);
    CHECK(std::abs(sum_sq / draws - 1.0) < 0.02);
}

TEST_CASE("brownian_path starts at zero and Var Z(1) = 1") {
    const PiecewisePath one = brownian_path(1.0, 0.01, RandomStream(1));
    CHECK(one.values().front() == 0.0);
    CHECK(one.values().size() == 101);
    CHECK(eval_path_linear(one, -0.3) == 0.0);

    double sum = 0.0;
    double sum_sq = 0.0;
    constexpr int paths = 10000;
    for (int p = 0; p < paths; ++p) {
        const PiecewisePath path = brownian_path(1.0, 0.05, RandomStream(77).derive("path", {p}));
        const double z = path.values().back();
        sum += z;
        sum_sq += z * z;
    }
    const double mean = sum / paths;
    const double var = (sum_sq - paths * mean * mean) / (paths - 1);
    CHECK(std::abs(var - 1.0) < 0.05);
}

TEST_CASE("eval_path_linear interpolates between nodes") {
    const PiecewisePath path(0.5, {0.0, 2.0, 4.0, 1.0});
    CHECK(eval_path_linear(path, 0.5) == 2.0);
    CHECK(eval_path_linear(path, 1.0) == 4.0);
    CHECK(eval_path_linear(path, 0.75) == doctest::Approx(3.0));
    CHECK(eval_path_linear(path, 1.5) == 1.0);
    CHECK(eval_path_linear(path, -1e-9) == 0.0);
    CHECK(eval_path_linear(path, -7.0) == 0.0);
    CHECK_THROWS_AS(eval_path_linear(path, 1.6), std::out_of_range);

    // Node exactness when t was formed as i * step.
    const PiecewisePath bm = brownian_path(3.0, 0.1, RandomStream(4));
    for (std::size_t i = 0; i < bm.values().size(); ++i) {
        CHECK(eval_path_linear(bm, static_cast<double>(i) * 0.1) == bm.values()[i]);
    }
}

TEST_CASE("eval_path_linear is continuous") {
    const PiecewisePath bm = brownian_path(1.0, 1.0 / 64, RandomStream(8));
    double prev = eval_path_linear(bm, 0.0);
    for (int i = 1; i <= 100000; ++i) {
        const double t = i * 1e-5;
        const double v = eval_path_linear(bm, t);
        REQUIRE(std::abs(v - prev) < 1e-2);
        prev = v;
    }
}

TEST_CASE("path CSV lists i,t,Z") {
    const PiecewisePath path(0.5, {0.0, 1.5});
    std::ostringstream os;
    write_path_csv(os, path);
    CHECK(os.str() == "i,t,Z\n0,0,0\n1,0.5,1.5\n");
}
