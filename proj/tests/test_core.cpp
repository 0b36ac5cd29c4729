#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "ddex/core.hpp"

using namespace ddex;

TEST_CASE("make_mesh substitutes into t = j tau + k h") {
    const Mesh mesh = make_mesh(1.0, 4, 2);
    CHECK(mesh.step_size() == 0.25);
    CHECK(mesh.time(1, 2) == 1.5);

    const Mesh short_mesh = make_mesh(2.0, 2, 0);
    CHECK(short_mesh.step_size() == 1.0);
    CHECK(short_mesh.time(0, 0) == 0.0);
    CHECK(short_mesh.time(0, 1) == 1.0);
    CHECK(short_mesh.time(0, 2) == 2.0);
}

TEST_CASE("make_mesh rejects non-positive tau or N") {
    CHECK_THROWS_AS(make_mesh(1.0, 0, 0), ValidationError);
    CHECK_THROWS_AS(make_mesh(0.0, 4, 0), ValidationError);
    CHECK_THROWS_AS(make_mesh(-1.0, 4, 0), ValidationError);
    CHECK_THROWS_AS(make_mesh(1.0, 4, -1), ValidationError);
    CHECK_THROWS_AS(make_mesh(1.0, 4, 1).time(2, 0), std::out_of_range);
}

TEST_CASE("interval endpoints are bit-identical across many meshes") {
    // tau = 0.1 and N = 3 or 7 are cases where N * (tau / N) != tau.
    for (double tau : {0.1, 0.3, 1.0 / 3.0, 0.7, 1.0, 2.0, 3.7, 1e-3}) {
        for (int steps : {1, 2, 3, 7, 10, 49, 100, 1000}) {
            const Mesh mesh(tau, steps, 6);
            for (int j = 0; j < mesh.horizon(); ++j) {
                CHECK(mesh.time(j, steps) == mesh.time(j + 1, 0));
                CHECK(mesh.time(j + 1, 0) == (j + 1) * tau);
            }
            CHECK(std::abs(mesh.step_size() * steps - tau) <= 2.0 * std::numeric_limits<double>::epsilon() * tau);
        }
    }
}

namespace {

Trajectory ramp_trajectory(int steps, int horizon) {
    Trajectory traj(Mesh(1.0, steps, horizon), 2, State{5.0, -5.0});
    for (int j = 0; j <= horizon; ++j) {
        for (int k = 0; k <= steps; ++k) {
            // Continuous in the global index so the splice holds.
            const double v = j * steps + k;
            traj.set(j, k, State{v, 2.0 * v});
        }
    }
    return traj;
}

}  // namespace

TEST_CASE("trajectory_at returns x0 on the initial segment and honours the splice") {
    const Trajectory traj = ramp_trajectory(2, 2);
    const auto initial = trajectory_at(traj, -1, 2);
    CHECK(initial[0] == 5.0);
    CHECK(initial[1] == -5.0);

    const auto a = trajectory_at(traj, 1, 0);
    const auto b = trajectory_at(traj, 0, 2);
    CHECK(a[0] == b[0]);
    CHECK(a[1] == b[1]);

    CHECK_THROWS_AS(trajectory_at(traj, 3, 0), std::out_of_range);
    CHECK_THROWS_AS(trajectory_at(traj, 0, 3), std::out_of_range);
    CHECK_THROWS_AS(trajectory_at(traj, -2, 0), std::out_of_range);
}

TEST_CASE("restrict selects every m-th grid value") {
    const Trajectory fine = ramp_trajectory(8, 1);

    CHECK(restrict(fine, 1) == fine);

    const Trajectory coarse = restrict(fine, 4);
    CHECK(coarse.mesh().steps() == 2);
    for (int j = 0; j <= 1; ++j) {
        for (int i = 0; i <= 2; ++i) {
            CHECK(coarse.at(j, i)[0] == fine.at(j, 4 * i)[0]);
            CHECK(coarse.at(j, i)[1] == fine.at(j, 4 * i)[1]);
        }
    }
    CHECK(coarse.at(-1, 0)[0] == 5.0);

    const Trajectory six = ramp_trajectory(6, 0);
    CHECK_THROWS_AS(restrict(six, 4), ValidationError);
    CHECK_THROWS_AS(restrict(six, 0), ValidationError);
}

TEST_CASE("trajectory CSV has the documented header and 17-digit values") {
    Trajectory traj(Mesh(1.0, 3, 0), 1, State{1.0 / 3.0});
    traj.set(0, 0, State{1.0 / 3.0});
    std::ostringstream os;
    write_trajectory_csv(os, traj);
    const std::string text = os.str();
    CHECK(text.rfind("j,k,t,component_0\n", 0) == 0);
    CHECK(text.find("0,0,0,0.33333333333333331\n") != std::string::npos);
    CHECK(text.find("0,3,1,") != std::string::npos);
    CHECK(text.find('\r') == std::string::npos);
}

TEST_CASE("problem validation") {
    const RightHandSide zero(1, [](double, auto, auto, std::span<double> out) { out[0] = 0.0; });
    CHECK_THROWS_AS(DDEProblem(zero, 0.0, 1, State{1.0}), ValidationError);
    CHECK_THROWS_AS(DDEProblem(zero, 1.0, -1, State{1.0}), ValidationError);
    CHECK_THROWS_AS(DDEProblem(zero, 1.0, 1, State{1.0, 2.0}), ValidationError);
    CHECK_THROWS_AS(RightHandSide(0, [](double, auto, auto, auto) {}), ValidationError);
    const DDEProblem ok(zero, 2.0, 3, State{1.0});
    CHECK(ok.end_time() == 8.0);
    CHECK(zero(0.0, State{1.0}, State{1.0}) == State{0.0});
}
