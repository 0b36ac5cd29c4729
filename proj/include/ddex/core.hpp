#pragma once

// Problem statements, uniform meshes and trajectories for constant-lag DDEs
//
//   x'(t) = f(t, x(t), x(t - tau)),  t in [0, (n+1) tau]
//   x(t)  = x0,                      t in [-tau, 0)

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace ddex {

using State = std::vector<double>;

class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Evaluates f(t, x, z) into `out`. Must be pure in (t, x, z).
using RhsFunction = std::function<void(double t, std::span<const double> x,
                                       std::span<const double> z, std::span<double> out)>;

class RightHandSide {
public:
    RightHandSide(std::size_t dimension, RhsFunction eval);

    std::size_t dimension() const noexcept { return dim_; }

    void operator()(double t, std::span<const double> x, std::span<const double> z,
                    std::span<double> out) const {
        eval_(t, x, z, out);
    }

    // Allocating convenience overload, for tests and one-off evaluations.
    State operator()(double t, const State& x, const State& z) const;

private:
    std::size_t dim_;
    RhsFunction eval_;
};

class DDEProblem {
public:
    DDEProblem(RightHandSide rhs, double tau, int horizon, State x0);

    const RightHandSide& rhs() const noexcept { return rhs_; }
    double tau() const noexcept { return tau_; }
    // Number of lag intervals beyond the first; the domain is [0, (n+1) tau].
    int horizon() const noexcept { return horizon_; }
    const State& x0() const noexcept { return x0_; }
    std::size_t dimension() const noexcept { return rhs_.dimension(); }
    double end_time() const noexcept { return (horizon_ + 1) * tau_; }

private:
    RightHandSide rhs_;
    double tau_;
    int horizon_;
    State x0_;
};

/// Uniform mesh t_k^j = j*tau + k*h on every lag interval, h = tau/N.
///
/// Times are computed per index, never accumulated. The right endpoint of
/// interval j is stored as (j+1)*tau so that it is bit-identical to the left
/// endpoint of interval j+1.
class Mesh {
public:
    Mesh(double tau, int steps, int horizon);

    double tau() const noexcept { return tau_; }
    int steps() const noexcept { return steps_; }
    int horizon() const noexcept { return horizon_; }
    double step_size() const noexcept { return h_; }

    double time(int j, int k) const;

    bool operator==(const Mesh&) const = default;

private:
    double tau_;
    int steps_;
    int horizon_;
    double h_;
};

Mesh make_mesh(double tau, int steps, int horizon);

/// Grid values y_k^j for j = -1..n, k = 0..N; row j = -1 holds x0.
class Trajectory {
public:
    Trajectory(Mesh mesh, std::size_t dimension, const State& x0);

    const Mesh& mesh() const noexcept { return mesh_; }
    std::size_t dimension() const noexcept { return dim_; }

    // Bounds-checked access; j = -1 returns x0.
    std::span<const double> at(int j, int k) const;

    // Bounds-checked write; j = -1 is not writable.
    void set(int j, int k, std::span<const double> value);

    // Unchecked, for solver inner loops.
    std::span<double> row_unchecked(int j, int k) noexcept {
        return {values_.data() + offset(j, k), dim_};
    }
    std::span<const double> row_unchecked(int j, int k) const noexcept {
        return {values_.data() + offset(j, k), dim_};
    }

    bool operator==(const Trajectory&) const = default;

private:
    std::size_t offset(int j, int k) const noexcept {
        return (static_cast<std::size_t>(j + 1) * (mesh_.steps() + 1) + k) * dim_;
    }

    Mesh mesh_;
    std::size_t dim_;
    std::vector<double> values_;
};

std::span<const double> trajectory_at(const Trajectory& traj, int j, int k);

// Subsample a trajectory on an m-fold refined mesh to the coarse mesh.
Trajectory restrict(const Trajectory& fine, int factor);

// CSV with header j,k,t,component_0..component_{d-1}; rows for j = 0..n.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);

// printf %.17g, as used by every CSV writer.
std::string format_real(double value);

double euclidean_norm(std::span<const double> v);
double euclidean_distance(std::span<const double> a, std::span<const double> b);

}  // namespace ddex
