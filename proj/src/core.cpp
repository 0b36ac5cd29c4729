#include "ddex/core.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <utility>

namespace ddex {

RightHandSide::RightHandSide(std::size_t dimension, RhsFunction eval)
    : dim_(dimension), eval_(std::move(eval)) {
    if (dim_ == 0) {
        throw ValidationError("right-hand side dimension must be positive");
    }
    if (!eval_) {
        throw ValidationError("right-hand side callable is empty");
    }
}

State RightHandSide::operator()(double t, const State& x, const State& z) const {
    if (x.size() != dim_ || z.size() != dim_) {
        throw ValidationError("state dimension does not match right-hand side");
    }
    State out(dim_, 0.0);
    eval_(t, x, z, out);
    return out;
}

DDEProblem::DDEProblem(RightHandSide rhs, double tau, int horizon, State x0)
    : rhs_(std::move(rhs)), tau_(tau), horizon_(horizon), x0_(std::move(x0)) {
    if (!(tau_ > 0.0) || !std::isfinite(tau_)) {
        throw ValidationError("lag tau must be positive and finite");
    }
    if (horizon_ < 0) {
        throw ValidationError("horizon n must be nonnegative");
    }
    if (x0_.size() != rhs_.dimension()) {
        throw ValidationError("initial value dimension does not match right-hand side");
    }
}

Mesh::Mesh(double tau, int steps, int horizon)
    : tau_(tau), steps_(steps), horizon_(horizon), h_(0.0) {
    if (!(tau > 0.0) || !std::isfinite(tau)) {
        throw ValidationError("mesh lag tau must be positive and finite");
    }
    if (steps < 1) {
        throw ValidationError("mesh needs at least one step per lag interval");
    }
    if (horizon < 0) {
        throw ValidationError("mesh horizon must be nonnegative");
    }
    h_ = tau / steps;
}

double Mesh::time(int j, int k) const {
    if (j < 0 || j > horizon_ || k < 0 || k > steps_) {
        throw std::out_of_range("mesh index out of range");
    }
    if (k == steps_) {
        return (j + 1) * tau_;
    }
    return j * tau_ + k * h_;
}

Mesh make_mesh(double tau, int steps, int horizon) { return Mesh(tau, steps, horizon); }

Trajectory::Trajectory(Mesh mesh, std::size_t dimension, const State& x0)
    : mesh_(mesh), dim_(dimension) {
    if (x0.size() != dim_) {
        throw ValidationError("initial value dimension does not match trajectory");
    }
    const auto rows = static_cast<std::size_t>(mesh_.horizon() + 2) * (mesh_.steps() + 1);
    values_.assign(rows * dim_, 0.0);
    for (int k = 0; k <= mesh_.steps(); ++k) {
        std::copy(x0.begin(), x0.end(), values_.begin() + offset(-1, k));
    }
}

std::span<const double> Trajectory::at(int j, int k) const {
    if (j < -1 || j > mesh_.horizon() || k < 0 || k > mesh_.steps()) {
        throw std::out_of_range("trajectory index out of range");
    }
    return row_unchecked(j, k);
}

void Trajectory::set(int j, int k, std::span<const double> value) {
    if (j < 0 || j > mesh_.horizon() || k < 0 || k > mesh_.steps()) {
        throw std::out_of_range("trajectory index out of range");
    }
    if (value.size() != dim_) {
        throw ValidationError("value dimension does not match trajectory");
    }
    std::copy(value.begin(), value.end(), values_.begin() + offset(j, k));
}

std::span<const double> trajectory_at(const Trajectory& traj, int j, int k) {
    return traj.at(j, k);
}

Trajectory restrict(const Trajectory& fine, int factor) {
    if (factor < 1) {
        throw ValidationError("refinement factor must be positive");
    }
    const Mesh& fm = fine.mesh();
    if (fm.steps() % factor != 0) {
        throw ValidationError("fine step count " + std::to_string(fm.steps()) +
                              " is not divisible by refinement factor " +
                              std::to_string(factor));
    }
    const Mesh coarse_mesh(fm.tau(), fm.steps() / factor, fm.horizon());
    const auto x0 = fine.at(-1, 0);
    Trajectory coarse(coarse_mesh, fine.dimension(), State(x0.begin(), x0.end()));
    for (int j = 0; j <= fm.horizon(); ++j) {
        for (int i = 0; i <= coarse_mesh.steps(); ++i) {
            const auto src = fine.row_unchecked(j, i * factor);
            std::copy(src.begin(), src.end(), coarse.row_unchecked(j, i).begin());
        }
    }
    return coarse;
}

std::string format_real(double value) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
    os << "j,k,t";
    for (std::size_t c = 0; c < traj.dimension(); ++c) {
        os << ",component_" << c;
    }
    os << '\n';
    const Mesh& mesh = traj.mesh();
    for (int j = 0; j <= mesh.horizon(); ++j) {
        for (int k = 0; k <= mesh.steps(); ++k) {
            os << j << ',' << k << ',' << format_real(mesh.time(j, k));
            for (double v : traj.row_unchecked(j, k)) {
                os << ',' << format_real(v);
            }
            os << '\n';
        }
    }
}

double euclidean_norm(std::span<const double> v) {
    if (v.size() == 1) {
        return std::abs(v[0]);
    }
    double sum = 0.0;
    for (double c : v) {
        sum += c * c;
    }
    return std::sqrt(sum);
}

double euclidean_distance(std::span<const double> a, std::span<const double> b) {
    if (a.size() == 1) {
        return std::abs(a[0] - b[0]);
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        sum += d * d;
    }
    return std::sqrt(sum);
}

}  // namespace ddex
