#pragma once

// Counter-based, key-derived random streams.
//
// Every stream is a Philox4x32-10 key plus a 64-bit block counter. Child
// streams are derived by hashing (parent key, role label, indices) into a new
// key, so a substream depends only on its path and never on how many other
// substreams were drawn before it.

#include <array>
#include <concepts>
#include <cstdint>
#include <initializer_list>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "ddex/core.hpp"

namespace ddex {

using PhiloxBlock = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

// Ten-round Philox4x32 bijection of a 128-bit counter under a 64-bit key.
PhiloxBlock philox4x32_10(PhiloxBlock counter, PhiloxKey key) noexcept;

class RandomStream {
public:
    explicit RandomStream(std::uint64_t master_seed);

    // Child stream keyed by (this key, role, indices). Order independent.
    RandomStream derive(std::string_view role, std::span<const std::int64_t> indices) const;
    RandomStream derive(std::string_view role, std::initializer_list<std::int64_t> indices) const {
        return derive(role, std::span<const std::int64_t>(indices.begin(), indices.size()));
    }

    std::uint64_t key() const noexcept { return key_; }

    std::uint64_t next_u64() noexcept;
    // 53-bit uniform on [0, 1).
    double uniform() noexcept;
    // Standard normal by the Marsaglia polar method; the spare deviate is kept.
    double normal() noexcept;

private:
    explicit RandomStream(std::uint64_t key, int) : key_(key) {}

    std::uint64_t key_;
    std::uint64_t block_ = 0;
    PhiloxBlock buffer_{};
    int used_ = 4;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

// derive_stream(seed, role, indices) == RandomStream(seed).derive(role, indices)
RandomStream derive_stream(std::uint64_t master_seed, std::string_view role,
                           std::span<const std::int64_t> indices);

// Anything with `double uniform()` returning values on [0, 1).
template <class S>
concept UniformSource = requires(S s) {
    { s.uniform() } -> std::convertible_to<double>;
};

// theta = t_k^j + h*u with u uniform on [0, 1). Clamped below t_{k+1}^j in
// the rare case that rounding of t_k^j + h*u lands on the next node.
double theta_from_uniform(const Mesh& mesh, int j, int k, double u);

template <UniformSource S>
double sample_theta(S& stream, const Mesh& mesh, int j, int k) {
    return theta_from_uniform(mesh, j, k, stream.uniform());
}

/// Brownian-like path sampled on a uniform grid, Z(t) = 0 for t < 0.
class PiecewisePath {
public:
    PiecewisePath(double step, std::vector<double> values);

    double step() const noexcept { return step_; }
    double horizon() const noexcept { return step_ * static_cast<double>(values_.size() - 1); }
    const std::vector<double>& values() const noexcept { return values_; }

private:
    double step_;
    std::vector<double> values_;
};

// Z on nodes 0..ceil(T/h_ref) as cumulative sums of N(0, h_ref) increments.
PiecewisePath brownian_path(double horizon, double step, RandomStream stream);

double eval_path_linear(const PiecewisePath& path, double t);

// CSV with header i,t,Z.
void write_path_csv(std::ostream& os, const PiecewisePath& path);

}  // namespace ddex
