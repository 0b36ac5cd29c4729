#include "ddex/random.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <utility>

namespace ddex {
namespace {

constexpr std::uint32_t kMulA = 0xD2511F53u;
constexpr std::uint32_t kMulB = 0xCD9E8D57u;
constexpr std::uint32_t kWeylA = 0x9E3779B9u;
constexpr std::uint32_t kWeylB = 0xBB67AE85u;

constexpr std::uint32_t lo32(std::uint64_t v) { return static_cast<std::uint32_t>(v); }
constexpr std::uint32_t hi32(std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); }

PhiloxKey split_key(std::uint64_t key) { return {lo32(key), hi32(key)}; }

std::uint64_t fnv1a64(std::string_view text) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

// One keyed PRF application; the tag keeps derivation blocks disjoint from
// the output blocks (whose upper counter words are zero).
std::uint64_t absorb(std::uint64_t key, std::uint64_t word) {
    const auto out = philox4x32_10({lo32(word), hi32(word), 0xD1B54A32u, 1u}, split_key(key));
    return static_cast<std::uint64_t>(out[0]) | (static_cast<std::uint64_t>(out[1]) << 32);
}

}  // namespace

PhiloxBlock philox4x32_10(PhiloxBlock ctr, PhiloxKey key) noexcept {
    for (int round = 0; round < 10; ++round) {
        const std::uint64_t p0 = static_cast<std::uint64_t>(kMulA) * ctr[0];
        const std::uint64_t p1 = static_cast<std::uint64_t>(kMulB) * ctr[2];
        ctr = {hi32(p1) ^ ctr[1] ^ key[0], lo32(p1), hi32(p0) ^ ctr[3] ^ key[1], lo32(p0)};
        key[0] += kWeylA;
        key[1] += kWeylB;
    }
    return ctr;
}

RandomStream::RandomStream(std::uint64_t master_seed)
    : key_(absorb(0x243F6A8885A308D3ull, master_seed)) {}

RandomStream RandomStream::derive(std::string_view role,
                                  std::span<const std::int64_t> indices) const {
    std::uint64_t k = absorb(key_, fnv1a64(role));
    k = absorb(k, indices.size());
    for (std::int64_t idx : indices) {
        k = absorb(k, static_cast<std::uint64_t>(idx));
    }
    return RandomStream(k, 0);
}

std::uint64_t RandomStream::next_u64() noexcept {
    if (used_ >= 4) {
        buffer_ = philox4x32_10({lo32(block_), hi32(block_), 0u, 0u}, split_key(key_));
        ++block_;
        used_ = 0;
    }
    const std::uint64_t v = static_cast<std::uint64_t>(buffer_[used_]) |
                            (static_cast<std::uint64_t>(buffer_[used_ + 1]) << 32);
    used_ += 2;
    return v;
}

double RandomStream::uniform() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RandomStream::normal() noexcept {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u = 0.0;
    double v = 0.0;
    double s = 0.0;
    do {
        u = 2.0 * uniform() - 1.0;
        v = 2.0 * uniform() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double scale = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * scale;
    has_spare_ = true;
    return u * scale;
}

RandomStream derive_stream(std::uint64_t master_seed, std::string_view role,
                           std::span<const std::int64_t> indices) {
    return RandomStream(master_seed).derive(role, indices);
}

double theta_from_uniform(const Mesh& mesh, int j, int k, double u) {
    const double left = mesh.time(j, k);
    const double right = mesh.time(j, k + 1);
    const double theta = left + mesh.step_size() * u;
    return theta < right ? theta : std::nextafter(right, left);
}

PiecewisePath::PiecewisePath(double step, std::vector<double> values)
    : step_(step), values_(std::move(values)) {
    if (!(step_ > 0.0)) {
        throw ValidationError("path step must be positive");
    }
    if (values_.empty()) {
        throw ValidationError("path needs at least one node");
    }
}

PiecewisePath brownian_path(double horizon, double step, RandomStream stream) {
    if (!(horizon > 0.0) || !(step > 0.0)) {
        throw ValidationError("Brownian path needs positive horizon and step");
    }
    const auto nodes = static_cast<std::size_t>(std::ceil(horizon / step - 1e-9));
    std::vector<double> z(nodes + 1, 0.0);
    const double sd = std::sqrt(step);
    for (std::size_t i = 1; i <= nodes; ++i) {
        z[i] = z[i - 1] + sd * stream.normal();
    }
    return PiecewisePath(step, std::move(z));
}

double eval_path_linear(const PiecewisePath& path, double t) {
    if (t < 0.0) {
        return 0.0;
    }
    const auto& z = path.values();
    const double pos = t / path.step();
    const auto last = static_cast<double>(z.size() - 1);
    if (pos > last * (1.0 + 1e-12)) {
        throw std::out_of_range("path evaluated beyond its horizon");
    }
    if (pos >= last) {
        return z.back();
    }
    // Snap to a node when t was formed as i*step and the division rounded.
    const double nearest = std::nearbyint(pos);
    if (std::abs(pos - nearest) <= 1e-12 * std::max(1.0, nearest)) {
        return z[static_cast<std::size_t>(nearest)];
    }
    const auto i = static_cast<std::size_t>(pos);
    const double w = pos - static_cast<double>(i);
    return z[i] + w * (z[i + 1] - z[i]);
}

void write_path_csv(std::ostream& os, const PiecewisePath& path) {
    os << "i,t,Z\n";
    const auto& z = path.values();
    for (std::size_t i = 0; i < z.size(); ++i) {
        os << i << ',' << format_real(static_cast<double>(i) * path.step()) << ','
           << format_real(z[i]) << '\n';
    }
}

}  // namespace ddex
