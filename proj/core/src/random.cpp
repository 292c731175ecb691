#include "sburgers/random.hpp"

#include <cmath>
#include <numbers>

namespace sburgers {

std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t stream_id(StreamPurpose purpose, std::uint64_t index) {
    return (static_cast<std::uint64_t>(purpose) << 56) ^ index;
}

namespace {

double to_unit(std::uint64_t h) {
    return (static_cast<double>(h >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace

double RandomStream::uniform(std::uint64_t slot) const {
    return to_unit(mix64(seed_ ^ mix64(stream_ ^ mix64(step_ ^ mix64(slot)))));
}

void RandomStream::next_normals(std::span<double> out) {
    const std::size_t n = out.size();
    for (std::size_t q = 0; 2 * q < n; ++q) {
        const double u1 = uniform(2 * q);
        const double u2 = uniform(2 * q + 1);
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * std::numbers::pi * u2;
        out[2 * q] = r * std::cos(a);
        if (2 * q + 1 < n) out[2 * q + 1] = r * std::sin(a);
    }
    advance();
}

}  // namespace sburgers
