#pragma once

#include <cstdint>
#include <span>

namespace sburgers {

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// Purpose tags keep streams used for different experiments disjoint.
enum class StreamPurpose : std::uint64_t {
    ensemble = 0,
    pushforward = 1,
    feller = 2,
    picard = 3,
    resample = 4,
    test = 7,
};

/// Stream id for (purpose, index); the purpose lives in the top byte.
std::uint64_t stream_id(StreamPurpose purpose, std::uint64_t index);

/// Counter-based Gaussian source.
///
/// Every standard normal is a pure function of
/// (master_seed, stream, step, mode):
///   h(i) = mix64(seed ^ mix64(stream ^ mix64(step ^ mix64(i))))
/// Modes 2q and 2q+1 share one Box-Muller pair built from the uniforms of
/// h(2q) and h(2q+1), each mapped to ((h >> 11) + 0.5) * 2^-53 in (0, 1).
/// No draw depends on how many other draws were made, so trajectories can be
/// scheduled on any number of threads and still reproduce bit for bit.
class RandomStream {
public:
    RandomStream(std::uint64_t master_seed, std::uint64_t stream)
        : seed_(master_seed), stream_(stream) {}

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream() const { return stream_; }
    std::uint64_t step() const { return step_; }

    /// Fills `out` with standard normals for the current step and advances.
    void next_normals(std::span<double> out);

    /// Uniform in (0, 1) for the current step and slot; does not advance.
    double uniform(std::uint64_t slot) const;

    void advance() { ++step_; }

private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t step_ = 0;
};

}  // namespace sburgers
