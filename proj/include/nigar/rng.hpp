#pragma once

#include <array>
#include <cstdint>

namespace nigar {

// Deterministic random stream. A (seed, stream_id) pair fully determines
// the variate sequence, independent of platform and standard library:
// xoshiro256++ underneath, seeded through splitmix64, with normal variates
// from the Box-Muller transform (pair-cached). Distinct stream ids give
// independent streams for parallel work.
class RngStream {
  public:
    explicit RngStream(std::uint64_t seed, std::uint64_t stream_id = 0);

    std::uint64_t next_u64();

    // Uniform on [0, 1) with 53-bit resolution.
    double uniform();

    // Uniform on (0, 1]; safe to pass to log().
    double uniform_pos();

    // Standard normal.
    double normal();

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_id() const { return stream_id_; }

  private:
    std::array<std::uint64_t, 4> state_{};
    std::uint64_t seed_ = 0;
    std::uint64_t stream_id_ = 0;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace nigar
