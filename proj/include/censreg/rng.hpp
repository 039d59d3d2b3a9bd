#pragma once
#include <cstdint>
#include <random>

namespace censreg {

// Deterministic random source: mt19937_64 with explicit transforms
// (Box-Muller normals, inverse-CDF exponentials) so that streams are fully
// specified by this code and reproducible across standard libraries.
// Substreams are derived with a splitmix64-style finalizer, which lets
// parallel workers own independent generators keyed by (seed, stream id).
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    // 53-bit uniform in [0, 1).
    double uniform01() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    // Standard normal via Box-Muller; the second deviate of each pair is
    // cached, so draws come in a fixed per-stream order.
    double normal();

    // Exponential with the given rate, by inverse CDF.
    double exponential(double rate);

    std::uint64_t next_u64() { return engine_(); }

    static std::uint64_t mix(std::uint64_t z);

    // Independent substream seed for (seed, stream).
    static std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t stream);

  private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace censreg
