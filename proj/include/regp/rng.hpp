#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace regp::rng {

using Engine = std::mt19937_64;

/// Events are generated in fixed-size chunks with one engine per chunk, so a
/// run is identical no matter how many threads produced it.
inline constexpr std::size_t kChunkEvents = std::size_t{1} << 16;

/// Stream tags keep the signal, ECF, loss and detector streams of one seed apart.
enum class Stream : std::uint32_t { signal = 1, ecf = 2, loss = 3, detector = 4, thermal_signal = 5 };

inline Engine chunk_engine(std::uint64_t seed, Stream stream, std::uint64_t chunk) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(chunk),
                    static_cast<std::uint32_t>(chunk >> 32)};
  return Engine(seq);
}

inline std::size_t chunk_count(std::size_t n) { return (n + kChunkEvents - 1) / kChunkEvents; }

/// Fresh nondeterministic seed for runs that did not specify one; callers
/// record it in the run metadata.
inline std::uint64_t generate_seed() {
  std::random_device rd;
  return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

/// Uniform double in [0, 1) built from the top 53 bits of one engine draw.
/// std::generate_canonical may round up to 1.0 in libstdc++, so it is avoided.
inline double uniform01(Engine& eng) { return static_cast<double>(eng() >> 11) * 0x1.0p-53; }

} // namespace regp::rng
