#pragma once

#include <cstdint>
#include <random>

namespace ff::rng {

/// Documented stream assignment (independence of the signal and observation
/// noises is enforced by construction, never by sharing a generator).
inline constexpr std::uint64_t kStreamSignalSheet = 1;  // driving sheet W of the signal
inline constexpr std::uint64_t kStreamNoiseSheet = 2;   // driver of the fBs noise B
inline constexpr std::uint64_t kStreamParticleBase = 3; // particle i uses 3 + i

std::uint64_t splitmix64(std::uint64_t& state);

/// Deterministic, statistically independent generator for (master seed, stream id).
std::mt19937_64 stream(std::uint64_t master_seed, std::uint64_t stream_id);

} // namespace ff::rng
