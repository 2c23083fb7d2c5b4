#include "fracfilt/rng.hpp"

namespace ff::rng {

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::mt19937_64 stream(std::uint64_t master_seed, std::uint64_t stream_id) {
    // mix the pair through splitmix64 twice so nearby (seed, id) pairs decorrelate
    std::uint64_t s = master_seed;
    std::uint64_t a = splitmix64(s);
    s ^= stream_id * 0xda942042e4dd58b5ULL;
    std::uint64_t b = splitmix64(s);
    std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                      static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
    return std::mt19937_64(seq);
}

} // namespace ff::rng
