#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string_view>

namespace sdcsim {

/// SplitMix64 generator. Chosen for the workload streams because the whole
/// algorithm fits in a dozen lines and can be reimplemented bit-exactly in
/// any language, which keeps seeded runs comparable across implementations.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in the open interval (0, 1): top 53 bits, shifted by
    /// half an ulp so neither endpoint can be produced (logs stay finite).
    double uniform01() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Standard normal via the cosine half of Box-Muller. Two uniforms are
    /// consumed per draw and nothing is cached, so the mapping from the
    /// uniform stream to the normal stream is stateless and reproducible.
    double normal() {
        const double u1 = uniform01();
        const double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

private:
    std::uint64_t state_;
};

/// FNV-1a, used only to derive substream seeds from tags.
inline std::uint64_t fnv1a(std::string_view text) {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (const char c : text) {
        hash ^= static_cast<unsigned char>(c);
        hash *= 0x100000001b3ULL;
    }
    return hash;
}

/// One independently seeded stream per random quantity: the substream seed
/// mixes the master seed with a stable tag, then one scrambling round keeps
/// related master seeds from producing aligned streams.
inline SplitMix64 substream(std::uint64_t master_seed, std::string_view tag) {
    SplitMix64 mixer(master_seed ^ fnv1a(tag));
    return SplitMix64(mixer.next_u64());
}

}  // namespace sdcsim
