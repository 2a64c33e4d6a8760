#ifndef RRLPI_RNG_HPP
#define RRLPI_RNG_HPP

#include <cstdint>

namespace rrlpi {

// Counter-based generator: every draw is a stateless hash of (seed, stream
// counters), so parallel sweeps reproduce bit-identically regardless of
// scheduling.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

    std::uint64_t bits(std::uint64_t a, std::uint64_t b = 0, std::uint64_t c = 0,
                       std::uint64_t d = 0) const {
        std::uint64_t x = seed_;
        x = mix(x ^ (a + 0x9e3779b97f4a7c15ULL));
        x = mix(x ^ (b + 0xbf58476d1ce4e5b9ULL));
        x = mix(x ^ (c + 0x94d049bb133111ebULL));
        x = mix(x ^ (d + 0xd6e8feb86659fd93ULL));
        return x;
    }

    // uniform in [0,1)
    double uniform(std::uint64_t a, std::uint64_t b = 0, std::uint64_t c = 0,
                   std::uint64_t d = 0) const {
        return static_cast<double>(bits(a, b, c, d) >> 11) * 0x1.0p-53;
    }

    std::uint64_t seed() const { return seed_; }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t seed_;
};

} // namespace rrlpi

#endif
