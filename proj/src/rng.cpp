#include "mmsbkit/rng.hpp"

namespace mmsb {

namespace {
constexpr double kTwoPowMinus53 = 1.0 / 9007199254740992.0;
}

double Rng::uniform() { return static_cast<double>(next() >> 11) * kTwoPowMinus53; }

double Rng::uniform_open() { return (static_cast<double>(next() >> 11) + 0.5) * kTwoPowMinus53; }

std::uint64_t Rng::below(std::uint64_t bound) {
    // Rejection sampling keeps the draw unbiased.
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
    std::uint64_t x = next();
    while (x >= limit) x = next();
    return x % bound;
}

}  // namespace mmsb
