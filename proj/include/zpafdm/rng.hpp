// Seed mixing and deterministic random draws. Gaussians are produced by
// an explicit Box-Muller step on top of mt19937_64 so that results do not
// depend on the standard library's distribution implementations.

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <stdexcept>

namespace zpafdm
{

namespace detail
{

inline std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

} // namespace detail

// order-sensitive combination of seed words into one stream seed
inline std::uint64_t mix_seed(std::uint64_t a)
{
    return detail::splitmix64(a);
}

template <typename... Rest>
inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b, Rest... rest)
{
    return mix_seed(detail::splitmix64(a) ^ (b + 0x9e3779b97f4a7c15ULL), rest...);
}

inline std::uint64_t hash_str(const std::string &s)
{
    std::uint64_t h = 1469598103934665603ULL; // FNV-1a
    for (unsigned char c : s)
    {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

class Rng
{
  public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    double uniform() // [0, 1)
    {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    // integer uniform on [lo, hi]
    long uniform_int(long lo, long hi)
    {
        if (hi < lo)
            throw std::invalid_argument("uniform_int: empty range");
        const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<long>(gen_() % span);
    }

    double gaussian() // N(0, 1)
    {
        if (have_spare_)
        {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 <= 0.0)
            u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    // circularly symmetric complex gaussian with E|z|^2 = 1
    std::complex<double> cgaussian()
    {
        const double s = std::sqrt(0.5);
        return {s * gaussian(), s * gaussian()};
    }

  private:
    std::mt19937_64 gen_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace zpafdm
