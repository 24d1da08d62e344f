// Brute-force reference implementations used only by tests. These share
// no code with the fast library paths: transforms are evaluated by direct
// O(N^2) summation with exact integer phase reduction, and random test
// vectors come from a seeded generator.

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include <zpafdm/transforms.hpp>

namespace oracle
{

using zpafdm::cvec;
using zpafdm::cxd;

inline cxd cis(long double turns)
{
    long double frac = turns - std::floor(turns);
    double ang = 2.0 * std::numbers::pi * static_cast<double>(frac);
    return {std::cos(ang), std::sin(ang)};
}

// (1/sqrt(N)) sum_n x[n] e^(sign * j2*pi*nk/N), nk reduced mod N in integers
inline cvec dft_direct(const cvec &x, int sign)
{
    const std::int64_t n = static_cast<std::int64_t>(x.size());
    cvec out(n);
    const double s = 1.0 / std::sqrt(static_cast<double>(n));
    for (std::int64_t k = 0; k < n; ++k)
    {
        cxd acc{0.0, 0.0};
        for (std::int64_t m = 0; m < n; ++m)
            acc += x[m] * cis(static_cast<long double>(sign) * static_cast<long double>((m * k) % n) /
                              static_cast<long double>(n));
        out[k] = acc * s;
    }
    return out;
}

// s[n] = (1/sqrt(N)) sum_m x[m] e^(j2*pi*(c1 n^2 + c2 m^2 + nm/N))
inline cvec idaft_direct(const cvec &x, const zpafdm::ChirpParams &p)
{
    const std::int64_t n = static_cast<std::int64_t>(x.size());
    cvec out(n);
    const double s = 1.0 / std::sqrt(static_cast<double>(n));
    for (std::int64_t t = 0; t < n; ++t)
    {
        cxd acc{0.0, 0.0};
        const long double t1 = static_cast<long double>(p.c1) * t * t;
        for (std::int64_t m = 0; m < n; ++m)
        {
            long double turns = t1 + static_cast<long double>(p.c2) * m * m +
                                static_cast<long double>((m * t) % n) / static_cast<long double>(n);
            acc += x[m] * cis(turns);
        }
        out[t] = acc * s;
    }
    return out;
}

// y[m] = (1/sqrt(N)) sum_n r[n] e^(-j2*pi*(c1 n^2 + c2 m^2 + nm/N))
inline cvec daft_direct(const cvec &r, const zpafdm::ChirpParams &p)
{
    const std::int64_t n = static_cast<std::int64_t>(r.size());
    cvec out(n);
    const double s = 1.0 / std::sqrt(static_cast<double>(n));
    for (std::int64_t m = 0; m < n; ++m)
    {
        cxd acc{0.0, 0.0};
        const long double t2 = static_cast<long double>(p.c2) * m * m;
        for (std::int64_t t = 0; t < n; ++t)
        {
            long double turns = static_cast<long double>(p.c1) * t * t + t2 +
                                static_cast<long double>((m * t) % n) / static_cast<long double>(n);
            acc += r[t] * cis(-turns);
        }
        out[m] = acc * s;
    }
    return out;
}

// literal windowed summation form of the periodized tone kernel
inline cxd kappa_direct(int n_d, long l_hat, double phi)
{
    cxd acc{0.0, 0.0};
    for (long m = l_hat; m < l_hat + n_d; ++m)
        acc += cis(static_cast<long double>(m) * phi / n_d);
    return acc / static_cast<double>(n_d);
}

inline cvec random_cvec(std::size_t n, std::uint64_t seed)
{
    std::mt19937_64 gen(seed);
    auto u = [&gen]() { return 2.0 * (static_cast<double>(gen() >> 11) * 0x1.0p-53) - 1.0; };
    cvec v(n);
    for (auto &x : v)
        x = cxd{u(), u()};
    return v;
}

inline double max_abs_diff(const cvec &a, const cvec &b)
{
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

inline double norm2(const cvec &a)
{
    double s = 0.0;
    for (const auto &x : a)
        s += std::norm(x);
    return std::sqrt(s);
}

} // namespace oracle
