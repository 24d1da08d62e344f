// Discrete transform kernels: unitary DFT/IDFT for arbitrary lengths
// (radix-2 fast path plus Bluestein for the rest), the chirp-modulated
// transform pair used by the modulator, and the periodized sinc kernel
// that describes windowed tone leakage.
//
// All transforms are unitary: round trips are exact up to floating point
// and per-vector energy is preserved. Phase arguments are reduced in
// extended precision before calling sin/cos so that quadratic chirp
// phases stay accurate for frame sizes in the thousands.

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace zpafdm
{

using cxd = std::complex<double>;
using cvec = std::vector<cxd>;

namespace detail
{

// e^(j*2*pi*turns); the fractional part is taken in long double so that
// large quadratic phases (c * n^2 with n in the thousands) keep ~1e-13
// absolute accuracy in turns.
inline cxd cis_turns(long double turns)
{
    long double frac = turns - std::floor(turns);
    double ang = 2.0 * std::numbers::pi * static_cast<double>(frac);
    return {std::cos(ang), std::sin(ang)};
}

// chirp phase c*n^2 in turns, accumulated in long double
inline long double chirp_turns(double c, std::int64_t n)
{
    return static_cast<long double>(c) * static_cast<long double>(n) * static_cast<long double>(n);
}

inline bool is_pow2(std::size_t n)
{
    return n != 0 && (n & (n - 1)) == 0;
}

// In-place unnormalized radix-2 FFT. inverse=false computes
// sum_n a[n] e^(-j2*pi*nk/N), inverse=true the conjugate kernel.
inline void fft_pow2_inplace(cvec &a, bool inverse)
{
    const std::size_t n = a.size();
    if (!is_pow2(n))
        throw std::invalid_argument("fft_pow2_inplace: length must be a power of two");
    if (n == 1)
        return;

    for (std::size_t i = 1, j = 0; i < n; ++i) // bit-reversal permutation
    {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1)
            j ^= bit;
        j ^= bit;
        if (i < j)
            std::swap(a[i], a[j]);
    }

    // twiddle table from exactly reduced angles, sign folded in
    const double sgn = inverse ? 1.0 : -1.0;
    std::vector<cxd> tw(n / 2);
    for (std::size_t k = 0; k < n / 2; ++k)
        tw[k] = cis_turns(sgn * static_cast<long double>(k) / static_cast<long double>(n));

    for (std::size_t len = 2; len <= n; len <<= 1)
    {
        const std::size_t step = n / len;
        for (std::size_t i = 0; i < n; i += len)
            for (std::size_t k = 0; k < len / 2; ++k)
            {
                cxd u = a[i + k];
                cxd v = a[i + k + len / 2] * tw[k * step];
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
            }
    }
}

// Unnormalized DFT of arbitrary length via the Bluestein chirp-z
// identity nk = (n^2 + k^2 - (k-n)^2)/2, evaluated with power-of-two
// FFT convolutions. Quadratic phases n^2/(2N) are reduced with exact
// int64 arithmetic (n^2 mod 2N) before conversion to an angle.
inline cvec bluestein(const cvec &x, bool inverse)
{
    const std::int64_t n = static_cast<std::int64_t>(x.size());
    const double sgn = inverse ? 1.0 : -1.0;

    std::vector<cxd> chirp(n); // chirp[q] = e^(sgn * j*pi*q^2/n), q^2 reduced mod 2n exactly
    for (std::int64_t q = 0; q < n; ++q)
    {
        std::int64_t r = (q * q) % (2 * n);
        chirp[q] = cis_turns(sgn * static_cast<long double>(r) / static_cast<long double>(2 * n));
    }

    std::size_t m = 1;
    while (m < static_cast<std::size_t>(2 * n - 1))
        m <<= 1;

    cvec a(m, cxd{0.0, 0.0}), b(m, cxd{0.0, 0.0});
    for (std::int64_t q = 0; q < n; ++q)
        a[q] = x[q] * chirp[q];
    for (std::int64_t q = 0; q < n; ++q)
    {
        cxd c = std::conj(chirp[q]);
        b[q] = c;
        if (q != 0)
            b[m - q] = c; // symmetric kernel, wrapped for circular convolution
    }

    fft_pow2_inplace(a, false);
    fft_pow2_inplace(b, false);
    for (std::size_t q = 0; q < m; ++q)
        a[q] *= b[q];
    fft_pow2_inplace(a, true);

    cvec out(n);
    const double scale = 1.0 / static_cast<double>(m);
    for (std::int64_t k = 0; k < n; ++k)
        out[k] = a[k] * scale * chirp[k];
    return out;
}

inline cvec dft_unnormalized(const cvec &x, bool inverse)
{
    if (x.empty())
        throw std::invalid_argument("dft: input must be non-empty");
    if (is_pow2(x.size()))
    {
        cvec a = x;
        fft_pow2_inplace(a, inverse);
        return a;
    }
    return bluestein(x, inverse);
}

} // namespace detail

// Unitary forward DFT, X[k] = (1/sqrt(N)) sum_n x[n] e^(-j2*pi*nk/N)
inline cvec dft(const cvec &x)
{
    cvec out = detail::dft_unnormalized(x, false);
    const double s = 1.0 / std::sqrt(static_cast<double>(x.size()));
    for (auto &v : out)
        v *= s;
    return out;
}

// Unitary inverse DFT, x[n] = (1/sqrt(N)) sum_k X[k] e^(+j2*pi*nk/N)
inline cvec idft(const cvec &x)
{
    cvec out = detail::dft_unnormalized(x, true);
    const double s = 1.0 / std::sqrt(static_cast<double>(x.size()));
    for (auto &v : out)
        v *= s;
    return out;
}

// Chirp rates and length of the chirp-modulated transform pair.
// c1 = c2 = 0 degenerates to the plain unitary DFT/IDFT pair.
struct ChirpParams
{
    double c1 = 0.0;
    double c2 = 0.0;
    int n = 0;

    void validate() const
    {
        if (n < 1)
            throw std::invalid_argument("ChirpParams: n must be >= 1");
        if (!std::isfinite(c1) || !std::isfinite(c2))
            throw std::invalid_argument("ChirpParams: chirp rates must be finite");
    }
};

// Inverse chirp transform (modulator side):
//   s[n] = (1/sqrt(N)) sum_m x[m] e^(j2*pi*(c1*n^2 + c2*m^2 + nm/N))
// computed as pre-chirp multiply, unitary IDFT, post-chirp multiply.
inline cvec idaft(const cvec &x, const ChirpParams &p)
{
    p.validate();
    if (x.size() != static_cast<std::size_t>(p.n))
        throw std::invalid_argument("idaft: input length " + std::to_string(x.size()) +
                                    " does not match n = " + std::to_string(p.n));

    cvec u(x.size());
    for (std::size_t m = 0; m < x.size(); ++m)
        u[m] = x[m] * detail::cis_turns(detail::chirp_turns(p.c2, static_cast<std::int64_t>(m)));
    cvec s = idft(u);
    for (std::size_t n = 0; n < s.size(); ++n)
        s[n] *= detail::cis_turns(detail::chirp_turns(p.c1, static_cast<std::int64_t>(n)));
    return s;
}

// Forward chirp transform (demodulator side), exact inverse of idaft:
//   y[m] = (1/sqrt(N)) sum_n r[n] e^(-j2*pi*(c1*n^2 + c2*m^2 + nm/N))
inline cvec daft(const cvec &r, const ChirpParams &p)
{
    p.validate();
    if (r.size() != static_cast<std::size_t>(p.n))
        throw std::invalid_argument("daft: input length " + std::to_string(r.size()) +
                                    " does not match n = " + std::to_string(p.n));

    cvec u(r.size());
    for (std::size_t n = 0; n < r.size(); ++n)
        u[n] = r[n] * detail::cis_turns(-detail::chirp_turns(p.c1, static_cast<std::int64_t>(n)));
    cvec y = dft(u);
    for (std::size_t m = 0; m < y.size(); ++m)
        y[m] *= detail::cis_turns(-detail::chirp_turns(p.c2, static_cast<std::int64_t>(m)));
    return y;
}

// Periodized windowed-tone kernel
//   kappa(N_d, l_hat, phi) = (1/N_d) sum_{m=l_hat}^{N_d+l_hat-1} e^(j2*pi*m*phi/N_d)
// in closed geometric-sum form. kappa(.,.,0) = 1 exactly, |kappa| <= 1,
// and |kappa| is independent of the window start l_hat.
inline cxd kappa(int n_d, long l_hat, double phi)
{
    if (n_d < 1)
        throw std::invalid_argument("kappa: n_d must be >= 1");

    const double nd = static_cast<double>(n_d);
    const double s_small = std::sin(std::numbers::pi * phi / nd);
    if (std::abs(s_small) < 1e-12) // phi at (or within fp dust of) a multiple of N_d
        return cxd{1.0, 0.0};

    const double mag = std::sin(std::numbers::pi * phi) / (nd * s_small);
    const long double turns = static_cast<long double>(l_hat) * phi / nd +
                              static_cast<long double>(phi) * (nd - 1.0L) / (2.0L * nd);
    return mag * detail::cis_turns(turns);
}

} // namespace zpafdm
