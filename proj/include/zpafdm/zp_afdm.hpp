// Transceiver chain for the zero-padded chirp waveform.
//
// Transmit: data symbols are embedded between head and tail zeros, pushed
// through the inverse chirp transform, and prefixed with the quadratic
// continuation of the frame tail so the channel sees one smooth waveform.
//
// Receive: strip the prefix, forward transform, fold congruent samples of
// the long frame into the short data frame, and equalize tone by tone in
// the DFT domain of the folded frame. The zeros are sized so every path,
// whatever its delay/Doppler mix, lands inside the frame without wrapping
// through the data; after folding each path is a plain circular shift with
// a slow residual modulation, which is what makes the one-tap equalizer
// meaningful.

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "zpafdm/channel.hpp"
#include "zpafdm/params.hpp"
#include "zpafdm/transforms.hpp"

namespace zpafdm
{

// Gray map, one bit per quadrature axis, unit symbol energy
inline cvec map_symbols(const std::vector<int> &bits, Constellation c)
{
    if (c != Constellation::qpsk)
        throw std::invalid_argument("map_symbols: unsupported constellation");
    if (bits.size() % 2 != 0)
        throw std::invalid_argument("map_symbols: bit count must be even");
    const double a = 1.0 / std::sqrt(2.0);
    cvec out(bits.size() / 2);
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = cxd{bits[2 * i] ? -a : a, bits[2 * i + 1] ? -a : a};
    return out;
}

// sign slicer; an exact zero component resolves to bit 0
inline std::vector<int> demap_symbols(const cvec &syms)
{
    std::vector<int> bits(2 * syms.size());
    for (std::size_t i = 0; i < syms.size(); ++i)
    {
        bits[2 * i] = syms[i].real() < 0.0 ? 1 : 0;
        bits[2 * i + 1] = syms[i].imag() < 0.0 ? 1 : 0;
    }
    return bits;
}

inline cvec zero_pad(const cvec &x_d, const AfdmConfig &cfg)
{
    if (x_d.size() != static_cast<std::size_t>(cfg.n_data))
        throw std::invalid_argument("zero_pad: expected " + std::to_string(cfg.n_data) +
                                    " data symbols, got " + std::to_string(x_d.size()));
    cvec x(cfg.n, cxd{0.0, 0.0});
    for (int i = 0; i < cfg.n_data; ++i)
        x[cfg.pad_head + i] = x_d[i];
    return x;
}

inline cvec extract_data(const cvec &x, const AfdmConfig &cfg)
{
    if (x.size() != static_cast<std::size_t>(cfg.n))
        throw std::invalid_argument("extract_data: frame length does not match n");
    return cvec(x.begin() + cfg.pad_head, x.begin() + cfg.pad_head + cfg.n_data);
}

// Prefix the frame with its tail continued by the modulator's quadratic
// phase. With 2*c1*N integral the per-sample phase collapses to the
// half-turn parity of c1*N^2, a fixed real sign.
inline cvec add_prefix(const cvec &s, const AfdmConfig &cfg)
{
    if (s.size() != static_cast<std::size_t>(cfg.n))
        throw std::invalid_argument("add_prefix: frame length does not match n");
    const double wrap_sign =
        (static_cast<std::int64_t>(cfg.two_c1n()) * cfg.n) % 2 == 0 ? 1.0 : -1.0;
    cvec out(static_cast<std::size_t>(cfg.cpp_len) + cfg.n);
    for (int j = 0; j < cfg.cpp_len; ++j)
        out[j] = s[cfg.n - cfg.cpp_len + j] * wrap_sign;
    for (int i = 0; i < cfg.n; ++i)
        out[cfg.cpp_len + i] = s[i];
    return out;
}

inline cvec strip_prefix(const cvec &r_cpp, const AfdmConfig &cfg)
{
    if (r_cpp.size() != static_cast<std::size_t>(cfg.cpp_len + cfg.n))
        throw std::invalid_argument("strip_prefix: frame length does not match cpp_len + n");
    return cvec(r_cpp.begin() + cfg.cpp_len, r_cpp.end());
}

inline cvec modulate(const cvec &x_d, const AfdmConfig &cfg)
{
    return add_prefix(idaft(zero_pad(x_d, cfg), cfg.chirp()), cfg);
}

inline cvec demodulate(const cvec &r_cpp, const AfdmConfig &cfg)
{
    return daft(strip_prefix(r_cpp, cfg), cfg.chirp());
}

// fold the long transformed frame into the data-sized one by adding every
// congruent sample; the padding guarantees each path contributes exactly
// one of the congruent samples per bin
inline cvec reconstruct(const cvec &y, const AfdmConfig &cfg)
{
    if (y.size() != static_cast<std::size_t>(cfg.n))
        throw std::invalid_argument("reconstruct: frame length does not match n");
    cvec y_d(cfg.n_data, cxd{0.0, 0.0});
    for (int m = 0; m < cfg.n; ++m)
        y_d[m % cfg.n_data] += y[m];
    return y_d;
}

// per-tone noise variance after folding and the unitary DFT: the fold sums
// n/n_data samples per bin on average and the DFT spreads that evenly
inline double folded_noise_variance(const AfdmConfig &cfg, double sigma2)
{
    return sigma2 * static_cast<double>(cfg.n) / cfg.n_data;
}

struct OneTapFrame
{
    cvec tones;      // folded frame in the DFT domain
    cvec equalized;  // after the per-tone regularized inversion
    cvec symbols;    // equalized frame back in the data domain
    bool degenerate = false; // some tone had a zero channel and zero noise
};

// regularized per-tone inversion conj(h)*y/(|h|^2 + noise_var). Tones
// where the denominator is exactly zero are blanked and flagged rather
// than propagated as NaN.
inline OneTapFrame equalize_one_tap(const cvec &y_d, const cvec &diag, double noise_var)
{
    if (diag.size() != y_d.size())
        throw std::invalid_argument("equalize_one_tap: diagonal length does not match frame");
    if (noise_var < 0.0 || !std::isfinite(noise_var))
        throw std::invalid_argument("equalize_one_tap: noise variance must be finite and >= 0");

    OneTapFrame out;
    out.tones = dft(y_d);
    out.equalized.resize(y_d.size());
    for (std::size_t k = 0; k < y_d.size(); ++k)
    {
        const double den = std::norm(diag[k]) + noise_var;
        if (den == 0.0)
        {
            out.equalized[k] = cxd{0.0, 0.0};
            out.degenerate = true;
        }
        else
            out.equalized[k] = std::conj(diag[k]) * out.tones[k] / den;
    }
    out.symbols = idft(out.equalized);
    return out;
}

} // namespace zpafdm
