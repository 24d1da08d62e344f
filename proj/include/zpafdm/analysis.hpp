// Dense operator views of the link. Each builder returns the exact matrix
// of one stage (or composition of stages) of the chain, computed from
// closed-form entries rather than by multiplying stage matrices:
//
//   channel_time_matrix   body-to-body filtering with the chirp-periodic prefix
//   affine_matrix         the same channel seen between the transform pair
//   zp_affine_matrix      affine_matrix restricted to the padded data block
//   recon_matrix          after folding congruent output samples together
//   foa_matrix            the folded operator in the frequency domain
//   freq_matrix           classical cyclic-prefix channel between DFTs
//
// Integer phase residues are reduced exactly in int64 before conversion to
// an angle, so the builders agree with the transform chain to ~1e-12 even
// for frame sizes in the thousands.

#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "zpafdm/channel.hpp"
#include "zpafdm/params.hpp"
#include "zpafdm/transforms.hpp"

namespace zpafdm
{

using cmat = Eigen::MatrixXcd;

inline cmat dft_matrix(int n)
{
    if (n < 1)
        throw std::invalid_argument("dft_matrix: length must be >= 1");
    cmat f(n, n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c)
            f(r, c) = detail::cis_turns(
                -static_cast<long double>((static_cast<std::int64_t>(r) * c) % n) / n);
    return f / std::sqrt(static_cast<double>(n));
}

// forward chirp transform as a matrix: row m, column n holds
// (1/sqrt(N)) e^(-j2*pi*(c1*n^2 + c2*m^2 + nm/N))
inline cmat daft_matrix(const ChirpParams &p)
{
    p.validate();
    cmat a(p.n, p.n);
    for (int m = 0; m < p.n; ++m)
        for (int t = 0; t < p.n; ++t)
        {
            const long double turns =
                detail::chirp_turns(p.c1, t) + detail::chirp_turns(p.c2, m) +
                static_cast<long double>((static_cast<std::int64_t>(m) * t) % p.n) / p.n;
            a(m, t) = detail::cis_turns(-turns);
        }
    return a / std::sqrt(static_cast<double>(p.n));
}

namespace detail
{

// body-to-body time operator; wrapped taps read the frame tail times the
// prefix continuation phase, which reduces to a parity sign when present
inline cmat time_matrix(const ChannelRealization &chan, const AfdmConfig &cfg, bool chirp_periodic)
{
    chan.validate(cfg);
    const int n = cfg.n;
    // e^(-j2*pi*c1*(N^2 + 2*N*nu)) with 2*c1*N integral: only the half-turn
    // parity of c1*N^2 survives
    const double wrap_sign =
        (static_cast<std::int64_t>(cfg.two_c1n()) * n) % 2 == 0 ? 1.0 : -1.0;
    cmat h = cmat::Zero(n, n);
    for (const auto &p : chan.paths)
        for (std::int64_t t = 0; t < n; ++t)
        {
            const std::int64_t src = t - p.delay;
            const long double doppler =
                static_cast<long double>(imod(static_cast<std::int64_t>(p.doppler) * t, n)) / n;
            cxd v = p.gain * cis_turns(doppler);
            if (src < 0 && chirp_periodic)
                v *= wrap_sign;
            h(t, imod(src, n)) += v;
        }
    return h;
}

} // namespace detail

inline cmat channel_time_matrix(const ChannelRealization &chan, const AfdmConfig &cfg)
{
    return detail::time_matrix(chan, cfg, true);
}

// phase a tap picks up when its shifted index leaves [0, N): w = +1 when it
// ran off the top, -1 off the bottom, 0 inside (no correction)
inline cxd wrap_phase(double c2, int n, int w, std::int64_t m_shift)
{
    if (w == 0)
        return cxd{1.0, 0.0};
    const long double turns = static_cast<long double>(c2) * n * w *
                              (static_cast<long double>(n) * w - 2.0L * m_shift);
    return detail::cis_turns(turns);
}

// same phase under the coupling 4*c1*c2*N^2 = 1, written with c1 only
inline cxd wrap_phase_simplified(double c1, int n, int w, std::int64_t m_shift)
{
    if (w == 0)
        return cxd{1.0, 0.0};
    const long double turns = 1.0L / (4.0L * c1) -
                              static_cast<long double>(w) * m_shift / (2.0L * c1 * n);
    return detail::cis_turns(turns);
}

// channel between the transform pair. Each path lands on one circular
// diagonal: output m reads input (m - k + 2*c1*N*l) mod N with a phase
// that is exactly quadratic in the unreduced index.
inline cmat affine_matrix(const ChannelRealization &chan, const AfdmConfig &cfg)
{
    chan.validate(cfg);
    const std::int64_t n = cfg.n;
    const std::int64_t q = cfg.two_c1n();
    const std::int64_t c2_den = 2 * n * q; // c2 = 1/(2*N*q)
    cmat h = cmat::Zero(n, n);
    for (const auto &p : chan.paths)
    {
        const std::int64_t shift = affine_shift(p, cfg);
        for (std::int64_t m = 0; m < n; ++m)
        {
            const std::int64_t col = detail::imod(m - shift, n);
            long double turns =
                static_cast<long double>(detail::imod(q * p.delay * p.delay, 2 * n)) / (2 * n);
            turns += static_cast<long double>(detail::imod(col * col - m * m, c2_den)) / c2_den;
            turns -= static_cast<long double>(detail::imod(p.delay * col, n)) / n;
            h(m, col) += p.gain * detail::cis_turns(turns);
        }
    }
    return h;
}

// affine_matrix restricted to the data columns of the padded frame: the
// head/tail zeros absorb every wrapped tap, leaving one clean band per
// path at its padded delay with a pure linear phase down the band
inline cmat zp_affine_matrix(const ChannelRealization &chan, const AfdmConfig &cfg)
{
    chan.validate(cfg);
    const std::int64_t nq = static_cast<std::int64_t>(cfg.n) * cfg.two_c1n(); // 1/(2*c2)
    cmat h = cmat::Zero(cfg.n, cfg.n_data);
    for (const auto &p : chan.paths)
    {
        const int lhat = effective_delay(p, cfg);
        const cxd g = effective_gain(p, cfg);
        for (std::int64_t c = 0; c < cfg.n_data; ++c)
        {
            const std::int64_t m = lhat + c;
            const long double turns =
                -static_cast<long double>(detail::imod(static_cast<std::int64_t>(p.doppler) * m, nq)) /
                nq;
            h(m, c) += g * detail::cis_turns(turns);
        }
    }
    return h;
}

// folded operator: output bin m collects every padded-frame row congruent
// to m. Per path that is a circular shift by its padded delay, modulated
// at the residual rate evaluated on the unfolded row index.
inline cmat recon_matrix(const ChannelRealization &chan, const AfdmConfig &cfg)
{
    chan.validate(cfg);
    const std::int64_t nd = cfg.n_data;
    const std::int64_t nq = static_cast<std::int64_t>(cfg.n) * cfg.two_c1n();
    cmat h = cmat::Zero(nd, nd);
    for (const auto &p : chan.paths)
    {
        const int lhat = effective_delay(p, cfg);
        const cxd g = effective_gain(p, cfg);
        for (std::int64_t m = 0; m < nd; ++m)
        {
            const std::int64_t c = detail::imod(m - lhat, nd);
            const std::int64_t row = lhat + c; // the one congruent row this path feeds
            const long double turns =
                -static_cast<long double>(detail::imod(static_cast<std::int64_t>(p.doppler) * row, nq)) /
                nq;
            h(m, c) += g * detail::cis_turns(turns);
        }
    }
    return h;
}

namespace detail
{

// residual modulation of a path measured in output bins
inline double bin_spread(const PathSpec &p, const AfdmConfig &cfg)
{
    return residual_rate(p, cfg) * cfg.n_data;
}

} // namespace detail

// the folded operator between unitary DFTs, in closed kernel form: each
// path couples bin k to bin k' through the windowed-tone kernel evaluated
// at their distance minus the path's residual spread
inline cmat foa_matrix(const ChannelRealization &chan, const AfdmConfig &cfg)
{
    chan.validate(cfg);
    const std::int64_t nd = cfg.n_data;
    cmat h = cmat::Zero(nd, nd);
    for (const auto &p : chan.paths)
    {
        const int lhat = effective_delay(p, cfg);
        const cxd g = effective_gain(p, cfg);
        const double spread = detail::bin_spread(p, cfg);
        for (std::int64_t kp = 0; kp < nd; ++kp)
        {
            const cxd rot =
                g * detail::cis_turns(-static_cast<long double>(detail::imod(kp * lhat, nd)) / nd);
            for (std::int64_t k = 0; k < nd; ++k)
                h(k, kp) += rot * kappa(cfg.n_data, lhat, static_cast<double>(kp - k) - spread);
        }
    }
    return h;
}

// diagonal of foa_matrix without building the full operator
inline cvec foa_diagonal(const ChannelRealization &chan, const AfdmConfig &cfg)
{
    chan.validate(cfg);
    const std::int64_t nd = cfg.n_data;
    cvec d(nd, cxd{0.0, 0.0});
    for (const auto &p : chan.paths)
    {
        const int lhat = effective_delay(p, cfg);
        const cxd g = effective_gain(p, cfg) * kappa(cfg.n_data, lhat, -detail::bin_spread(p, cfg));
        for (std::int64_t k = 0; k < nd; ++k)
            d[k] += g * detail::cis_turns(-static_cast<long double>(detail::imod(k * lhat, nd)) / nd);
    }
    return d;
}

// average off-diagonal energy a bin sees: the part of each path's unit
// kernel energy that its residual spread pushes off the diagonal
inline double interference_power(const ChannelRealization &chan, const AfdmConfig &cfg)
{
    chan.validate(cfg);
    double acc = 0.0;
    for (const auto &p : chan.paths)
    {
        const double peak =
            std::norm(kappa(cfg.n_data, effective_delay(p, cfg), -detail::bin_spread(p, cfg)));
        acc += std::norm(p.gain) * (1.0 - peak);
    }
    return acc;
}

// classical cyclic-prefix channel between unitary DFTs: each path couples
// input tone f to output tone f + k with a linear phase in f
inline cmat freq_matrix(const ChannelRealization &chan, const AfdmConfig &cfg)
{
    chan.validate(cfg);
    const std::int64_t n = cfg.n;
    cmat h = cmat::Zero(n, n);
    for (const auto &p : chan.paths)
        for (std::int64_t f = 0; f < n; ++f)
        {
            const long double turns =
                -static_cast<long double>(detail::imod(static_cast<std::int64_t>(p.delay) * f, n)) / n;
            h(detail::imod(f + p.doppler, n), f) += p.gain * detail::cis_turns(turns);
        }
    return h;
}

// mean |entry|^2 along each circular diagonal (offset = column - row mod N)
inline std::vector<double> band_profile(const cmat &m)
{
    if (m.rows() != m.cols() || m.rows() < 1)
        throw std::invalid_argument("band_profile: matrix must be square and non-empty");
    const int n = static_cast<int>(m.rows());
    std::vector<double> prof(n, 0.0);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c)
            prof[detail::imod(c - r, n)] += std::norm(m(r, c)) / n;
    return prof;
}

// fraction of total energy within a circular distance of the diagonal
inline double band_energy_fraction(const cmat &m, int halfwidth)
{
    if (halfwidth < 0)
        throw std::invalid_argument("band_energy_fraction: halfwidth must be >= 0");
    const auto prof = band_profile(m);
    const int n = static_cast<int>(prof.size());
    double total = 0.0, band = 0.0;
    for (int d = 0; d < n; ++d)
    {
        total += prof[d];
        if (std::min(d, n - d) <= halfwidth)
            band += prof[d];
    }
    if (total <= 0.0)
        return 1.0; // a zero operator is trivially concentrated
    return band / total;
}

} // namespace zpafdm
