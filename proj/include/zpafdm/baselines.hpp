// Reference links the chirp chain is benchmarked against, all sharing the
// same physical channel model and noise convention:
//
//   ofdm_link    block multicarrier with plain cyclic prefix, per-tone MMSE
//                against a mid-symbol channel snapshot
//   scfde_link   same framing with the data kept in the time domain and a
//                frequency-domain MMSE per block
//   lmmse_equalize
//                joint MMSE over the whole folded frame, the expensive
//                upper reference for the one-tap equalizer
//
// Block geometry is derived from the chirp configuration so every scheme
// spends the same fraction of airtime on guard overhead. The multicarrier
// link splits the budget into many short symbols; the single-carrier link
// keeps the classic one-block-per-frame shape, so its prefix matches the
// chirp frame's whole guard region and its equalizer snapshot is stale by
// up to half a frame.

#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "zpafdm/analysis.hpp"
#include "zpafdm/channel.hpp"
#include "zpafdm/params.hpp"
#include "zpafdm/transforms.hpp"
#include "zpafdm/zp_afdm.hpp"

namespace zpafdm
{

struct BlockConfig
{
    int n_sub = 0;        // data samples per block
    int cp = 0;           // cyclic prefix per block
    int n_sym = 0;        // blocks per burst
    int doppler_norm = 0; // samples per Doppler cycle unit (the chirp frame length)
    Constellation constellation = Constellation::qpsk;

    int burst_len() const { return n_sym * (n_sub + cp); }
    int bits_per_burst() const { return bits_per_symbol(constellation) * n_sub * n_sym; }

    void validate() const
    {
        if (n_sub < 1 || cp < 0 || n_sym < 1 || doppler_norm < 1)
            throw std::invalid_argument("BlockConfig: invalid block geometry");
    }
};

// block geometry whose prefix overhead matches the chirp frame's guard
// overhead: cp absorbs the same delay spread, and the block length is the
// one that spends the same airtime fraction on it
inline BlockConfig matched_block_config(const AfdmConfig &cfg)
{
    if (cfg.l_max < 1)
        throw std::invalid_argument("matched_block_config: needs a positive delay spread");
    const double eff = cfg.efficiency();
    BlockConfig bc;
    bc.cp = cfg.l_max;
    bc.n_sub = static_cast<int>(std::llround(bc.cp * eff / (1.0 - eff)));
    if (bc.n_sub < 1)
        throw std::invalid_argument("matched_block_config: degenerate block length");
    bc.n_sym = (cfg.n + cfg.cpp_len) / (bc.n_sub + bc.cp);
    if (bc.n_sym < 1)
        throw std::invalid_argument("matched_block_config: frame shorter than one block");
    bc.doppler_norm = cfg.n;
    bc.constellation = cfg.constellation;
    return bc;
}

// single-carrier geometry: one block per frame carrying as many symbols as
// the chirp frame carries, with the rest of the airtime spent on the
// prefix. Same duration, same payload, same overhead fraction.
inline BlockConfig scfde_block_config(const AfdmConfig &cfg)
{
    BlockConfig bc;
    bc.n_sub = cfg.n_data;
    bc.cp = cfg.n + cfg.cpp_len - cfg.n_data;
    bc.n_sym = 1;
    bc.doppler_norm = cfg.n;
    bc.constellation = cfg.constellation;
    bc.validate();
    return bc;
}

// tone-domain response of the channel frozen at one sample instant
inline cvec block_subcarrier_response(const ChannelRealization &chan, const BlockConfig &bc,
                                      std::int64_t sample_index)
{
    bc.validate();
    for (const auto &p : chan.paths)
        if (p.delay < 0 || p.delay > bc.cp)
            throw std::invalid_argument("block_subcarrier_response: path delay outside the prefix");

    cvec h(bc.n_sub, cxd{0.0, 0.0});
    for (const auto &p : chan.paths)
    {
        const cxd g = p.gain *
                      detail::cis_turns(static_cast<long double>(detail::imod(
                                            static_cast<std::int64_t>(p.doppler) * sample_index,
                                            bc.doppler_norm)) /
                                        bc.doppler_norm);
        for (std::int64_t f = 0; f < bc.n_sub; ++f)
            h[f] += g * detail::cis_turns(
                            -static_cast<long double>(detail::imod(p.delay * f, bc.n_sub)) / bc.n_sub);
    }
    return h;
}

namespace detail
{

// shared burst engine; the two links differ only in whether the data
// rides on the tones or on the time samples
inline std::vector<int> run_block_link(const std::vector<int> &bits, const BlockConfig &bc,
                                       const ChannelRealization &chan, double sigma2,
                                       std::uint64_t noise_seed, bool data_in_time)
{
    bc.validate();
    if (bits.size() != static_cast<std::size_t>(bc.bits_per_burst()))
        throw std::invalid_argument("block link: bit count does not match the burst size");

    const cvec symbols = map_symbols(bits, bc.constellation);
    const int stride = bc.n_sub + bc.cp;

    cvec burst(static_cast<std::size_t>(bc.burst_len()));
    for (int q = 0; q < bc.n_sym; ++q)
    {
        cvec block(symbols.begin() + static_cast<std::ptrdiff_t>(q) * bc.n_sub,
                   symbols.begin() + static_cast<std::ptrdiff_t>(q + 1) * bc.n_sub);
        if (!data_in_time)
            block = idft(block);
        for (int j = 0; j < bc.cp; ++j)
            burst[static_cast<std::size_t>(q) * stride + j] = block[bc.n_sub - bc.cp + j];
        for (int i = 0; i < bc.n_sub; ++i)
            burst[static_cast<std::size_t>(q) * stride + bc.cp + i] = block[i];
    }

    const cvec r = add_awgn(apply_channel_stream(burst, chan, bc.doppler_norm), sigma2, noise_seed);

    std::vector<int> out;
    out.reserve(bits.size());
    for (int q = 0; q < bc.n_sym; ++q)
    {
        cvec body(r.begin() + static_cast<std::ptrdiff_t>(q) * stride + bc.cp,
                  r.begin() + static_cast<std::ptrdiff_t>(q) * stride + bc.cp + bc.n_sub);
        const cvec tones = dft(body);
        const cvec h = block_subcarrier_response(
            chan, bc, static_cast<std::int64_t>(q) * stride + bc.cp + bc.n_sub / 2);
        cvec est(bc.n_sub);
        for (int f = 0; f < bc.n_sub; ++f)
        {
            const double den = std::norm(h[f]) + sigma2;
            est[f] = den == 0.0 ? cxd{0.0, 0.0} : std::conj(h[f]) * tones[f] / den;
        }
        if (data_in_time)
            est = idft(est);
        const auto rx = demap_symbols(est);
        out.insert(out.end(), rx.begin(), rx.end());
    }
    return out;
}

} // namespace detail

inline std::vector<int> ofdm_link(const std::vector<int> &bits, const BlockConfig &bc,
                                  const ChannelRealization &chan, double sigma2,
                                  std::uint64_t noise_seed)
{
    return detail::run_block_link(bits, bc, chan, sigma2, noise_seed, false);
}

inline std::vector<int> scfde_link(const std::vector<int> &bits, const BlockConfig &bc,
                                   const ChannelRealization &chan, double sigma2,
                                   std::uint64_t noise_seed)
{
    return detail::run_block_link(bits, bc, chan, sigma2, noise_seed, true);
}

// per-bin noise variance of the folded frame: bin m accumulates one noise
// sample per congruent index of the long frame
inline std::vector<double> folded_noise_profile(const AfdmConfig &cfg, double sigma2)
{
    if (sigma2 < 0.0)
        throw std::invalid_argument("folded_noise_profile: negative variance");
    std::vector<double> prof(cfg.n_data, 0.0);
    for (int m = 0; m < cfg.n; ++m)
        prof[m % cfg.n_data] += sigma2;
    return prof;
}

// joint MMSE estimate conj-transpose(H) (H H^* + R)^-1 y with per-bin
// noise covariance R = diag(noise_var)
inline cvec lmmse_equalize(const cvec &y_d, const cmat &h, const std::vector<double> &noise_var)
{
    if (y_d.size() != static_cast<std::size_t>(h.rows()) || noise_var.size() != y_d.size())
        throw std::invalid_argument("lmmse_equalize: dimension mismatch");
    for (double v : noise_var)
        if (v < 0.0 || !std::isfinite(v))
            throw std::invalid_argument("lmmse_equalize: noise variances must be finite and >= 0");

    Eigen::VectorXcd yv(h.rows());
    for (Eigen::Index r = 0; r < h.rows(); ++r)
        yv(r) = y_d[static_cast<std::size_t>(r)];

    cmat cov = h * h.adjoint();
    for (Eigen::Index r = 0; r < h.rows(); ++r)
        cov(r, r) += noise_var[static_cast<std::size_t>(r)];

    Eigen::LDLT<cmat> ldlt(cov);
    if (ldlt.info() != Eigen::Success)
        throw std::runtime_error("lmmse_equalize: covariance factorization failed");
    const Eigen::VectorXcd x = h.adjoint() * ldlt.solve(yv);

    cvec out(static_cast<std::size_t>(h.cols()));
    for (Eigen::Index c = 0; c < h.cols(); ++c)
        out[static_cast<std::size_t>(c)] = x(c);
    return out;
}

} // namespace zpafdm
