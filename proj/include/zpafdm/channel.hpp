// Doubly dispersive on-grid channel model: every propagation path has an
// integer delay l in [0, l_max], an integer Doppler index k in
// [-k_max, k_max] (cycles per frame of N samples) and a complex gain.
//
//   r[n] = sum_i h_i * s[n - l_i] * e^(j2*pi*k_i*n/N) + w[n]
//
// Also provides the standard nine-tap vehicular power-delay profile
// quantized to the sample grid, the fixed six-path example channel used
// by the structural tests, and path-geometry helpers shared by the
// equalizer and the matrix builders.

#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <zpafdm/params.hpp>
#include <zpafdm/rng.hpp>
#include <zpafdm/transforms.hpp>

namespace zpafdm
{

struct PathSpec
{
    int delay = 0;   // samples
    int doppler = 0; // cycles per frame body
    cxd gain{0.0, 0.0};
};

struct ChannelRealization
{
    std::vector<PathSpec> paths;

    void validate(const AfdmConfig &cfg) const
    {
        for (const auto &p : paths)
        {
            if (p.delay < 0 || p.delay > cfg.l_max)
                throw std::invalid_argument("channel: path delay " + std::to_string(p.delay) +
                                            " outside [0, l_max]");
            if (std::abs(p.doppler) > cfg.k_max)
                throw std::invalid_argument("channel: path Doppler " + std::to_string(p.doppler) +
                                            " outside [-k_max, k_max]");
        }
    }

    double total_power() const
    {
        double s = 0.0;
        for (const auto &p : paths)
            s += std::norm(p.gain);
        return s;
    }
};

struct PdpTap
{
    int delay = 0;
    double power = 0.0;
};

using PowerDelayProfile = std::vector<PdpTap>;

// Nine-tap extended vehicular profile quantized to the sample grid.
// Taps falling on the same grid point merge (powers add); the result is
// normalized to unit total power. The largest quantized delay must equal
// cfg.l_max, otherwise the config does not describe this channel.
inline PowerDelayProfile eva_profile(const AfdmConfig &cfg)
{
    static const double delays_ns[] = {0, 30, 150, 310, 370, 710, 1090, 1730, 2510};
    static const double powers_db[] = {0.0, -1.5, -1.4, -3.6, -0.6, -9.1, -7.0, -12.0, -16.9};

    std::map<int, double> merged;
    for (int i = 0; i < 9; ++i)
    {
        const int grid = static_cast<int>(std::llround(delays_ns[i] * 1e-9 * cfg.bandwidth_hz));
        merged[grid] += std::pow(10.0, powers_db[i] / 10.0);
    }

    double total = 0.0;
    for (const auto &[d, p] : merged)
        total += p;

    PowerDelayProfile pdp;
    for (const auto &[d, p] : merged)
        pdp.push_back({d, p / total});

    if (pdp.back().delay != cfg.l_max)
        throw std::invalid_argument("eva_profile: max quantized delay " +
                                    std::to_string(pdp.back().delay) + " does not match l_max = " +
                                    std::to_string(cfg.l_max) + " at this bandwidth");
    return pdp;
}

// independent Rayleigh gains per tap, Doppler drawn uniformly on the grid
inline ChannelRealization draw_realization(const PowerDelayProfile &pdp, int k_max,
                                           std::uint64_t seed)
{
    Rng rng(seed);
    ChannelRealization chan;
    for (const auto &tap : pdp)
    {
        PathSpec p;
        p.delay = tap.delay;
        p.doppler = static_cast<int>(rng.uniform_int(-k_max, k_max));
        p.gain = std::sqrt(tap.power) * rng.cgaussian();
        chan.paths.push_back(p);
    }
    return chan;
}

// fixed six-path example channel: delays {0, 1}, Dopplers {0, +-1, +-2}
inline std::vector<std::pair<int, int>> fig3_path_geometry()
{
    return {{0, 0}, {0, -2}, {0, 2}, {1, 0}, {1, -1}, {1, 1}};
}

inline ChannelRealization fig3_channel_unit_gains(const AfdmConfig &cfg)
{
    if (cfg.k_max < 2 || cfg.l_max < 1)
        throw std::invalid_argument("fig3 channel needs k_max >= 2 and l_max >= 1");
    ChannelRealization chan;
    for (auto [l, k] : fig3_path_geometry())
        chan.paths.push_back({l, k, cxd{1.0 / std::sqrt(6.0), 0.0}});
    return chan;
}

inline ChannelRealization draw_fig3_channel(const AfdmConfig &cfg, std::uint64_t seed)
{
    ChannelRealization chan = fig3_channel_unit_gains(cfg);
    Rng rng(seed);
    for (auto &p : chan.paths)
        p.gain = std::sqrt(1.0 / 6.0) * rng.cgaussian();
    return chan;
}

// CSV rows "delay,doppler,gain_re,gain_im", one path per line
inline ChannelRealization load_custom_profile(std::istream &in)
{
    ChannelRealization chan;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line))
    {
        ++line_no;
        if (line.empty() || line[0] == '#')
            continue;
        std::istringstream row(line);
        std::string field;
        std::vector<std::string> fields;
        while (std::getline(row, field, ','))
            fields.push_back(field);
        if (fields.size() != 4)
            throw std::invalid_argument("custom profile: line " + std::to_string(line_no) +
                                        " needs delay,doppler,gain_re,gain_im");
        try
        {
            PathSpec p;
            p.delay = std::stoi(fields[0]);
            p.doppler = std::stoi(fields[1]);
            p.gain = cxd{std::stod(fields[2]), std::stod(fields[3])};
            chan.paths.push_back(p);
        }
        catch (const std::exception &)
        {
            throw std::invalid_argument("custom profile: bad number on line " +
                                        std::to_string(line_no));
        }
    }
    if (chan.paths.empty())
        throw std::invalid_argument("custom profile: no paths");
    return chan;
}

inline ChannelRealization load_custom_profile_file(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
        throw std::invalid_argument("custom profile: cannot open '" + path + "'");
    return load_custom_profile(in);
}

namespace detail
{

inline std::int64_t imod(std::int64_t a, std::int64_t m)
{
    std::int64_t r = a % m;
    return r < 0 ? r + m : r;
}

} // namespace detail

// ---- path geometry in the transformed domain -------------------------------

// index shift a path produces in the transformed frame: k - 2*c1*N*l
inline int affine_shift(const PathSpec &p, const AfdmConfig &cfg)
{
    return p.doppler - cfg.two_c1n() * p.delay;
}

// nonnegative equivalent delay after zero-padding: pad_head + k - 2*c1*N*l,
// always in [0, pad_len]
inline int effective_delay(const PathSpec &p, const AfdmConfig &cfg)
{
    return cfg.pad_head + affine_shift(p, cfg);
}

// path gain absorbed constant phase: h * e^(j*pi*k^2/(2*c1*N^2))
inline cxd effective_gain(const PathSpec &p, const AfdmConfig &cfg)
{
    return p.gain * detail::cis_turns(static_cast<long double>(cfg.c2) * p.doppler * p.doppler);
}

// residual per-sample modulation rate in the reconstructed domain,
// in cycles per sample: k/(2*c1*N^2)
inline double residual_rate(const PathSpec &p, const AfdmConfig &cfg)
{
    return 2.0 * cfg.c2 * p.doppler;
}

// Doppler as a fraction of the transformed-domain sample rate (stays
// below 1/2 by construction of c1)
inline double doppler_fraction(const PathSpec &p, const AfdmConfig &cfg)
{
    return static_cast<double>(p.doppler) / cfg.two_c1n();
}

// ---- channel application ---------------------------------------------------

// Apply the channel to a prefixed frame laid out as n in [-cpp_len, N-1]
// (vector index i holds sample n = i - cpp_len). Samples before the
// prefix are taken as zero; they only influence outputs the receiver
// discards, because every path delay is at most cpp_len.
inline cvec apply_channel(const cvec &s_cpp, const ChannelRealization &chan, const AfdmConfig &cfg)
{
    if (s_cpp.size() != static_cast<std::size_t>(cfg.cpp_len + cfg.n))
        throw std::invalid_argument("apply_channel: frame length does not match cpp_len + n");
    for (const auto &p : chan.paths)
        if (p.delay > cfg.cpp_len)
            throw std::invalid_argument("apply_channel: path delay " + std::to_string(p.delay) +
                                        " exceeds the prefix length");
        else if (p.delay < 0)
            throw std::invalid_argument("apply_channel: negative path delay");

    cvec r(s_cpp.size(), cxd{0.0, 0.0});
    for (const auto &p : chan.paths)
        for (std::int64_t i = 0; i < static_cast<std::int64_t>(r.size()); ++i)
        {
            const std::int64_t j = i - p.delay;
            if (j < 0)
                continue;
            const std::int64_t n = i - cfg.cpp_len; // true sample index
            const long double turns =
                static_cast<long double>(detail::imod(static_cast<std::int64_t>(p.doppler) * n, cfg.n)) /
                cfg.n;
            r[i] += p.gain * s_cpp[j] * detail::cis_turns(turns);
        }
    return r;
}

// Same channel acting on a one-shot transmission that starts at sample
// index start_index with zero prehistory; n_doppler is the Doppler
// normalization length (the frame body length N).
inline cvec apply_channel_stream(const cvec &s, const ChannelRealization &chan, int n_doppler,
                                 std::int64_t start_index = 0)
{
    if (n_doppler < 1)
        throw std::invalid_argument("apply_channel_stream: n_doppler must be >= 1");
    cvec r(s.size(), cxd{0.0, 0.0});
    for (const auto &p : chan.paths)
    {
        if (p.delay < 0)
            throw std::invalid_argument("apply_channel_stream: negative path delay");
        for (std::int64_t i = p.delay; i < static_cast<std::int64_t>(s.size()); ++i)
        {
            const std::int64_t n = start_index + i;
            const long double turns =
                static_cast<long double>(
                    detail::imod(static_cast<std::int64_t>(p.doppler) * n, n_doppler)) /
                n_doppler;
            r[i] += p.gain * s[i - p.delay] * detail::cis_turns(turns);
        }
    }
    return r;
}

// additive circularly symmetric noise of per-sample variance sigma2
inline cvec add_awgn(const cvec &r, double sigma2, std::uint64_t seed)
{
    if (sigma2 < 0.0)
        throw std::invalid_argument("add_awgn: variance must be >= 0");
    if (sigma2 == 0.0)
        return r;
    Rng rng(seed);
    cvec out = r;
    const double s = std::sqrt(sigma2);
    for (auto &v : out)
        v += s * rng.cgaussian();
    return out;
}

} // namespace zpafdm
