// Monte Carlo bit error rate engine. A point runs frames of one scheme at
// one Eb/N0 until the evidence floors are met, a sweep walks schemes,
// chirp rates, and operating points, and the CSV writer persists records
// with the stopping rule spelled out in the header.
//
// Reproducibility: every frame derives its bit, channel, and noise streams
// from mix(master_seed, scheme, ebn0 index, frame index), so records are
// bit-identical across runs and frames could be farmed out in any order.

#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "analysis.hpp"
#include "baselines.hpp"
#include "channel.hpp"
#include "params.hpp"
#include "rng.hpp"
#include "zp_afdm.hpp"

namespace zpafdm
{

enum class Scheme
{
    zp_afdm,
    ofdm,
    scfde,
    lmmse_afdm
};

inline const char *scheme_name(Scheme s)
{
    switch (s)
    {
    case Scheme::zp_afdm:
        return "zp_afdm";
    case Scheme::ofdm:
        return "ofdm";
    case Scheme::scfde:
        return "scfde";
    case Scheme::lmmse_afdm:
        return "lmmse_afdm";
    }
    throw std::invalid_argument("scheme_name: unknown scheme");
}

inline Scheme parse_scheme(const std::string &name)
{
    for (Scheme s : {Scheme::zp_afdm, Scheme::ofdm, Scheme::scfde, Scheme::lmmse_afdm})
        if (name == scheme_name(s))
            return s;
    throw std::invalid_argument("unknown scheme '" + name + "'");
}

struct SweepSpec
{
    std::vector<double> ebn0_db;
    std::vector<Scheme> schemes = {Scheme::zp_afdm};
    std::vector<int> chis; // empty: keep the chirp rate from the config
    std::int64_t min_bits = 100000;
    std::int64_t min_errors = 100;
    std::int64_t max_frames = 1000000;
    std::uint64_t master_seed = 1;

    void validate() const
    {
        if (ebn0_db.empty())
            throw std::invalid_argument("sweep: need at least one eb/n0 point");
        for (double db : ebn0_db)
            if (!std::isfinite(db))
                throw std::invalid_argument("sweep: eb/n0 must be finite");
        if (schemes.empty())
            throw std::invalid_argument("sweep: need at least one scheme");
        if (min_bits < 1 || min_errors < 1 || max_frames < 1)
            throw std::invalid_argument("sweep: floors must be positive");
    }
};

struct BerRecord
{
    std::string scheme;
    int chi = 0;
    double ebn0_db = 0.0;
    std::int64_t bits = 0;
    std::int64_t errors = 0;
    double ber = 0.0;
    std::int64_t frames = 0;
    double wall_seconds = 0.0;
    std::uint64_t seed = 0;
    std::vector<std::string> flags;
};

// 95% score interval for an error count; safe at 0 and at small counts
struct Interval
{
    double lo = 0.0;
    double hi = 0.0;
};

inline Interval wilson_interval(std::int64_t errors, std::int64_t bits, double z = 1.959964)
{
    if (bits < 1 || errors < 0 || errors > bits)
        throw std::invalid_argument("wilson_interval: need 0 <= errors <= bits, bits >= 1");
    const double n = static_cast<double>(bits);
    const double p = static_cast<double>(errors) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (p + z2 / (2.0 * n)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    return {center - half, center + half};
}

// where frames get their channel: a fading profile redrawn every frame, or
// one fixed realization loaded from disk
struct ChannelSource
{
    enum class Kind
    {
        eva,
        fig3,
        fixed
    };

    Kind kind = Kind::fixed;
    PowerDelayProfile pdp;
    ChannelRealization frozen;

    ChannelRealization draw(const AfdmConfig &cfg, std::uint64_t seed) const
    {
        switch (kind)
        {
        case Kind::eva:
            return draw_realization(pdp, cfg.k_max, seed);
        case Kind::fig3:
            return draw_fig3_channel(cfg, seed);
        default:
            return frozen;
        }
    }
};

// "eva" and "fig3" name built-in profiles; anything else is read as a path
// to a delay,doppler,gain_re,gain_im file holding one fixed realization
inline ChannelSource make_channel_source(const std::string &profile, const AfdmConfig &cfg)
{
    ChannelSource src;
    if (profile == "eva")
    {
        src.kind = ChannelSource::Kind::eva;
        src.pdp = eva_profile(cfg);
    }
    else if (profile == "fig3")
    {
        src.kind = ChannelSource::Kind::fig3;
        fig3_channel_unit_gains(cfg); // fails fast if the budgets cannot host it
    }
    else
    {
        src.kind = ChannelSource::Kind::fixed;
        src.frozen = load_custom_profile_file(profile);
        src.frozen.validate(cfg);
    }
    return src;
}

namespace detail
{

// energy per data bit in frame samples; guard overhead is charged to eb so
// schemes with different framing compete at equal transmit energy
inline double energy_per_bit(Scheme scheme, const AfdmConfig &cfg, const BlockConfig &bc)
{
    const int bps = bits_per_symbol(cfg.constellation);
    if (scheme == Scheme::ofdm || scheme == Scheme::scfde)
        return static_cast<double>(bc.n_sub + bc.cp) / (static_cast<double>(bc.n_sub) * bps);
    return static_cast<double>(cfg.n + cfg.cpp_len) /
           (static_cast<double>(cfg.n_data) * bps);
}

inline std::vector<int> draw_bits(std::int64_t count, std::uint64_t seed)
{
    Rng rng(seed);
    std::vector<int> bits(static_cast<std::size_t>(count));
    for (auto &b : bits)
        b = static_cast<int>(rng.uniform_int(0, 1));
    return bits;
}

} // namespace detail

// one scheme at one operating point; ebn0_db must be a grid member so the
// per-frame seeds stay addressable by (scheme, grid index, frame)
inline BerRecord run_point(Scheme scheme, const AfdmConfig &cfg, const ChannelSource &source,
                           double ebn0_db, const SweepSpec &spec, std::uint64_t master_seed)
{
    spec.validate();
    std::size_t ebn0_index = spec.ebn0_db.size();
    for (std::size_t i = 0; i < spec.ebn0_db.size(); ++i)
        if (spec.ebn0_db[i] == ebn0_db)
        {
            ebn0_index = i;
            break;
        }
    if (ebn0_index == spec.ebn0_db.size())
        throw std::invalid_argument("run_point: eb/n0 value is not on the sweep grid");

    const bool block = (scheme == Scheme::ofdm || scheme == Scheme::scfde);
    BlockConfig bc{};
    if (scheme == Scheme::ofdm)
        bc = matched_block_config(cfg);
    else if (scheme == Scheme::scfde)
        bc = scfde_block_config(cfg);
    const std::int64_t frame_bits =
        block ? bc.bits_per_burst()
              : static_cast<std::int64_t>(bits_per_symbol(cfg.constellation)) * cfg.n_data;
    const double eb = detail::energy_per_bit(scheme, cfg, bc);
    const double sigma2 = eb * std::pow(10.0, -ebn0_db / 10.0);

    BerRecord rec;
    rec.scheme = scheme_name(scheme);
    rec.chi = cfg.chi;
    rec.ebn0_db = ebn0_db;
    rec.seed = master_seed;

    const auto t0 = std::chrono::steady_clock::now();
    std::int64_t degenerate_frames = 0;
    const std::uint64_t scheme_tag = hash_str(rec.scheme);

    for (std::int64_t frame = 0; frame < spec.max_frames; ++frame)
    {
        const std::uint64_t fs = mix_seed(master_seed, scheme_tag,
                                          static_cast<std::uint64_t>(ebn0_index),
                                          static_cast<std::uint64_t>(frame));
        const auto tx = detail::draw_bits(frame_bits, mix_seed(fs, 1));
        const auto chan = source.draw(cfg, mix_seed(fs, 2));
        const std::uint64_t noise_seed = mix_seed(fs, 3);

        std::vector<int> rx;
        if (scheme == Scheme::ofdm)
            rx = ofdm_link(tx, bc, chan, sigma2, noise_seed);
        else if (scheme == Scheme::scfde)
            rx = scfde_link(tx, bc, chan, sigma2, noise_seed);
        else
        {
            const cvec x_d = map_symbols(tx, cfg.constellation);
            const cvec r = add_awgn(apply_channel(modulate(x_d, cfg), chan, cfg), sigma2,
                                    noise_seed);
            const cvec y_d = reconstruct(demodulate(r, cfg), cfg);
            if (scheme == Scheme::zp_afdm)
            {
                const double noise_var =
                    folded_noise_variance(cfg, sigma2) + interference_power(chan, cfg);
                auto frame_out = equalize_one_tap(y_d, foa_diagonal(chan, cfg), noise_var);
                if (frame_out.degenerate)
                    ++degenerate_frames;
                rx = demap_symbols(frame_out.symbols);
            }
            else
            {
                rx = demap_symbols(lmmse_equalize(y_d, recon_matrix(chan, cfg),
                                                  folded_noise_profile(cfg, sigma2)));
            }
        }

        for (std::size_t i = 0; i < tx.size(); ++i)
            rec.errors += (tx[i] != rx[i]);
        rec.bits += frame_bits;
        ++rec.frames;
        if (rec.errors >= spec.min_errors && rec.bits >= spec.min_bits)
            break;
    }

    rec.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    rec.ber = rec.bits > 0 ? static_cast<double>(rec.errors) / static_cast<double>(rec.bits) : 0.0;
    if (rec.errors < 10)
        rec.flags.push_back("low_confidence");
    if (degenerate_frames > 0)
        rec.flags.push_back("degenerate_frames=" + std::to_string(degenerate_frames));
    return rec;
}

inline BerRecord run_point(Scheme scheme, const FileConfig &fc, double ebn0_db,
                           const SweepSpec &spec, std::uint64_t master_seed)
{
    return run_point(scheme, fc.cfg, make_channel_source(fc.profile, fc.cfg), ebn0_db, spec,
                     master_seed);
}

// schemes outermost, then chirp rates, then the eb/n0 grid, so rows group
// into curves; an empty chi list keeps the configured chirp rate
inline std::vector<BerRecord> run_sweep(const SweepSpec &spec, const FileConfig &fc)
{
    spec.validate();
    std::vector<int> chis = spec.chis.empty() ? std::vector<int>{fc.cfg.chi} : spec.chis;
    std::vector<BerRecord> records;
    for (Scheme scheme : spec.schemes)
        for (int chi : chis)
        {
            const AfdmConfig cfg =
                build_config(chi, fc.cfg.k_max, fc.cfg.l_max, fc.cfg.n, fc.cfg.constellation,
                             fc.cfg.cpp_len, fc.cfg.bandwidth_hz, fc.cfg.carrier_hz);
            const ChannelSource source = make_channel_source(fc.profile, cfg);
            for (double db : spec.ebn0_db)
                records.push_back(run_point(scheme, cfg, source, db, spec, spec.master_seed));
        }
    return records;
}

namespace detail
{

inline std::string join_flags(const std::vector<std::string> &flags)
{
    std::string out;
    for (const auto &f : flags)
    {
        if (!out.empty())
            out += ';';
        out += f;
    }
    return out;
}

inline std::string format_fixed(double v, int digits)
{
    std::ostringstream s;
    s.setf(std::ios::fixed);
    s.precision(digits);
    s << v;
    return s.str();
}

inline std::string format_sci(double v, int digits)
{
    std::ostringstream s;
    s.setf(std::ios::scientific);
    s.precision(digits);
    s << v;
    return s.str();
}

} // namespace detail

inline void write_ber_csv(std::ostream &out, const std::vector<BerRecord> &records,
                          const SweepSpec &spec)
{
    out << "# monte carlo bit error rate sweep\n"
        << "# eb/n0 convention: unit-energy symbols, guard overhead charged to eb\n"
        << "#   chirped frames: eb = (n + cpp_len) / (n_data * bits_per_symbol)\n"
        << "#   block schemes:  eb = (n_sub + cp) / (n_sub * bits_per_symbol)\n"
        << "#   noise per complex sample: sigma2 = eb * 10^(-ebn0_db / 10)\n"
        << "# stop rule: a point ends when errors >= " << spec.min_errors << " and bits >= "
        << spec.min_bits << ", or after " << spec.max_frames << " frames\n"
        << "# per-frame seed = mix(master_seed, scheme, ebn0 index, frame index); rows with\n"
        << "#   errors < 10 carry the low_confidence flag\n"
        << "scheme,chi,ebn0_db,bits,errors,ber,frames,wall_seconds,seed,flags\n";
    for (const auto &r : records)
        out << r.scheme << ',' << r.chi << ',' << r.ebn0_db << ',' << r.bits << ',' << r.errors
            << ',' << detail::format_sci(r.ber, 6) << ',' << r.frames << ','
            << detail::format_fixed(r.wall_seconds, 3) << ',' << r.seed << ','
            << detail::join_flags(r.flags) << '\n';
}

// frame geometry per chirp rate; a chirp rate whose guard does not fit the
// frame surfaces as the underlying config error
inline void efficiency_report(const std::vector<int> &chis, const AfdmConfig &cfg,
                              std::ostream &out)
{
    out << "chi,pad_len,n_data,efficiency\n";
    for (int chi : chis)
    {
        const AfdmConfig c = build_config(chi, cfg.k_max, cfg.l_max, cfg.n, cfg.constellation,
                                          cfg.cpp_len, cfg.bandwidth_hz, cfg.carrier_hz);
        out << chi << ',' << c.pad_len << ',' << c.n_data << ','
            << detail::format_fixed(c.efficiency(), 6) << '\n';
    }
}

} // namespace zpafdm
