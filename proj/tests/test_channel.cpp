#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include <zpafdm/channel.hpp>

#include "support/oracles.hpp"

using namespace zpafdm;

TEST_CASE("vehicular profile quantizes and merges at 2 MHz")
{
    auto cfg = build_config(9, 4, 5, 4096); // default bandwidth 2 MHz
    auto pdp = eva_profile(cfg);

    REQUIRE(pdp.size() == 5); // 500 ns grid merges the nine taps into five
    CHECK(pdp[0].delay == 0);
    CHECK(pdp[1].delay == 1);
    CHECK(pdp[2].delay == 2);
    CHECK(pdp[3].delay == 3);
    CHECK(pdp[4].delay == 5);

    double total = 0.0;
    for (const auto &t : pdp)
        total += t.power;
    CHECK(total == Catch::Approx(1.0).epsilon(1e-12));

    // first grid point collects the 0, 30 and 150 ns taps
    const double lin0 = 1.0 + std::pow(10.0, -0.15) + std::pow(10.0, -0.14);
    double lin_total = 0.0;
    for (double db : {0.0, -1.5, -1.4, -3.6, -0.6, -9.1, -7.0, -12.0, -16.9})
        lin_total += std::pow(10.0, db / 10.0);
    CHECK(pdp[0].power == Catch::Approx(lin0 / lin_total).epsilon(1e-12));
}

TEST_CASE("vehicular profile at reduced bandwidth spans four taps")
{
    auto cfg = build_config(8, 2, 3, 512, Constellation::qpsk, -1, 1.2e6);
    auto pdp = eva_profile(cfg);
    REQUIRE(pdp.size() == 4);
    for (int i = 0; i < 4; ++i)
        CHECK(pdp[i].delay == i);
}

TEST_CASE("vehicular profile keeps all nine taps when the grid is fine enough")
{
    auto cfg = build_config(1, 0, 2510, 4096, Constellation::qpsk, -1, 1.0e9);
    auto pdp = eva_profile(cfg);
    CHECK(pdp.size() == 9);
    CHECK(pdp.back().delay == 2510);
}

TEST_CASE("vehicular profile rejects an l_max that does not match the grid")
{
    auto cfg = build_config(2, 2, 4, 512); // at 2 MHz the max grid delay is 5, not 4
    CHECK_THROWS_AS(eva_profile(cfg), std::invalid_argument);
}

TEST_CASE("random realizations are reproducible and on-grid")
{
    auto cfg = build_config(9, 4, 5, 4096);
    auto pdp = eva_profile(cfg);

    auto a = draw_realization(pdp, cfg.k_max, 42);
    auto b = draw_realization(pdp, cfg.k_max, 42);
    auto c = draw_realization(pdp, cfg.k_max, 43);

    REQUIRE(a.paths.size() == pdp.size());
    bool same = true, differs = false;
    for (std::size_t i = 0; i < a.paths.size(); ++i)
    {
        same = same && a.paths[i].gain == b.paths[i].gain && a.paths[i].doppler == b.paths[i].doppler;
        differs = differs || a.paths[i].gain != c.paths[i].gain;
        CHECK(a.paths[i].delay == pdp[i].delay);
        CHECK(std::abs(a.paths[i].doppler) <= cfg.k_max);
    }
    CHECK(same);
    CHECK(differs);
    a.validate(cfg);
}

TEST_CASE("zero Doppler budget pins every path to zero Doppler")
{
    auto cfg = build_config(1, 0, 5, 4096);
    auto pdp = eva_profile(cfg);
    for (std::uint64_t seed = 0; seed < 16; ++seed)
        for (const auto &p : draw_realization(pdp, 0, seed).paths)
            CHECK(p.doppler == 0);
}

TEST_CASE("drawn gain power matches the profile on average")
{
    PowerDelayProfile pdp{{0, 1.0}};
    double acc = 0.0;
    const int trials = 20000;
    for (int t = 0; t < trials; ++t)
        acc += std::norm(draw_realization(pdp, 2, 1000 + t).paths[0].gain);
    CHECK(acc / trials == Catch::Approx(1.0).epsilon(0.03));
}

TEST_CASE("six-path example channel has the fixed geometry")
{
    auto cfg = build_config(2, 2, 1, 64);
    auto chan = fig3_channel_unit_gains(cfg);
    REQUIRE(chan.paths.size() == 6);
    CHECK(chan.total_power() == Catch::Approx(1.0).epsilon(1e-12));

    auto geo = fig3_path_geometry();
    for (std::size_t i = 0; i < 6; ++i)
    {
        CHECK(chan.paths[i].delay == geo[i].first);
        CHECK(chan.paths[i].doppler == geo[i].second);
    }

    auto drawn = draw_fig3_channel(cfg, 7);
    for (std::size_t i = 0; i < 6; ++i)
        CHECK(drawn.paths[i].doppler == geo[i].second);

    auto tight = build_config(2, 1, 1, 64);
    CHECK_THROWS_AS(fig3_channel_unit_gains(tight), std::invalid_argument);
}

TEST_CASE("custom profile parses path lists")
{
    std::istringstream in("# delay,doppler,gain_re,gain_im\n0,0,1,0\n2,-1,0.5,-0.25\n");
    auto chan = load_custom_profile(in);
    REQUIRE(chan.paths.size() == 2);
    CHECK(chan.paths[1].delay == 2);
    CHECK(chan.paths[1].doppler == -1);
    CHECK(chan.paths[1].gain == cxd{0.5, -0.25});

    std::istringstream bad("0,0,1\n");
    CHECK_THROWS_AS(load_custom_profile(bad), std::invalid_argument);
    std::istringstream bad2("0,zero,1,0\n");
    CHECK_THROWS_AS(load_custom_profile(bad2), std::invalid_argument);
    std::istringstream empty("# nothing\n");
    CHECK_THROWS_AS(load_custom_profile(empty), std::invalid_argument);
}

TEST_CASE("validate flags off-grid paths")
{
    auto cfg = build_config(2, 2, 1, 64);
    ChannelRealization chan{{{2, 0, cxd{1, 0}}}};
    CHECK_THROWS_AS(chan.validate(cfg), std::invalid_argument);
    ChannelRealization chan2{{{0, 3, cxd{1, 0}}}};
    CHECK_THROWS_AS(chan2.validate(cfg), std::invalid_argument);
}

TEST_CASE("identity path leaves the frame untouched")
{
    auto cfg = build_config(1, 2, 2, 16);
    ChannelRealization chan{{{0, 0, cxd{1, 0}}}};
    cvec s = oracle::random_cvec(cfg.cpp_len + cfg.n, 3);
    CHECK(oracle::max_abs_diff(apply_channel(s, chan, cfg), s) < 1e-15);
}

TEST_CASE("pure delay shifts the frame with zero prehistory")
{
    auto cfg = build_config(1, 2, 2, 16);
    ChannelRealization chan{{{2, 0, cxd{0.0, 1.0}}}};
    cvec s = oracle::random_cvec(cfg.cpp_len + cfg.n, 4);
    cvec r = apply_channel(s, chan, cfg);
    CHECK(std::abs(r[0]) == 0.0);
    CHECK(std::abs(r[1]) == 0.0);
    for (std::size_t i = 2; i < r.size(); ++i)
        CHECK(std::abs(r[i] - cxd{0.0, 1.0} * s[i - 2]) < 1e-15);
}

TEST_CASE("single Doppler path modulates by the frame-periodic tone")
{
    auto cfg = build_config(2, 2, 1, 16);
    ChannelRealization chan{{{0, 1, cxd{1, 0}}}};
    cvec s(cfg.cpp_len + cfg.n, cxd{1.0, 0.0});
    cvec r = apply_channel(s, chan, cfg);
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(r.size()); ++i)
    {
        const double ang = 2.0 * std::numbers::pi * static_cast<double>(i - cfg.cpp_len) / cfg.n;
        CHECK(std::abs(r[i] - cxd{std::cos(ang), std::sin(ang)}) < 1e-14);
    }
}

TEST_CASE("channel application is linear in the input")
{
    auto cfg = build_config(2, 2, 2, 32);
    ChannelRealization chan{{{0, 2, cxd{0.4, 0.1}}, {2, -1, cxd{-0.3, 0.6}}}};
    cvec a = oracle::random_cvec(cfg.cpp_len + cfg.n, 5);
    cvec b = oracle::random_cvec(cfg.cpp_len + cfg.n, 6);
    cvec ab(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        ab[i] = 0.7 * a[i] + cxd{0.0, 2.0} * b[i];

    cvec ra = apply_channel(a, chan, cfg);
    cvec rb = apply_channel(b, chan, cfg);
    cvec rab = apply_channel(ab, chan, cfg);
    for (std::size_t i = 0; i < a.size(); ++i)
        CHECK(std::abs(rab[i] - (0.7 * ra[i] + cxd{0.0, 2.0} * rb[i])) < 1e-13);
}

TEST_CASE("two-path output matches a hand-built dense operator")
{
    auto cfg = build_config(1, 2, 2, 16);
    ChannelRealization chan{{{1, 2, cxd{0.8, -0.2}}, {2, -2, cxd{0.1, 0.5}}}};
    cvec s = oracle::random_cvec(cfg.cpp_len + cfg.n, 9);

    const std::size_t len = s.size();
    cvec expect(len, cxd{0, 0});
    for (const auto &p : chan.paths)
        for (std::size_t i = 0; i < len; ++i)
        {
            if (static_cast<std::int64_t>(i) - p.delay < 0)
                continue;
            const double n = static_cast<double>(static_cast<std::int64_t>(i) - cfg.cpp_len);
            const double ang = 2.0 * std::numbers::pi * p.doppler * n / cfg.n;
            expect[i] += p.gain * s[i - p.delay] * cxd{std::cos(ang), std::sin(ang)};
        }
    CHECK(oracle::max_abs_diff(apply_channel(s, chan, cfg), expect) < 1e-13);
}

TEST_CASE("unit-gain path preserves the retained-region norm")
{
    auto cfg = build_config(2, 2, 3, 64);
    cvec s = oracle::random_cvec(cfg.cpp_len + cfg.n, 11);
    // make the frame chirp-periodic the way the modulator does: the prefix
    // must be a copy of the tail for the shifted window to have equal norm
    for (int i = 0; i < cfg.cpp_len; ++i)
        s[i] = s[cfg.n + i];

    for (int l : {0, 1, 3})
        for (int k : {-2, 0, 2})
        {
            ChannelRealization chan{{{l, k, cxd{0.6, 0.8}}}}; // unit modulus
            cvec r = apply_channel(s, chan, cfg);
            double ns = 0.0, nr = 0.0;
            for (int i = 0; i < cfg.n; ++i)
            {
                ns += std::norm(s[cfg.cpp_len + i]);
                nr += std::norm(r[cfg.cpp_len + i]);
            }
            CHECK(nr == Catch::Approx(ns).epsilon(1e-12));
        }
}

TEST_CASE("delays beyond the prefix are rejected")
{
    auto cfg = build_config(1, 2, 2, 16, Constellation::qpsk, 2);
    ChannelRealization chan{{{3, 0, cxd{1, 0}}}};
    cvec s(cfg.cpp_len + cfg.n, cxd{1, 0});
    CHECK_THROWS_AS(apply_channel(s, chan, cfg), std::invalid_argument);
}

TEST_CASE("streamed application matches the prefixed one on the body")
{
    auto cfg = build_config(2, 2, 2, 32);
    ChannelRealization chan{{{0, 1, cxd{0.3, 0.4}}, {2, -2, cxd{-0.5, 0.1}}}};
    cvec s = oracle::random_cvec(cfg.cpp_len + cfg.n, 13);
    cvec a = apply_channel(s, chan, cfg);
    cvec b = apply_channel_stream(s, chan, cfg.n, -cfg.cpp_len);
    CHECK(oracle::max_abs_diff(a, b) < 1e-13);
}

TEST_CASE("awgn respects the requested variance and seed")
{
    cvec zero(500000, cxd{0, 0});
    cvec noisy = add_awgn(zero, 0.25, 21);
    double acc = 0.0;
    for (const auto &v : noisy)
        acc += std::norm(v);
    CHECK(acc / static_cast<double>(zero.size()) == Catch::Approx(0.25).epsilon(0.01));

    cvec again = add_awgn(zero, 0.25, 21);
    CHECK(oracle::max_abs_diff(noisy, again) == 0.0);

    cvec clean = add_awgn(noisy, 0.0, 5);
    CHECK(oracle::max_abs_diff(clean, noisy) == 0.0);

    CHECK_THROWS_AS(add_awgn(zero, -0.1, 1), std::invalid_argument);
}

TEST_CASE("path geometry helpers agree with the integer grid")
{
    auto cfg = build_config(2, 2, 1, 64); // 2*c1*N = 10
    PathSpec p{1, -2, cxd{1, 0}};
    CHECK(affine_shift(p, cfg) == -12);
    CHECK(effective_delay(p, cfg) == cfg.pad_head - 12);
    CHECK(doppler_fraction(p, cfg) == Catch::Approx(-0.2).epsilon(1e-15));
    CHECK(std::abs(doppler_fraction(p, cfg)) < 0.5);

    // gain phase e^(j*pi*k^2/(2*c1*N^2)) with k = -2: c2*k^2 turns
    const double turns = cfg.c2 * 4.0;
    CHECK(std::abs(effective_gain(p, cfg) -
                   cxd{std::cos(2 * std::numbers::pi * turns), std::sin(2 * std::numbers::pi * turns)}) <
          1e-14);

    for (auto [l, k] : fig3_path_geometry())
    {
        PathSpec q{l, k, cxd{1, 0}};
        CHECK(effective_delay(q, cfg) >= 0);
        CHECK(effective_delay(q, cfg) <= cfg.pad_len);
    }
}
