// Frame parameterization: chirp-rate selection from the Doppler budget,
// derived guard/padding geometry, and the flat key-value config file
// used by the command line tools.
//
// The first chirp rate is c1 = chi*(2*k_max+1)/(2*N) for a positive
// integer chi, so 2*c1*N is an integer and integer delays map to integer
// index shifts. The second rate is locked to c2 = 1/(4*c1*N^2), which
// collapses the cross terms of the two-chirp transform.

#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>

#include <zpafdm/transforms.hpp>

namespace zpafdm
{

enum class Constellation
{
    qpsk
};

inline Constellation parse_constellation(const std::string &s)
{
    if (s == "qpsk")
        return Constellation::qpsk;
    throw std::invalid_argument("unsupported constellation '" + s + "' (expected qpsk)");
}

inline int bits_per_symbol(Constellation c)
{
    switch (c)
    {
    case Constellation::qpsk:
        return 2;
    }
    throw std::invalid_argument("unknown constellation");
}

// chirp rates for a frame of length n with Doppler extent k_max and
// integer slope multiplier chi
inline std::pair<double, double> select_params(int chi, int k_max, int n)
{
    if (n <= 0)
        throw std::invalid_argument("select_params: n must be positive");
    if (chi < 1)
        throw std::invalid_argument("select_params: chi must be a positive integer");
    if (k_max < 0)
        throw std::invalid_argument("select_params: k_max must be >= 0");

    const double c1 = static_cast<double>(chi) * (2.0 * k_max + 1.0) / (2.0 * n);
    const double c2 = 1.0 / (4.0 * c1 * n * n);
    return {c1, c2};
}

// Complete frame geometry. All guard lengths are integers:
//   pad_head = k_max + 2*c1*N*l_max   zeros ahead of the data block
//   pad_len  = pad_head + k_max       total zeros per frame
//   n_data   = N - pad_len            data symbols per frame
struct AfdmConfig
{
    int n = 0;
    int chi = 1;
    int k_max = 0;
    int l_max = 0;
    int cpp_len = 0; // cyclic prefix length, >= l_max
    double c1 = 0.0;
    double c2 = 0.0;
    int pad_head = 0;
    int pad_len = 0;
    int n_data = 0;
    Constellation constellation = Constellation::qpsk;
    double bandwidth_hz = 2.0e6;
    double carrier_hz = 2.0e9;

    // 2*c1*N as an exact integer
    int two_c1n() const { return chi * (2 * k_max + 1); }

    ChirpParams chirp() const { return ChirpParams{c1, c2, n}; }

    // data symbols per occupied frame sample, prefix included
    double efficiency() const { return static_cast<double>(n_data) / (n + cpp_len); }

    // zero padding as a fraction of the frame body
    double zero_pad_overhead() const { return static_cast<double>(pad_len) / n; }

    double sample_period() const { return 1.0 / bandwidth_hz; }
    double frame_duration() const { return n * sample_period(); }
};

inline AfdmConfig build_config(int chi, int k_max, int l_max, int n,
                               Constellation constellation = Constellation::qpsk,
                               int cpp_len = -1, double bandwidth_hz = 2.0e6,
                               double carrier_hz = 2.0e9)
{
    if (l_max < 0)
        throw std::invalid_argument("build_config: l_max must be >= 0");
    auto [c1, c2] = select_params(chi, k_max, n);

    AfdmConfig cfg;
    cfg.n = n;
    cfg.chi = chi;
    cfg.k_max = k_max;
    cfg.l_max = l_max;
    cfg.cpp_len = cpp_len < 0 ? l_max : cpp_len;
    cfg.c1 = c1;
    cfg.c2 = c2;
    cfg.pad_head = k_max + cfg.two_c1n() * l_max;
    cfg.pad_len = cfg.pad_head + k_max;
    cfg.n_data = n - cfg.pad_len;
    cfg.constellation = constellation;
    cfg.bandwidth_hz = bandwidth_hz;
    cfg.carrier_hz = carrier_hz;

    if (cfg.cpp_len < l_max)
        throw std::invalid_argument("build_config: cpp_len must cover the delay spread (>= l_max)");
    if (cfg.n_data < 1)
        throw std::invalid_argument("build_config: zero padding (" + std::to_string(cfg.pad_len) +
                                    ") leaves no room for data in a frame of " + std::to_string(n));
    if (bandwidth_hz <= 0.0 || carrier_hz <= 0.0)
        throw std::invalid_argument("build_config: bandwidth and carrier must be positive");
    return cfg;
}

// Parsed contents of a flat "key = value" config file. Recognized keys:
// n, chi, k_max, l_max, cpp_len, constellation, profile, seed. Unknown
// or duplicate keys are rejected.
struct FileConfig
{
    AfdmConfig cfg;
    std::string profile = "eva";
    std::uint64_t seed = 1;
};

namespace detail
{

inline std::string trim(const std::string &s)
{
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos)
        return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

inline long long parse_int(const std::string &key, const std::string &value)
{
    std::size_t used = 0;
    long long v = 0;
    try
    {
        v = std::stoll(value, &used);
    }
    catch (const std::exception &)
    {
        throw std::invalid_argument("config: key '" + key + "' needs an integer, got '" + value + "'");
    }
    if (used != value.size())
        throw std::invalid_argument("config: key '" + key + "' needs an integer, got '" + value + "'");
    return v;
}

} // namespace detail

inline FileConfig load_config(std::istream &in)
{
    static const std::map<std::string, int> known = {
        {"n", 0},   {"chi", 0},     {"k_max", 0},         {"l_max", 0},
        {"cpp_len", 0}, {"constellation", 0}, {"profile", 0}, {"seed", 0}};

    std::map<std::string, std::string> kv;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line))
    {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config: line " + std::to_string(line_no) +
                                        " is not of the form key = value");
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));
        if (known.find(key) == known.end())
            throw std::invalid_argument("config: unknown key '" + key + "'");
        if (!kv.emplace(key, value).second)
            throw std::invalid_argument("config: duplicate key '" + key + "'");
        if (value.empty())
            throw std::invalid_argument("config: key '" + key + "' has no value");
    }

    for (const char *req : {"n", "chi", "k_max", "l_max"})
        if (kv.find(req) == kv.end())
            throw std::invalid_argument(std::string("config: missing required key '") + req + "'");

    const int n = static_cast<int>(detail::parse_int("n", kv.at("n")));
    const int chi = static_cast<int>(detail::parse_int("chi", kv.at("chi")));
    const int k_max = static_cast<int>(detail::parse_int("k_max", kv.at("k_max")));
    const int l_max = static_cast<int>(detail::parse_int("l_max", kv.at("l_max")));
    const int cpp_len =
        kv.count("cpp_len") ? static_cast<int>(detail::parse_int("cpp_len", kv.at("cpp_len"))) : -1;
    const Constellation cons = kv.count("constellation")
                                   ? parse_constellation(kv.at("constellation"))
                                   : Constellation::qpsk;

    FileConfig fc;
    fc.cfg = build_config(chi, k_max, l_max, n, cons, cpp_len);
    if (kv.count("profile"))
        fc.profile = kv.at("profile");
    if (kv.count("seed"))
        fc.seed = static_cast<std::uint64_t>(detail::parse_int("seed", kv.at("seed")));
    return fc;
}

inline FileConfig load_config_file(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
        throw std::invalid_argument("config: cannot open '" + path + "'");
    return load_config(in);
}

} // namespace zpafdm
