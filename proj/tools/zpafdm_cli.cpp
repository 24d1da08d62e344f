// Command line front end: BER sweeps, effective-matrix dumps, derived
// parameter reports, and a single-frame trace for external plotting.

#include <CLI11.hpp>

#include <zpafdm/harness.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace
{

using namespace zpafdm;

std::vector<std::string> split_list(const std::string &text)
{
    std::vector<std::string> out;
    std::istringstream in(text);
    std::string token;
    while (std::getline(in, token, ','))
    {
        if (token.empty())
            throw std::invalid_argument("empty entry in list '" + text + "'");
        out.push_back(token);
    }
    if (out.empty())
        throw std::invalid_argument("empty list");
    return out;
}

// either a comma list of values or an inclusive start:step:stop range
std::vector<double> parse_ebn0(const std::string &text)
{
    std::vector<double> grid;
    if (text.find(':') != std::string::npos)
    {
        double start = 0, step = 0, stop = 0;
        char c1 = 0, c2 = 0;
        std::istringstream in(text);
        if (!(in >> start >> c1 >> step >> c2 >> stop) || c1 != ':' || c2 != ':' || !in.eof())
            throw std::invalid_argument("--ebn0 range must look like start:step:stop");
        if (step <= 0 || stop < start)
            throw std::invalid_argument("--ebn0 range needs step > 0 and stop >= start");
        for (double v = start; v <= stop + 1e-9 * step; v += step)
            grid.push_back(v);
        return grid;
    }
    for (const auto &tok : split_list(text))
        grid.push_back(std::stod(tok));
    return grid;
}

void write_complex_rows(std::ostream &out, const cvec &v)
{
    out.precision(17);
    out << "index,re,im\n";
    for (std::size_t i = 0; i < v.size(); ++i)
        out << i << ',' << v[i].real() << ',' << v[i].imag() << '\n';
}

void dump_vector(const std::filesystem::path &dir, const std::string &name, const cvec &v)
{
    std::ofstream out(dir / (name + ".csv"));
    if (!out)
        throw std::runtime_error("cannot write " + (dir / (name + ".csv")).string());
    write_complex_rows(out, v);
}

// deterministic realization for dump tools: the six-path example keeps its
// unit gains, fading profiles are drawn once from the given seed
ChannelRealization dump_channel(const std::string &profile, const AfdmConfig &cfg,
                                std::uint64_t seed)
{
    if (profile == "fig3")
        return fig3_channel_unit_gains(cfg);
    return make_channel_source(profile, cfg).draw(cfg, seed);
}

struct BerArgs
{
    std::string config;
    std::string ebn0;
    std::string schemes = "zp_afdm";
    std::string chis;
    std::int64_t min_errors = 100;
    std::int64_t min_bits = 100000;
    std::int64_t max_frames = 1000000;
    std::uint64_t seed = 0;
    std::string out;
};

int run_ber(const BerArgs &args, bool seed_given)
{
    const FileConfig fc = load_config_file(args.config);

    SweepSpec spec;
    spec.ebn0_db = parse_ebn0(args.ebn0);
    spec.schemes.clear();
    for (const auto &name : split_list(args.schemes))
        spec.schemes.push_back(parse_scheme(name));
    if (!args.chis.empty())
        for (const auto &tok : split_list(args.chis))
            spec.chis.push_back(std::stoi(tok));
    spec.min_errors = args.min_errors;
    spec.min_bits = args.min_bits;
    spec.max_frames = args.max_frames;
    spec.master_seed = seed_given ? args.seed : fc.seed;

    const auto records = run_sweep(spec, fc);
    if (args.out.empty())
    {
        write_ber_csv(std::cout, records, spec);
        return 0;
    }
    std::ofstream out(args.out);
    if (!out)
        throw std::runtime_error("cannot write " + args.out);
    write_ber_csv(out, records, spec);
    std::cout << "wrote " << records.size() << " records to " << args.out << "\n";
    return 0;
}

struct MatrixArgs
{
    std::string kind;
    std::string profile = "fig3";
    int chi = 2;
    int n = 64;
    int k_max = 2;
    int l_max = 1;
    std::uint64_t seed = 1;
    std::string out;
};

int run_matrix(const MatrixArgs &args)
{
    const AfdmConfig cfg = build_config(args.chi, args.k_max, args.l_max, args.n);
    const ChannelRealization chan = dump_channel(args.profile, cfg, args.seed);

    cmat h;
    if (args.kind == "aff")
        h = affine_matrix(chan, cfg);
    else if (args.kind == "zp")
        h = zp_affine_matrix(chan, cfg);
    else if (args.kind == "recon")
        h = recon_matrix(chan, cfg);
    else if (args.kind == "foa")
        h = foa_matrix(chan, cfg);
    else if (args.kind == "freq")
        h = freq_matrix(chan, cfg);
    else
        throw std::invalid_argument("--kind must be one of aff, zp, recon, foa, freq");

    std::ofstream out(args.out);
    if (!out)
        throw std::runtime_error("cannot write " + args.out);
    out.precision(17);
    out << "row,col,re,im\n";
    std::int64_t kept = 0;
    for (Eigen::Index r = 0; r < h.rows(); ++r)
        for (Eigen::Index c = 0; c < h.cols(); ++c)
            if (std::abs(h(r, c)) > 1e-15)
            {
                out << r << ',' << c << ',' << h(r, c).real() << ',' << h(r, c).imag() << '\n';
                ++kept;
            }
    std::cout << "wrote " << kept << " nonzero entries of a " << h.rows() << "x" << h.cols()
              << " matrix to " << args.out << "\n";
    return 0;
}

struct ParamsArgs
{
    int chi = 0;
    int k_max = 4;
    int l_max = 5;
    int n = 4096;
    int cpp_len = -1;
    std::string chis;
    std::string out;
};

int run_params(const ParamsArgs &args)
{
    const AfdmConfig cfg =
        build_config(args.chi, args.k_max, args.l_max, args.n, Constellation::qpsk, args.cpp_len);

    std::cout.precision(12);
    std::cout << "chi         " << cfg.chi << "\n"
              << "n           " << cfg.n << "\n"
              << "k_max       " << cfg.k_max << "\n"
              << "l_max       " << cfg.l_max << "\n"
              << "cpp_len     " << cfg.cpp_len << "\n"
              << "c1          " << cfg.c1 << "\n"
              << "c2          " << cfg.c2 << "\n"
              << "pad_head    " << cfg.pad_head << "\n"
              << "pad_len     " << cfg.pad_len << "\n"
              << "n_data      " << cfg.n_data << "\n";
    std::cout.precision(6);
    std::cout << "efficiency  " << std::fixed << cfg.efficiency() << "\n";
    std::cout.unsetf(std::ios::fixed);

    if (!args.chis.empty())
    {
        std::vector<int> chis;
        for (const auto &tok : split_list(args.chis))
            chis.push_back(std::stoi(tok));
        if (args.out.empty())
            efficiency_report(chis, cfg, std::cout);
        else
        {
            std::ofstream out(args.out);
            if (!out)
                throw std::runtime_error("cannot write " + args.out);
            efficiency_report(chis, cfg, out);
            std::cout << "wrote efficiency table to " << args.out << "\n";
        }
    }
    return 0;
}

struct DemoArgs
{
    std::string config;
    int chi = 2;
    int k_max = 2;
    int l_max = 1;
    int n = 64;
    std::string profile = "fig3";
    double ebn0_db = 20.0;
    std::uint64_t seed = 1;
    std::string out_dir = "demo_out";
};

int run_demo(const DemoArgs &args, bool profile_given)
{
    AfdmConfig cfg;
    std::string profile = args.profile;
    if (!args.config.empty())
    {
        const FileConfig fc = load_config_file(args.config);
        cfg = fc.cfg;
        if (!profile_given)
            profile = fc.profile;
    }
    else
    {
        cfg = build_config(args.chi, args.k_max, args.l_max, args.n);
    }

    const ChannelRealization chan = dump_channel(profile, cfg, mix_seed(args.seed, 2));
    const auto tx =
        detail::draw_bits(2LL * cfg.n_data, mix_seed(args.seed, 1));

    const cvec x_d = map_symbols(tx, cfg.constellation);
    const cvec x = zero_pad(x_d, cfg);
    const cvec s = idaft(x, cfg.chirp());
    const cvec s_cpp = add_prefix(s, cfg);

    const double eb = static_cast<double>(cfg.n + cfg.cpp_len) /
                      (static_cast<double>(cfg.n_data) * bits_per_symbol(cfg.constellation));
    const double sigma2 = eb * std::pow(10.0, -args.ebn0_db / 10.0);
    const cvec r_cpp = add_awgn(apply_channel(s_cpp, chan, cfg), sigma2, mix_seed(args.seed, 3));

    const cvec y = demodulate(r_cpp, cfg);
    const cvec y_d = reconstruct(y, cfg);
    const double noise_var = folded_noise_variance(cfg, sigma2) + interference_power(chan, cfg);
    const auto eq = equalize_one_tap(y_d, foa_diagonal(chan, cfg), noise_var);

    const std::filesystem::path dir(args.out_dir);
    std::filesystem::create_directories(dir);
    dump_vector(dir, "x_d", x_d);
    dump_vector(dir, "x", x);
    dump_vector(dir, "s", s);
    dump_vector(dir, "s_cpp", s_cpp);
    dump_vector(dir, "r_cpp", r_cpp);
    dump_vector(dir, "y", y);
    dump_vector(dir, "y_d", y_d);
    dump_vector(dir, "y_d_tones", eq.tones);
    dump_vector(dir, "x_hat_tones", eq.equalized);
    dump_vector(dir, "x_hat", eq.symbols);

    const auto rx = demap_symbols(eq.symbols);
    std::int64_t errors = 0;
    for (std::size_t i = 0; i < tx.size(); ++i)
        errors += (tx[i] != rx[i]);
    std::cout << "wrote 10 frame dumps to " << args.out_dir << "\n"
              << "frame bit errors: " << errors << " / " << tx.size() << "\n";
    return 0;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"zero-padded chirp-carrier transceiver toolkit"};
    app.require_subcommand(1);

    BerArgs ber;
    auto *ber_cmd = app.add_subcommand("ber", "monte carlo bit error rate sweep");
    ber_cmd->add_option("--config", ber.config, "key = value config file")->required();
    ber_cmd->add_option("--ebn0", ber.ebn0, "grid, start:step:stop or comma list of dB values")
        ->required();
    ber_cmd->add_option("--schemes", ber.schemes,
                        "comma list of zp_afdm, ofdm, scfde, lmmse_afdm");
    ber_cmd->add_option("--chis", ber.chis, "comma list of chirp rates; default keeps the config");
    ber_cmd->add_option("--min-errors", ber.min_errors, "error floor per point");
    ber_cmd->add_option("--min-bits", ber.min_bits, "bit floor per point");
    ber_cmd->add_option("--max-frames", ber.max_frames, "hard frame cap per point");
    auto *seed_opt = ber_cmd->add_option("--seed", ber.seed, "master seed; default from config");
    ber_cmd->add_option("--out", ber.out, "output csv path; stdout when omitted");

    MatrixArgs mat;
    auto *mat_cmd = app.add_subcommand("matrix", "dump one effective channel matrix as sparse csv");
    mat_cmd->add_option("--kind", mat.kind, "aff, zp, recon, foa, or freq")->required();
    mat_cmd->add_option("--profile", mat.profile,
                        "fig3 (fixed unit gains), eva, or a custom profile path");
    mat_cmd->add_option("--chi", mat.chi, "chirp rate");
    mat_cmd->add_option("--n", mat.n, "frame length");
    mat_cmd->add_option("--k-max", mat.k_max, "doppler budget");
    mat_cmd->add_option("--l-max", mat.l_max, "delay budget");
    mat_cmd->add_option("--seed", mat.seed, "draw seed for fading profiles");
    mat_cmd->add_option("--out", mat.out, "output csv path")->required();

    ParamsArgs par;
    auto *par_cmd = app.add_subcommand("params", "print derived frame geometry");
    par_cmd->add_option("--chi", par.chi, "chirp rate")->required();
    par_cmd->add_option("--k-max", par.k_max, "doppler budget");
    par_cmd->add_option("--l-max", par.l_max, "delay budget");
    par_cmd->add_option("--n", par.n, "frame length");
    par_cmd->add_option("--cpp-len", par.cpp_len, "prefix length; default l_max");
    par_cmd->add_option("--chis", par.chis, "also write an efficiency table for these rates");
    par_cmd->add_option("--out", par.out, "efficiency table path; stdout when omitted");

    DemoArgs demo;
    auto *demo_cmd = app.add_subcommand("demo", "trace one frame through the chain");
    demo_cmd->add_option("--config", demo.config, "key = value config file");
    demo_cmd->add_option("--chi", demo.chi, "chirp rate when no config is given");
    demo_cmd->add_option("--k-max", demo.k_max, "doppler budget");
    demo_cmd->add_option("--l-max", demo.l_max, "delay budget");
    demo_cmd->add_option("--n", demo.n, "frame length");
    auto *demo_profile = demo_cmd->add_option("--profile", demo.profile, "channel profile");
    demo_cmd->add_option("--ebn0", demo.ebn0_db, "operating point in dB");
    demo_cmd->add_option("--seed", demo.seed, "frame seed");
    demo_cmd->add_option("--out-dir", demo.out_dir, "directory for the csv dumps");

    CLI11_PARSE(app, argc, argv);

    try
    {
        if (ber_cmd->parsed())
            return run_ber(ber, seed_opt->count() > 0);
        if (mat_cmd->parsed())
            return run_matrix(mat);
        if (par_cmd->parsed())
            return run_params(par);
        if (demo_cmd->parsed())
            return run_demo(demo, demo_profile->count() > 0);
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
