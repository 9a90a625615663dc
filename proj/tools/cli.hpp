#pragma once

// Command-line front end. `run` takes the arguments after the program name so
// tests can drive it in-process.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "topo/topo.hpp"

namespace topo::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitInput = 2;

namespace detail {

// Output goes to a file (atomically) when a path is given, else to `out`.
inline void emit(const std::string& path, const std::string& text, std::ostream& out) {
    if (path.empty()) out << text;
    else io::write_file_atomic(path, text);
}

inline bool ends_with(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

inline std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct HomologyArgs {
    std::string file;
    std::string demo;
    int max_dim = -1;
};

inline void run_homology(const HomologyArgs& a, std::ostream& out) {
    if (a.file.empty() == a.demo.empty())
        throw Error(ErrorCode::InvalidArgument, "give exactly one of a complex file or --demo");
    SimplicialComplex c;
    if (!a.demo.empty()) {
        auto ref = reference::by_name(a.demo);
        if (!ref) throw Error(ErrorCode::InvalidArgument, "unknown demo '" + a.demo + "'");
        c = std::move(*ref);
    } else {
        std::ifstream in(a.file);
        if (!in) throw Error(ErrorCode::ParseError, "cannot open " + a.file);
        c = parse_cplx(in).complex;
    }
    if (c.empty()) throw Error(ErrorCode::EmptyInput, "complex has no simplices");
    const int top = a.max_dim >= 0 ? a.max_dim : c.max_dimension();
    std::vector<std::size_t> b;
    const auto all = betti_all(c);
    for (int n = 0; n <= top; ++n)
        b.push_back(n < static_cast<int>(all.size()) ? all[static_cast<std::size_t>(n)] : 0);
    std::string text = "n,betti\n";
    for (std::size_t n = 0; n < b.size(); ++n) text += std::to_string(n) + "," + std::to_string(b[n]) + "\n";
    for (std::size_t n = 0; n < b.size(); ++n)
        text += "H_" + std::to_string(n) + " = Z^" + std::to_string(b[n]) + "\n";
    out << text;
}

struct PersistArgs {
    std::string cloud;
    std::string demo;
    int max_dim = 2;
    double max_scale = 2.0;
    std::string out;
    std::uint64_t seed = 7;
    unsigned threads = 1;
    std::size_t points = 100;
    double radius = 1.0;
    double noise = 0.05;
};

inline void run_persist(const PersistArgs& a, std::ostream& out) {
    if (a.cloud.empty() == a.demo.empty())
        throw Error(ErrorCode::InvalidArgument, "give exactly one of a point-cloud CSV or --demo");
    if (a.threads < 1) throw Error(ErrorCode::InvalidArgument, "--threads must be >= 1");
    PointCloud pc;
    if (a.demo == "noisy-circle") pc = noisy_circle_demo(a.points, a.radius, a.noise, a.seed);
    else if (a.demo == "figure-eight") pc = figure_eight_demo(a.points / 2, a.radius, a.noise, a.seed);
    else if (!a.demo.empty()) throw Error(ErrorCode::InvalidArgument, "unknown demo '" + a.demo + "'");
    else pc = PointCloud(io::read_numeric_csv_file(a.cloud));
    if (pc.empty()) throw Error(ErrorCode::EmptyInput, "point cloud is empty");

    const Barcode code = persistent_homology(pc, a.max_dim, a.max_scale, a.threads);
    if (a.out.empty()) {
        out << code.to_csv();
        return;
    }
    io::write_file_atomic(a.out, code.to_csv());
    std::string text = "dim,bars\n";
    for (int n = 0; n <= a.max_dim; ++n) text += std::to_string(n) + "," + std::to_string(code.of_dim(n).size()) + "\n";
    out << text;
}

struct EmbedArgs {
    std::string input;
    std::size_t dim = 2;
    std::size_t delay = 1;
    std::string out;
};

inline void run_embed(const EmbedArgs& a, std::ostream& out) {
    const TimeSeries ts(io::read_series_csv_file(a.input));
    const PointCloud pc = delay_embed(ts, a.dim, a.delay);
    const double score = degeneracy_score(pc);
    if (!a.out.empty()) io::write_file_atomic(a.out, pc.to_csv());
    out << "points," << pc.size() << "\n";
    out << "score," << io::format_double(score) << "\n";
    out << "degenerate," << (score < 1e-6 ? "yes" : "no") << "\n";
}

struct SynthArgs {
    std::string config;
    bool osc = false;
    double omega = 0.01;
    double x0 = 0.0;
    std::string projection = "sine";
    double amplitude = 1.0;
    double phase_offset = 0.0;
    std::string input;
    std::size_t count = 0;
    std::uint32_t rate = 44100;
    std::string out;
    bool no_normalize = false;
};

inline std::vector<double> render(const SynthArgs& a) {
    if (a.config.empty() == !a.osc) throw Error(ErrorCode::InvalidArgument, "give exactly one of --config or --osc");
    std::vector<double> input;
    if (!a.input.empty()) input = io::read_series_csv_file(a.input);
    const std::size_t count = a.count ? a.count : input.size();
    if (count < 1) throw Error(ErrorCode::InvalidArgument, "--count must be >= 1 (or give --input)");
    input.resize(count, 0.0);

    if (a.osc) {
        if (!a.input.empty()) throw Error(ErrorCode::InvalidArgument, "--osc takes no --input");
        Projection p;
        if (a.projection == "sine") p = Projection::sine(a.amplitude, a.phase_offset);
        else if (a.projection == "sawtooth") p = Projection::sawtooth();
        else if (a.projection == "fold") p = Projection::fold();
        else throw Error(ErrorCode::InvalidArgument, "--projection must be sine, sawtooth or fold");
        return oscillate(PhaseFunction::constant(a.omega), p, Phase(a.x0), count).samples;
    }
    const FilterConfig cfg = parse_filter_config(read_text(a.config));
    return propagate(cfg.filter, TimeSeries(input), cfg.initial_state).output.samples;
}

inline void run_synth(const SynthArgs& a, std::ostream& out) {
    if (a.out.empty()) throw Error(ErrorCode::InvalidArgument, "--out is required");
    if (a.rate < 1) throw Error(ErrorCode::InvalidArgument, "--rate must be >= 1");
    const bool wav = ends_with(a.out, ".wav");
    if (!wav && !ends_with(a.out, ".csv")) throw Error(ErrorCode::InvalidArgument, "--out must end in .wav or .csv");
    std::vector<double> y = render(a);
    if (wav) {
        if (!a.no_normalize) {
            double peak = 0;
            for (double v : y) peak = std::max(peak, std::fabs(v));
            if (peak > 0)
                for (double& v : y) v = 0.9 * v / peak;
        }
        io::write_file_atomic(a.out, io::encode_wav16(y, a.rate));
    } else {
        io::write_file_atomic(a.out, io::series_to_csv(y));
    }
    out << "samples," << y.size() << "\n";
}

struct WaveguideArgs {
    std::size_t length = 8;
    std::size_t to = 0;
    std::string left = "dirichlet";
    std::string right = "dirichlet";
};

inline void run_waveguide(const WaveguideArgs& a, std::ostream& out) {
    const auto l = parse_boundary(a.left);
    const auto r = parse_boundary(a.right);
    const std::size_t last = a.to ? a.to : a.length;
    if (last < a.length) throw Error(ErrorCode::InvalidArgument, "--to must be >= --length");
    std::string text = "L,left,right,period\n";
    for (std::size_t L = a.length; L <= last; ++L)
        text += std::to_string(L) + "," + std::string(to_string(l)) + "," + std::string(to_string(r)) + "," +
                std::to_string(waveguide_recurrence_period(L, l, r)) + "\n";
    out << text;
}

struct ImageSourceArgs {
    std::vector<double> room;
    std::vector<double> source;
    std::vector<double> listener;
    int order = 1;
    std::string out;
};

inline void run_imagesource(const ImageSourceArgs& a, std::ostream& out) {
    const Room2D room(a.room[0], a.room[1], {a.source[0], a.source[1]}, {a.listener[0], a.listener[1]});
    std::string text = "x,y,order,distance\n";
    for (const ImageSource& im : image_sources(room, a.order))
        text += io::format_double(im.position.x) + "," + io::format_double(im.position.y) + "," +
                std::to_string(im.order) + "," + io::format_double(im.distance) + "\n";
    emit(a.out, text, out);
}

struct TorusArgs {
    int p = 1;
    int q = 0;
    std::size_t n = 64;
    double major = 2.0;
    double minor = 1.0;
    bool normalize = false;
    bool closed_simple = false;
    std::string out;
};

inline void run_toruspath(const TorusArgs& a, std::ostream& out) {
    const TorusPath path = torus_winding_path(a.p, a.q, a.n, a.major, a.minor, a.closed_simple);
    const TimeSeries s = path_distance_series(path, a.normalize);
    std::string text = "index,value\n";
    for (std::size_t k = 0; k < s.size(); ++k) text += std::to_string(k) + "," + io::format_double(s[k]) + "\n";
    emit(a.out, text, out);
}

} // namespace detail

inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Computational topology for signals and sound"};
    app.require_subcommand(1, 1);
    app.set_help_all_flag("--help-all", "Show help for every subcommand");

    detail::HomologyArgs ha;
    auto* homology = app.add_subcommand("homology", "Betti numbers of a .cplx file or a built-in complex");
    homology->add_option("file", ha.file, "Complex file: one simplex per line, labels separated by spaces");
    homology->add_option("--demo", ha.demo, "triangle, triangle-filled, tetra, tetra-hollow, sphere, ball, torus");
    homology->add_option("--max-dim", ha.max_dim, "Highest dimension reported (default: top dimension)")
        ->check(CLI::NonNegativeNumber);

    detail::PersistArgs pa;
    auto* persist = app.add_subcommand(
        "persist", "Vietoris-Rips barcode. Scale is pairwise distance: a simplex enters at its diameter");
    persist->add_option("cloud", pa.cloud, "Point-cloud CSV, one point per row");
    persist->add_option("--demo", pa.demo, "noisy-circle or figure-eight");
    persist->add_option("--max-dim", pa.max_dim, "Largest simplex dimension built")->check(CLI::Range(0, 8));
    persist->add_option("--max-scale", pa.max_scale, "Largest diameter included")->check(CLI::PositiveNumber);
    persist->add_option("--out", pa.out, "Write the .bars CSV here and print counts");
    persist->add_option("--seed", pa.seed, "Demo noise seed");
    persist->add_option("--threads", pa.threads, "Threads for the distance matrix")->check(CLI::Range(1u, 256u));
    persist->add_option("--points", pa.points, "Demo point count (figure-eight splits it over two loops)");
    persist->add_option("--radius", pa.radius, "Demo circle radius")->check(CLI::PositiveNumber);
    persist->add_option("--noise", pa.noise, "Demo jitter bound")->check(CLI::NonNegativeNumber);

    detail::EmbedArgs ea;
    auto* embed = app.add_subcommand(
        "embed", "Delay embedding; prints the degeneracy score (below 1e-6 counts as degenerate)");
    embed->add_option("input", ea.input, "Time-series CSV")->required();
    embed->add_option("--dim", ea.dim, "Embedding dimension (>= 2)");
    embed->add_option("--delay", ea.delay, "Delay in samples (>= 1)")->required();
    embed->add_option("--out", ea.out, "Write the embedded point cloud here");

    detail::SynthArgs sa;
    auto* synth = app.add_subcommand("synth", "Render a filter (.filt) or a plain phase oscillator");
    synth->add_option("--config", sa.config,
                      ".filt file of key=value lines. kind=lti: a, b, state. kind=fm: omega, index, mod, phase, state");
    synth->add_flag("--osc", sa.osc, "Plain oscillator x <- x + omega mod 1");
    synth->add_option("--omega", sa.omega, "Oscillator phase increment per sample");
    synth->add_option("--x0", sa.x0, "Oscillator initial phase");
    synth->add_option("--projection", sa.projection, "sine, sawtooth or fold");
    synth->add_option("--amplitude", sa.amplitude, "Sine projection amplitude");
    synth->add_option("--phase-offset", sa.phase_offset, "Sine projection offset in radians");
    synth->add_option("--input", sa.input, "Input series CSV for filters");
    synth->add_option("--count", sa.count, "Samples to render (default: input length)");
    synth->add_option("--rate", sa.rate, "WAV sample rate");
    synth->add_option("--out", sa.out, "Output .wav (16-bit mono) or .csv")->required();
    synth->add_flag("--no-normalize", sa.no_normalize, "Skip peak normalization to 0.9 for WAV");

    detail::WaveguideArgs wa;
    auto* waveguide = app.add_subcommand("waveguide", "Recurrence period of a two-rail waveguide");
    waveguide->add_option("--length", wa.length, "Cells per rail (>= 2)")->check(CLI::Range(std::size_t{2}, std::size_t{1} << 20));
    waveguide->add_option("--to", wa.to, "Report every length up to this one");
    waveguide->add_option("--left", wa.left, "dirichlet or neumann");
    waveguide->add_option("--right", wa.right, "dirichlet or neumann");

    detail::ImageSourceArgs ia;
    auto* imagesource = app.add_subcommand("imagesource", "Image sources of a rectangular room");
    imagesource->add_option("--room", ia.room, "Width,height")->required()->delimiter(',')->expected(2);
    imagesource->add_option("--source", ia.source, "x,y")->required()->delimiter(',')->expected(2);
    imagesource->add_option("--listener", ia.listener, "x,y")->required()->delimiter(',')->expected(2);
    imagesource->add_option("--order", ia.order, "Maximum reflection order")->check(CLI::Range(0, 64));
    imagesource->add_option("--out", ia.out, "Write the CSV here");

    detail::TorusArgs ta;
    auto* toruspath = app.add_subcommand("toruspath", "Chord-length series of a (p,q) winding path on a torus");
    toruspath->add_option("--p", ta.p, "Turns around the central axis");
    toruspath->add_option("--q", ta.q, "Turns through the hole");
    toruspath->add_option("--n", ta.n, "Samples (>= 3)");
    toruspath->add_option("--R", ta.major, "Major radius");
    toruspath->add_option("--r", ta.minor, "Minor radius");
    toruspath->add_flag("--normalize", ta.normalize, "Zero mean, unit peak");
    toruspath->add_flag("--closed-simple", ta.closed_simple, "Reject (p,q) with gcd != 1");
    toruspath->add_option("--out", ta.out, "Write the CSV here");

    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitInput;
    }

    try {
        if (homology->parsed()) detail::run_homology(ha, out);
        else if (persist->parsed()) detail::run_persist(pa, out);
        else if (embed->parsed()) detail::run_embed(ea, out);
        else if (synth->parsed()) detail::run_synth(sa, out);
        else if (waveguide->parsed()) detail::run_waveguide(wa, out);
        else if (imagesource->parsed()) detail::run_imagesource(ia, out);
        else if (toruspath->parsed()) detail::run_toruspath(ta, out);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
    return kExitOk;
}

} // namespace topo::cli
