// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria (capped at 1).

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <deque>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "cli.hpp"
#include "test_support.hpp"
#include "topo/topo.hpp"

using namespace topo;
namespace fs = std::filesystem;

namespace {

// Tolerances and limits, all in one place.
constexpr double kHomologyDemoSeconds = 1.0;
constexpr double kLemmaSeconds = 10.0;
constexpr double kOracleSeconds = 60.0;
constexpr double kBarTolerance = 1e-12;
constexpr double kDemoSeconds = 10.0;
constexpr double kDominanceRatio = 5.0;
constexpr double kCircleScore = 0.9;
constexpr double kDegenerateScore = 1e-6;
constexpr double kFlatPersistenceFraction = 0.05;
constexpr double kEmbedSeconds = 10.0;
constexpr double kAliasTolerance = 1e-12;
constexpr double kLtiTolerance = 1e-12;
constexpr double kTorusTolerance = 1e-12;

struct Verdict {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& why) {
        if (!ok && pass) {
            pass = false;
            detail = why;
        }
    }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct CliResult {
    int code;
    std::string out;
};

CliResult cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run(std::move(args), out, err);
    return {code, out.str() + err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string fmt(double v) { return io::format_double(v); }

// ---------------------------------------------------------------------------

Verdict betti_reproduction() {
    Verdict v;
    const std::vector<std::pair<std::string, std::vector<std::size_t>>> cases = {
        {"sphere", {1, 0, 1}}, {"ball", {1, 0, 0}}, {"torus", {1, 2, 1}},
        {"triangle", {1, 1}},  {"triangle-filled", {1, 0}},
    };
    for (const auto& [name, expected] : cases) {
        const auto t0 = Clock::now();
        const auto r = cli({"homology", "--demo", name});
        const double dt = seconds_since(t0);
        v.require(r.code == 0, name + ": exit " + std::to_string(r.code));
        std::istringstream in(r.out);
        std::string line;
        std::getline(in, line);
        std::vector<std::size_t> got;
        while (std::getline(in, line) && line.rfind("H_", 0) != 0)
            got.push_back(std::stoul(line.substr(line.find(',') + 1)));
        // The CLI reports every dimension up to the top one; entries past the
        // listed vector must be zero.
        bool ok = got.size() >= expected.size() && std::equal(expected.begin(), expected.end(), got.begin());
        for (std::size_t k = expected.size(); k < got.size(); ++k) ok = ok && got[k] == 0;
        v.require(ok, name + ": wrong Betti vector");
        v.require(dt < kHomologyDemoSeconds, name + ": took " + fmt(dt) + " s");
    }
    return v;
}

Verdict boundary_fidelity() {
    Verdict v;
    const auto hollow = SimplicialComplex::close({{0, 1}, {1, 2}, {0, 2}});
    // Columns e0={0,1}, e1={1,2}, e2={0,2}; rows v0, v1, v2.
    const std::vector<Simplex> labelled = {make_simplex({0, 1}), make_simplex({1, 2}), make_simplex({0, 2})};
    const int d1_expected[3][3] = {{1, 0, 1}, {1, 1, 0}, {0, 1, 1}};
    const auto d1 = boundary_gf2(hollow, 1);
    v.require(d1.rows() == 3 && d1.cols() == 3, "d1 shape");
    for (std::size_t e = 0; e < 3; ++e)
        for (std::size_t r = 0; r < 3; ++r)
            v.require(d1.get(r, *hollow.ordinal(labelled[e])) == (d1_expected[r][e] == 1), "d1 entry differs");
    v.require(boundary_gf2(hollow, 2).cols() == 0, "hollow triangle has a d2 column");

    const auto filled = SimplicialComplex::close({{0, 1, 2}});
    v.require(boundary_gf2(filled, 2) == BitMatrix::from_rows({{1}, {1}, {1}}), "filled d2 differs");
    v.require(boundary_gf2(filled, 1) == d1, "filled d1 differs from hollow d1");

    // Arrows around the loop 0->1->2->0: {0,2} runs against its stored direction.
    const auto od1 = boundary_oriented(hollow, 1);
    const int sign[3] = {1, 1, -1};
    for (std::size_t r = 0; r < 3; ++r) {
        std::int64_t loop = 0;
        for (std::size_t e = 0; e < 3; ++e) loop += sign[e] * od1(r, *hollow.ordinal(labelled[e]));
        v.require(loop == 0, "oriented loop does not sum to zero");
    }
    for (std::size_t c = 0; c < 3; ++c) {
        std::int64_t col = 0, abs = 0;
        for (std::size_t r = 0; r < 3; ++r) {
            col += od1(r, c);
            abs += std::abs(od1(r, c));
        }
        v.require(col == 0 && abs == 2, "oriented column is not tip minus base");
    }
    return v;
}

Verdict fundamental_lemma() {
    Verdict v;
    const auto t0 = Clock::now();
    std::mt19937_64 rng(20240601);
    std::size_t checks = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const auto c = fixtures::random_complex(rng, 10, 3);
        for (int n = 1; n <= c.max_dimension(); ++n) {
            v.require(check_fundamental_lemma(c, n, Coefficients::gf2), "gf2 product nonzero");
            v.require(check_fundamental_lemma(c, n, Coefficients::oriented), "oriented product nonzero");
            checks += 2;
        }
    }
    const double dt = seconds_since(t0);
    v.require(dt < kLemmaSeconds, "took " + fmt(dt) + " s");
    if (v.pass) v.detail = std::to_string(checks) + " products, " + fmt(std::round(dt * 1000) / 1000) + " s";
    return v;
}

Verdict persistence_oracle() {
    Verdict v;
    const auto t0 = Clock::now();
    std::mt19937_64 rng(424242);
    std::uniform_int_distribution<std::size_t> npts(1, 10);
    std::size_t comparisons = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const PointCloud pc(fixtures::random_points(rng, npts(rng), 2));
        const auto f = vietoris_rips(pc, 2, 10.0);
        const auto code = persistence_pairs(f);
        std::set<double> critical;
        for (const auto& e : f.entries()) critical.insert(e.value);
        for (double t : critical) {
            const auto sub = SimplicialComplex::close(f.sublevel(t));
            for (int n : {0, 1}) {
                v.require(alive_at(code, n, t) == betti(sub, n),
                          "trial " + std::to_string(trial) + " n=" + std::to_string(n) + " t=" + fmt(t));
                ++comparisons;
            }
        }
    }
    const double dt = seconds_since(t0);
    v.require(dt < kOracleSeconds, "took " + fmt(dt) + " s");
    if (v.pass) v.detail = std::to_string(comparisons) + " comparisons";
    return v;
}

Verdict unit_square() {
    Verdict v;
    const auto code = persistent_homology(PointCloud({{0, 0}, {1, 0}, {1, 1}, {0, 1}}), 2, 2.0);
    const auto h1 = code.of_dim(1);
    v.require(h1.size() == 1, std::to_string(h1.size()) + " H1 bars");
    if (h1.size() == 1) {
        v.require(std::fabs(h1[0].birth - 1.0) <= kBarTolerance, "birth " + fmt(h1[0].birth));
        v.require(std::fabs(h1[0].death - std::sqrt(2.0)) <= kBarTolerance, "death " + fmt(h1[0].death));
        if (v.pass) v.detail = "[" + fmt(h1[0].birth) + ", " + fmt(h1[0].death) + ")";
    }
    return v;
}

// Ratio of the k-th longest H1 bar to the (k+1)-th; infinite when there is none.
double dominance(const Barcode& code, std::size_t k) {
    const auto h1 = code.lengths(1);
    if (h1.size() < k) return 0.0;
    if (h1.size() == k) return kInfinity;
    return h1[k - 1] / h1[k];
}

Verdict noisy_circle() {
    Verdict v;
    const auto t0 = Clock::now();
    const auto circle_cloud = noisy_circle_demo(100, 1.0, 0.05, 7);
    const auto circle = persistent_homology(circle_cloud, 2, 2.0);
    const auto again = persistent_homology(noisy_circle_demo(100, 1.0, 0.05, 7), 2, 2.0);
    const auto eight = persistent_homology(figure_eight_demo(50, 1.0, 0.05, 7), 2, 2.0);
    const double dt = seconds_since(t0);
    const double r1 = dominance(circle, 1);
    const double r2 = dominance(eight, 2);
    v.require(circle.to_csv() == again.to_csv(), "circle barcode not deterministic");
    v.require(r1 >= kDominanceRatio, "circle ratio " + fmt(r1));
    v.require(r2 >= kDominanceRatio, "figure-eight ratio " + fmt(r2));
    v.require(dt < kDemoSeconds, "took " + fmt(dt) + " s");
    if (v.pass)
        v.detail = "circle ratio " + fmt(std::round(r1 * 10) / 10) + ", figure-eight ratio " +
                   fmt(std::round(r2 * 10) / 10) + ", " + fmt(std::round(dt * 100) / 100) + " s";
    return v;
}

Verdict embedding_contrast() {
    Verdict v;
    const auto t0 = Clock::now();
    // Period 40: a quarter period is 10 samples, half is 20; 40 distinct points each.
    const auto quarter = delay_embed(sine_series(50, 40.0), 2, 10);
    const auto half = delay_embed(sine_series(60, 40.0), 2, 20);
    const double sq = degeneracy_score(quarter);
    const double sh = degeneracy_score(half);
    const auto bq = persistent_homology(quarter, 2, 2.0);
    const auto bh = persistent_homology(half, 2, 2.0);
    const double dt = seconds_since(t0);
    const auto lq = bq.lengths(1);
    const auto lh = bh.lengths(1);
    v.require(sq > kCircleScore, "quarter score " + fmt(sq));
    v.require(sh < kDegenerateScore, "half score " + fmt(sh));
    v.require(!lq.empty() && dominance(bq, 1) >= kDominanceRatio, "quarter has no dominant H1 bar");
    const double max_half = lh.empty() ? 0.0 : lh[0];
    v.require(!lq.empty() && max_half < kFlatPersistenceFraction * lq[0], "half H1 persistence " + fmt(max_half));
    v.require(dt < kEmbedSeconds, "took " + fmt(dt) + " s");
    if (v.pass) v.detail = "scores " + fmt(sq) + " / " + fmt(sh);
    return v;
}

Verdict oscillator_identities() {
    Verdict v;
    const auto y = oscillate(PhaseFunction::constant(0.25), Projection::sine(), Phase(0.0), 1000);
    const double cycle[4] = {0.0, 1.0, 0.0, -1.0};
    for (std::size_t n = 0; n < y.size(); ++n) v.require(y[n] == cycle[n % 4], "quarter cycle differs at " + std::to_string(n));

    std::mt19937_64 rng(8080);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0;
    for (int k = 0; k < 20; ++k) {
        const double omega = u(rng);
        const auto a = oscillate(PhaseFunction::constant(omega), Projection::sine(), Phase(0.0), 1000);
        const auto b = oscillate(PhaseFunction::constant(1.0 - omega), Projection::sine(), Phase(0.0), 1000);
        for (std::size_t n = 0; n < 1000; ++n) worst = std::max(worst, std::fabs(a[n] + b[n]));
    }
    v.require(worst <= kAliasTolerance, "aliasing error " + fmt(worst));

    const PhaseFunction adversarial[] = {
        PhaseFunction::constant(std::nextafter(1.0, 0.0)),
        PhaseFunction::constant(-std::numeric_limits<double>::denorm_min()),
        PhaseFunction::affine_sine(1.0, 0.999999999999, 0.0),
        PhaseFunction::affine_sine(-3.0, 0.1, 0.0),
        PhaseFunction::affine_sine(1.0, 0.3, 5.0),
        PhaseFunction::affine_sine(1e9, 1e-17, 1e6),
    };
    for (const auto& f : adversarial) {
        Phase x(0.123456789);
        for (int n = 0; n < 1'000'000; ++n) {
            x = step_phase(f, x);
            if (!(x.value() >= 0.0 && x.value() < 1.0)) {
                v.require(false, "phase left [0,1)");
                break;
            }
        }
    }
    if (v.pass) v.detail = "max aliasing error " + fmt(worst);
    return v;
}

std::vector<double> stable_denominator(std::mt19937_64& rng, std::size_t order) {
    std::uniform_real_distribution<double> radius(0.0, 0.9), angle(0.0, std::numbers::pi), real(-0.9, 0.9);
    std::vector<std::complex<double>> poles;
    while (poles.size() < order) {
        if (order - poles.size() >= 2 && rng() % 2) {
            const auto p = std::polar(radius(rng), angle(rng));
            poles.push_back(p);
            poles.push_back(std::conj(p));
        } else {
            poles.push_back(real(rng));
        }
    }
    std::vector<std::complex<double>> c{1.0};
    for (const auto& p : poles) {
        std::vector<std::complex<double>> next(c.size() + 1, 0.0);
        for (std::size_t k = 0; k < c.size(); ++k) {
            next[k] += c[k];
            next[k + 1] -= p * c[k];
        }
        c = std::move(next);
    }
    std::vector<double> a;
    for (std::size_t k = 1; k < c.size(); ++k) a.push_back(c[k].real());
    return a;
}

// Applies `visit(ref)` to each scalar cell of a section.
void for_each_cell(Section& s, const std::function<void(double&)>& visit) {
    for (double& x : s.initial_state) visit(x);
    for (auto& vs : s.vertex_states)
        for (double& x : vs) visit(x);
    for (auto& es : s.edge_states)
        for (double& x : es) visit(x);
    for (double& x : s.inputs) visit(x);
    for (double& x : s.outputs) visit(x);
}

Verdict sheaf_lti() {
    Verdict v;
    std::mt19937_64 rng(5150);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::uniform_int_distribution<std::size_t> pick_order(1, 6);
    double worst = 0;
    std::size_t corruptions = 0;
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t order = pick_order(rng);
        const auto a = stable_denominator(rng, order);
        std::vector<double> b(order + 1);
        for (double& x : b) x = u(rng);
        std::vector<double> xs(10000);
        for (double& x : xs) x = u(rng);
        const TimeSeries input(xs);
        const auto f = lti_filter(a, b);
        auto res = propagate(f, input);
        const auto ref = difference_equation(a, b, xs);
        for (std::size_t n = 0; n < xs.size(); ++n) worst = std::max(worst, std::fabs(res.output[n] - ref[n]));
        v.require(verify_section(f, res.section, input).ok, "trial " + std::to_string(trial) + ": section rejected");

        // Every cell of a 200-sample section, plus 200 random cells of the full one.
        const TimeSeries prefix(std::vector<double>(xs.begin(), xs.begin() + 200));
        auto short_sec = propagate(f, prefix).section;
        for_each_cell(short_sec, [&](double& cell) {
            const double keep = cell;
            cell += 1e-3;
            v.require(!verify_section(f, short_sec, prefix).ok, "trial " + std::to_string(trial) + ": corruption accepted");
            cell = keep;
            ++corruptions;
        });
        std::vector<double*> cells;
        for_each_cell(res.section, [&](double& cell) { cells.push_back(&cell); });
        std::uniform_int_distribution<std::size_t> pick(0, cells.size() - 1);
        for (int k = 0; k < 200; ++k) {
            double* cell = cells[pick(rng)];
            const double keep = *cell;
            *cell += 1e-3;
            v.require(!verify_section(f, res.section, input).ok, "trial " + std::to_string(trial) + ": corruption accepted");
            *cell = keep;
            ++corruptions;
        }
    }
    v.require(worst <= kLtiTolerance, "max deviation " + fmt(worst));
    if (v.pass) v.detail = "max deviation " + fmt(worst) + ", " + std::to_string(corruptions) + " corruptions rejected";
    return v;
}

Verdict fm_reduction() {
    Verdict v;
    const double omega = 0.0123456789;
    const auto fm = propagate(fm_filter(omega, 0.0, 0.071, 0.0), TimeSeries(std::vector<double>(10000, 0.0))).output;
    const auto osc = oscillate(PhaseFunction::constant(omega), Projection::sine(), Phase(0.0), 10000);
    for (std::size_t n = 0; n < 10000; ++n)
        if (fm[n] != osc[n]) {
            v.require(false, "differs at sample " + std::to_string(n));
            break;
        }
    return v;
}

Verdict period_doubling() {
    Verdict v;
    using BC = BoundaryCondition;
    for (std::size_t L = 2; L <= 64; ++L) {
        const auto d = waveguide_recurrence_period(L, BC::dirichlet, BC::dirichlet);
        const auto n = waveguide_recurrence_period(L, BC::neumann, BC::neumann);
        const auto m = waveguide_recurrence_period(L, BC::dirichlet, BC::neumann);
        const auto m2 = waveguide_recurrence_period(L, BC::neumann, BC::dirichlet);
        v.require(m == 2 * d && m == 2 * n && m2 == m, "L=" + std::to_string(L));
        for (auto [l, r] : {std::pair{BC::dirichlet, BC::neumann}, std::pair{BC::dirichlet, BC::dirichlet}}) {
            WaveguideState s(L);
            s.right[0] = 1.0;
            s.left[L - 1] = -1.0;
            const double e0 = s.energy();
            for (std::size_t t = 0; t < 4 * L; ++t) {
                s.step(l, r);
                if (s.energy() != e0) {
                    v.require(false, "energy drift at L=" + std::to_string(L));
                    break;
                }
            }
        }
    }
    return v;
}

std::multiset<std::tuple<double, double, int>> mirroring_oracle(const Room2D& room, int max_order) {
    std::map<std::pair<long, long>, std::tuple<double, double, int>> seen;
    std::deque<std::tuple<long, long, Point2, int>> queue{{0, 0, room.source, 0}};
    seen[{0, 0}] = {room.source.x, room.source.y, 0};
    while (!queue.empty()) {
        auto [i, j, p, depth] = queue.front();
        queue.pop_front();
        if (depth == max_order) continue;
        const double x0 = static_cast<double>(i) * room.lx, x1 = static_cast<double>(i + 1) * room.lx;
        const double y0 = static_cast<double>(j) * room.ly, y1 = static_cast<double>(j + 1) * room.ly;
        const std::tuple<long, long, Point2> next[] = {
            {i - 1, j, {2 * x0 - p.x, p.y}}, {i + 1, j, {2 * x1 - p.x, p.y}},
            {i, j - 1, {p.x, 2 * y0 - p.y}}, {i, j + 1, {p.x, 2 * y1 - p.y}},
        };
        for (const auto& [ni, nj, np] : next)
            if (seen.emplace(std::pair{ni, nj}, std::tuple{np.x, np.y, depth + 1}).second)
                queue.emplace_back(ni, nj, np, depth + 1);
    }
    std::multiset<std::tuple<double, double, int>> out;
    for (const auto& [tile, im] : seen) out.insert(im);
    return out;
}

Verdict image_sources_oracle() {
    Verdict v;
    std::mt19937_64 rng(1234567);
    std::uniform_int_distribution<int> side(2, 40);
    for (int trial = 0; trial < 20; ++trial) {
        // Dyadic geometry keeps every mirror exact.
        const int w = side(rng), h = side(rng);
        auto inside = [&](int s) { return std::uniform_int_distribution<int>(1, s - 1)(rng) / 8.0; };
        const Room2D room(w / 8.0, h / 8.0, {inside(w), inside(h)}, {inside(w), inside(h)});
        for (int k = 0; k <= 3; ++k) {
            std::multiset<std::tuple<double, double, int>> got;
            for (const auto& im : image_sources(room, k)) got.insert({im.position.x, im.position.y, im.order});
            v.require(got == mirroring_oracle(room, k), "room " + std::to_string(trial) + " K=" + std::to_string(k));
        }
    }
    const auto center = image_sources(Room2D(1, 1, {0.5, 0.5}, {0.5, 0.5}), 1);
    std::size_t unit = 0;
    for (const auto& im : center) unit += im.order == 1 && im.distance == 1.0;
    v.require(unit == 4 && center.size() == 5, "unit square K=1 gave " + std::to_string(unit) + " images at distance 1");
    return v;
}

Verdict torus_path() {
    Verdict v;
    double worst = 0;
    for (int p = 0; p <= 7; ++p)
        for (int q = 0; q <= 7; ++q) {
            if (std::gcd(p, q) != 1) continue;
            for (std::size_t n : {16u, 97u, 1000u}) {
                const auto path = torus_winding_path(p, q, n, 2.0, 0.5, true);
                const auto end = path.at(static_cast<double>(n));
                const auto& s = path.points[0];
                worst = std::max(worst, std::hypot(end[0] - s[0], end[1] - s[1], end[2] - s[2]));
            }
        }
    v.require(worst <= kTorusTolerance, "closure error " + fmt(worst));
    for (auto [p, q] : {std::pair{1, 0}, std::pair{0, 1}}) {
        const auto s = path_distance_series(torus_winding_path(p, q, 256, 2.0, 0.5));
        const auto [lo, hi] = std::minmax_element(s.samples.begin(), s.samples.end());
        v.require(*hi - *lo <= kTorusTolerance, "(" + std::to_string(p) + "," + std::to_string(q) + ") spread " + fmt(*hi - *lo));
    }
    if (v.pass) v.detail = "max closure error " + fmt(worst);
    return v;
}

Verdict cli_determinism() {
    Verdict v;
    const fs::path dir = fs::temp_directory_path() / "topo_acceptance";
    fs::remove_all(dir);
    fs::create_directories(dir);
    for (const char* name : {"triangle", "triangle-filled", "tetra", "tetra-hollow", "torus", "sphere"}) {
        const auto a = cli({"homology", "--demo", name});
        const auto b = cli({"homology", "--demo", name});
        v.require(a.code == 0 && a.out == b.out, std::string("homology ") + name);
    }
    for (const char* name : {"noisy-circle", "figure-eight"}) {
        std::vector<std::string> outputs;
        for (const char* threads : {"1", "1", "3"}) {
            const fs::path out = dir / (std::string(name) + "_" + std::to_string(outputs.size()) + ".bars");
            const auto r = cli({"persist", "--demo", name, "--seed", "7", "--threads", threads, "--out", out.string()});
            v.require(r.code == 0, std::string("persist ") + name + " failed");
            outputs.push_back(r.out + slurp(out));
        }
        v.require(outputs[0] == outputs[1] && outputs[0] == outputs[2], std::string("persist ") + name + " differs");
    }
    fs::remove_all(dir);
    return v;
}

} // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
        {"betti reproduction", betti_reproduction},
        {"boundary matrix fidelity", boundary_fidelity},
        {"fundamental lemma", fundamental_lemma},
        {"persistence oracle equivalence", persistence_oracle},
        {"unit square barcode", unit_square},
        {"noisy circle and figure eight", noisy_circle},
        {"embedding degeneracy contrast", embedding_contrast},
        {"oscillator identities", oscillator_identities},
        {"sheaf LTI equivalence", sheaf_lti},
        {"FM reduction", fm_reduction},
        {"double cover period doubling", period_doubling},
        {"image source oracle", image_sources_oracle},
        {"torus path", torus_path},
        {"CLI determinism", cli_determinism},
    };
    int failed = 0;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        Verdict v;
        try {
            v = criteria[k].second();
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        failed += !v.pass;
        std::printf("%s %2zu %s%s%s\n", v.pass ? "PASS" : "FAIL", k + 1, criteria[k].first.c_str(),
                    v.detail.empty() ? "" : ": ", v.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria failed\n", failed, criteria.size());
    return failed ? 1 : 0;
}
