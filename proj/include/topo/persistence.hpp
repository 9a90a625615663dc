#pragma once

// Filtrations, Vietoris-Rips construction, and barcodes from GF(2) column
// reduction.
//
// Scale convention: a simplex enters at the largest pairwise Euclidean
// distance among its vertices (ball diameter, not radius).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

#include "topo/binlinalg.hpp"
#include "topo/complex.hpp"
#include "topo/io.hpp"

namespace topo {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Points of a common dimension d >= 1 with finite coordinates.
class PointCloud {
public:
    PointCloud() = default;

    explicit PointCloud(std::vector<std::vector<double>> points) : points_(std::move(points)) {
        if (points_.empty()) return;
        const std::size_t d = points_.front().size();
        if (d == 0) throw Error(ErrorCode::InvalidArgument, "points need at least one coordinate");
        for (const auto& p : points_) {
            if (p.size() != d) throw Error(ErrorCode::InvalidArgument, "points differ in dimension");
            for (double x : p)
                if (!std::isfinite(x)) throw Error(ErrorCode::InvalidArgument, "non-finite coordinate");
        }
    }

    std::size_t size() const noexcept { return points_.size(); }
    bool empty() const noexcept { return points_.empty(); }
    std::size_t dimension() const noexcept { return points_.empty() ? 0 : points_.front().size(); }
    const std::vector<double>& operator[](std::size_t i) const { return points_[i]; }
    const std::vector<std::vector<double>>& points() const noexcept { return points_; }

    double distance(std::size_t i, std::size_t j) const {
        double s = 0;
        for (std::size_t k = 0; k < dimension(); ++k) {
            const double d = points_[i][k] - points_[j][k];
            s += d * d;
        }
        return std::sqrt(s);
    }

    std::string to_csv() const {
        std::string out;
        for (const auto& p : points_) {
            for (std::size_t k = 0; k < p.size(); ++k) {
                if (k) out += ',';
                out += io::format_double(p[k]);
            }
            out += '\n';
        }
        return out;
    }

private:
    std::vector<std::vector<double>> points_;
};

struct FiltrationEntry {
    Simplex simplex;
    double value;
};

/// Canonical order: value, then dimension, then lexicographic vertices.
inline bool filtration_less(const FiltrationEntry& a, const FiltrationEntry& b) {
    if (a.value != b.value) return a.value < b.value;
    if (a.simplex.dimension() != b.simplex.dimension())
        return a.simplex.dimension() < b.simplex.dimension();
    return a.simplex < b.simplex;
}

/// Ordered simplex insertions. Construction does not validate; boundary_columns()
/// checks monotone values and faces-first order.
class Filtration {
public:
    Filtration() = default;
    explicit Filtration(std::vector<FiltrationEntry> entries) : entries_(std::move(entries)) {}

    /// Sorts arbitrary entries into canonical order.
    static Filtration canonical(std::vector<FiltrationEntry> entries) {
        std::sort(entries.begin(), entries.end(), filtration_less);
        return Filtration(std::move(entries));
    }

    const std::vector<FiltrationEntry>& entries() const noexcept { return entries_; }
    std::size_t size() const noexcept { return entries_.size(); }
    const FiltrationEntry& operator[](std::size_t i) const { return entries_[i]; }

    int max_dimension() const {
        int d = -1;
        for (const auto& e : entries_) d = std::max(d, e.simplex.dimension());
        return d;
    }

    /// Simplices with value <= t, as generators (already face-closed when valid).
    std::vector<Simplex> sublevel(double t) const {
        std::vector<Simplex> out;
        for (const auto& e : entries_)
            if (e.value <= t) out.push_back(e.simplex);
        return out;
    }

    /// Returns each entry's face ordinals, or throws InvalidFiltration.
    std::vector<SparseColumn> boundary_columns() const {
        std::unordered_map<Simplex, std::uint32_t, SimplexHash> index;
        index.reserve(entries_.size());
        std::vector<SparseColumn> cols(entries_.size());
        for (std::size_t j = 0; j < entries_.size(); ++j) {
            const auto& e = entries_[j];
            if (!std::isfinite(e.value))
                throw Error(ErrorCode::InvalidFiltration, "non-finite value at entry " + std::to_string(j));
            if (j > 0 && e.value < entries_[j - 1].value)
                throw Error(ErrorCode::InvalidFiltration, "values decrease at entry " + std::to_string(j));
            for (const Simplex& f : e.simplex.faces()) {
                const auto it = index.find(f);
                if (it == index.end())
                    throw Error(ErrorCode::InvalidFiltration,
                                "face " + f.to_string() + " of " + e.simplex.to_string() + " is not earlier");
                cols[j].push_back(it->second);
            }
            std::sort(cols[j].begin(), cols[j].end());
            if (!index.emplace(e.simplex, static_cast<std::uint32_t>(j)).second)
                throw Error(ErrorCode::InvalidFiltration, "duplicate simplex " + e.simplex.to_string());
        }
        return cols;
    }

private:
    std::vector<FiltrationEntry> entries_;
};

namespace detail {

/// Row-major pairwise distance matrix; rows are split across threads, each
/// entry is computed independently so the result does not depend on `threads`.
inline std::vector<double> distance_matrix(const PointCloud& pc, unsigned threads) {
    const std::size_t n = pc.size();
    std::vector<double> d(n * n, 0.0);
    auto fill = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (i != j) d[i * n + j] = pc.distance(std::min(i, j), std::max(i, j));
    };
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
    if (threads == 1) {
        fill(0, n);
        return d;
    }
    std::vector<std::thread> pool;
    const std::size_t chunk = (n + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
        const std::size_t b = t * chunk;
        const std::size_t e = std::min(n, b + chunk);
        if (b < e) pool.emplace_back(fill, b, e);
    }
    for (auto& th : pool) th.join();
    return d;
}

} // namespace detail

/// Vietoris-Rips filtration up to simplices of dimension max_dim with values <= max_scale.
inline Filtration vietoris_rips(const PointCloud& pc, int max_dim, double max_scale, unsigned threads = 1) {
    if (pc.empty()) throw Error(ErrorCode::EmptyInput, "empty point cloud");
    if (max_dim < 0) throw Error(ErrorCode::InvalidArgument, "max_dim must be >= 0");
    if (!(max_scale > 0)) throw Error(ErrorCode::InvalidArgument, "max_scale must be > 0");
    const std::size_t n = pc.size();
    const auto dist = detail::distance_matrix(pc, threads);

    std::vector<std::vector<VertexId>> higher(n); // neighbours with larger id
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (dist[i * n + j] <= max_scale) higher[i].push_back(static_cast<VertexId>(j));

    std::vector<FiltrationEntry> entries;
    std::vector<VertexId> current;
    // Extends `current` (a clique with diameter `value`) by candidates common to all members.
    auto extend = [&](auto&& self, const std::vector<VertexId>& candidates, double value) -> void {
        entries.push_back({Simplex::make(current), value});
        if (static_cast<int>(current.size()) > max_dim) return;
        for (std::size_t k = 0; k < candidates.size(); ++k) {
            const VertexId v = candidates[k];
            double next_value = value;
            for (VertexId u : current) next_value = std::max(next_value, dist[u * n + v]);
            std::vector<VertexId> next;
            for (std::size_t m = k + 1; m < candidates.size(); ++m)
                if (dist[v * n + candidates[m]] <= max_scale) next.push_back(candidates[m]);
            current.push_back(v);
            self(self, next, next_value);
            current.pop_back();
        }
    };
    for (std::size_t i = 0; i < n; ++i) {
        current = {static_cast<VertexId>(i)};
        extend(extend, higher[i], 0.0);
    }
    return Filtration::canonical(std::move(entries));
}

struct Bar {
    int dim;
    double birth;
    double death; // kInfinity for essential classes

    double persistence() const { return death - birth; }
    friend bool operator==(const Bar&, const Bar&) = default;
};

inline bool bar_less(const Bar& a, const Bar& b) {
    if (a.dim != b.dim) return a.dim < b.dim;
    if (a.birth != b.birth) return a.birth < b.birth;
    return a.death < b.death;
}

struct Barcode {
    std::vector<Bar> bars; // sorted by (dim, birth, death)
    int max_dim = 0;
    double max_scale = kInfinity;

    std::vector<Bar> of_dim(int n) const {
        std::vector<Bar> out;
        for (const Bar& b : bars)
            if (b.dim == n) out.push_back(b);
        return out;
    }

    /// Persistence values of dimension n, longest first.
    std::vector<double> lengths(int n) const {
        std::vector<double> out;
        for (const Bar& b : bars)
            if (b.dim == n) out.push_back(b.persistence());
        std::sort(out.begin(), out.end(), std::greater<>());
        return out;
    }

    /// The .bars CSV: header `dim,birth,death`, infinity as `inf`.
    std::string to_csv() const {
        std::string out = "dim,birth,death\n";
        for (const Bar& b : bars) {
            out += std::to_string(b.dim);
            out += ',';
            out += io::format_double(b.birth);
            out += ',';
            out += io::format_double(b.death);
            out += '\n';
        }
        return out;
    }
};

/// Pairs simplices by standard GF(2) reduction of the filtration-ordered
/// boundary matrix. Zero-length bars are dropped.
inline Barcode persistence_pairs(const Filtration& f) {
    std::vector<SparseColumn> cols = f.boundary_columns();
    const std::size_t n = cols.size();
    const int top = f.max_dimension();

    std::vector<std::vector<std::size_t>> by_dim(static_cast<std::size_t>(std::max(top, 0)) + 1);
    for (std::size_t j = 0; j < n; ++j) by_dim[static_cast<std::size_t>(f[j].simplex.dimension())].push_back(j);

    SparseColumnReducer reducer(std::move(cols), n);
    std::vector<bool> is_low(n, false);
    // Top dimension first: a simplex that is some column's low reduces to zero
    // itself, so its column is cleared instead of reduced.
    for (int d = top; d >= 1; --d) {
        for (std::size_t j : by_dim[static_cast<std::size_t>(d)]) {
            if (is_low[j]) {
                reducer.clear(j);
                continue;
            }
            if (auto l = reducer.reduce(j)) is_low[*l] = true;
        }
    }

    Barcode code;
    code.max_dim = top;
    for (std::size_t j = 0; j < n; ++j) {
        const auto& low = reducer.lows()[j];
        if (low) {
            const FiltrationEntry& born = f[*low];
            if (born.value < f[j].value)
                code.bars.push_back({born.simplex.dimension(), born.value, f[j].value});
        } else if (!is_low[j]) {
            code.bars.push_back({f[j].simplex.dimension(), f[j].value, kInfinity});
        }
    }
    std::sort(code.bars.begin(), code.bars.end(), bar_less);
    return code;
}

/// Bars of dimension n with birth <= t < death.
inline std::size_t alive_at(const Barcode& b, int n, double t) {
    return static_cast<std::size_t>(std::count_if(b.bars.begin(), b.bars.end(), [&](const Bar& bar) {
        return bar.dim == n && bar.birth <= t && t < bar.death;
    }));
}

inline Barcode persistent_homology(const PointCloud& pc, int max_dim, double max_scale, unsigned threads = 1) {
    Barcode code = persistence_pairs(vietoris_rips(pc, max_dim, max_scale, threads));
    code.max_dim = max_dim;
    code.max_scale = max_scale;
    return code;
}

namespace detail {

/// Uniform in [-1, 1) from the top 53 bits; independent of the standard
/// library's distribution implementations.
inline double symmetric_unit(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-52 - 1.0;
}

inline void circle_points(std::vector<std::vector<double>>& out, std::size_t n, double radius,
                          double cx, double cy, double angle0, double noise, std::mt19937_64& rng) {
    for (std::size_t k = 0; k < n; ++k) {
        const double tangential = noise * symmetric_unit(rng);
        const double radial = noise * symmetric_unit(rng);
        const double theta = angle0 + 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n) +
                             tangential / radius;
        const double r = radius + radial;
        out.push_back({cx + r * std::cos(theta), cy + r * std::sin(theta)});
    }
}

} // namespace detail

/// n equally spaced points on a circle about the origin, each jittered by
/// uniform radial and tangential offsets of at most `noise`.
inline PointCloud noisy_circle_demo(std::size_t n_points, double radius, double noise, std::uint64_t seed) {
    if (n_points < 8) throw Error(ErrorCode::InvalidArgument, "noisy circle needs at least 8 points");
    if (!(radius > 0)) throw Error(ErrorCode::InvalidArgument, "radius must be > 0");
    std::mt19937_64 rng(seed);
    std::vector<std::vector<double>> pts;
    detail::circle_points(pts, n_points, radius, 0.0, 0.0, 0.0, noise, rng);
    return PointCloud(std::move(pts));
}

/// Two noisy circles of the given radius centred at (-radius, 0) and
/// (radius, 0), touching at the origin; the second ring is offset by half a
/// step so no point is duplicated.
inline PointCloud figure_eight_demo(std::size_t points_per_loop, double radius, double noise, std::uint64_t seed) {
    if (points_per_loop < 8) throw Error(ErrorCode::InvalidArgument, "figure eight needs at least 8 points per loop");
    if (!(radius > 0)) throw Error(ErrorCode::InvalidArgument, "radius must be > 0");
    std::mt19937_64 rng(seed);
    std::vector<std::vector<double>> pts;
    const double half_step = std::numbers::pi / static_cast<double>(points_per_loop);
    detail::circle_points(pts, points_per_loop, radius, -radius, 0.0, 0.0, noise, rng);
    detail::circle_points(pts, points_per_loop, radius, radius, 0.0, std::numbers::pi + half_step, noise, rng);
    return PointCloud(std::move(pts));
}

} // namespace topo
