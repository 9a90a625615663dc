#pragma once

// Cover constructions applied to acoustics: a lossless two-rail waveguide with
// reflecting ends, image sources of a rectangular room (the tiling of the
// plane by mirrored rooms), and winding paths on a torus.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <string>
#include <string_view>
#include <vector>

#include "topo/dynamics.hpp"
#include "topo/embedding.hpp"
#include "topo/error.hpp"

namespace topo {

enum class BoundaryCondition { dirichlet, neumann };

inline double reflection(BoundaryCondition bc) { return bc == BoundaryCondition::dirichlet ? -1.0 : 1.0; }

inline std::string_view to_string(BoundaryCondition bc) {
    return bc == BoundaryCondition::dirichlet ? "dirichlet" : "neumann";
}

inline BoundaryCondition parse_boundary(std::string_view s) {
    if (s == "dirichlet") return BoundaryCondition::dirichlet;
    if (s == "neumann") return BoundaryCondition::neumann;
    throw Error(ErrorCode::InvalidArgument, "boundary must be dirichlet or neumann, got '" + std::string(s) + "'");
}

/// Two delay lines of L cells: `right` travels towards higher indices,
/// `left` towards lower. Each end feeds one rail into the other, scaled by the
/// end's reflection coefficient.
struct WaveguideState {
    std::vector<double> right;
    std::vector<double> left;

    explicit WaveguideState(std::size_t length) : right(length, 0.0), left(length, 0.0) {
        if (length < 1) throw Error(ErrorCode::InvalidArgument, "waveguide needs at least one cell");
    }

    std::size_t length() const noexcept { return right.size(); }

    double energy() const {
        double e = 0;
        for (double v : right) e += v * v;
        for (double v : left) e += v * v;
        return e;
    }

    void step(BoundaryCondition left_end, BoundaryCondition right_end) {
        const std::size_t n = length();
        const double into_left = reflection(right_end) * right[n - 1];
        const double into_right = reflection(left_end) * left[0];
        for (std::size_t k = n - 1; k > 0; --k) right[k] = right[k - 1];
        for (std::size_t k = 0; k + 1 < n; ++k) left[k] = left[k + 1];
        right[0] = into_right;
        left[n - 1] = into_left;
    }

    friend bool operator==(const WaveguideState&, const WaveguideState&) = default;
};

/// Smallest t > 0 at which a unit impulse at the left end of the right-going
/// rail returns to exactly the initial state.
inline std::size_t waveguide_recurrence_period(std::size_t length, BoundaryCondition left_end,
                                               BoundaryCondition right_end) {
    if (length < 2) throw Error(ErrorCode::InvalidArgument, "waveguide period needs L >= 2");
    WaveguideState initial(length);
    initial.right[0] = 1.0;
    WaveguideState state = initial;
    // Every configuration recurs within 4L steps (two round trips).
    for (std::size_t t = 1; t <= 4 * length; ++t) {
        state.step(left_end, right_end);
        if (state == initial) return t;
    }
    throw Error(ErrorCode::InvalidArgument, "waveguide did not recur");
}

struct Point2 {
    double x = 0;
    double y = 0;
    friend auto operator<=>(const Point2&, const Point2&) = default;
};

inline double distance(Point2 a, Point2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

/// Rectangular room [0,Lx] x [0,Ly] with source and listener strictly inside.
struct Room2D {
    double lx;
    double ly;
    Point2 source;
    Point2 listener;

    Room2D(double width, double height, Point2 src, Point2 lst) : lx(width), ly(height), source(src), listener(lst) {
        if (!(lx > 0 && ly > 0)) throw Error(ErrorCode::InvalidArgument, "room sides must be > 0");
        auto inside = [&](Point2 p) { return p.x > 0 && p.x < lx && p.y > 0 && p.y < ly; };
        if (!inside(source)) throw Error(ErrorCode::InvalidArgument, "source must lie strictly inside the room");
        if (!inside(listener)) throw Error(ErrorCode::InvalidArgument, "listener must lie strictly inside the room");
    }
};

struct ImageSource {
    Point2 position;
    int order;       // number of wall bounces
    double distance; // to the listener
};

/// Mirror image coordinate along one axis for tile index i: even tiles are
/// translated copies, odd tiles are mirrored. |i| is the bounce count.
inline double image_coordinate(long i, double side, double s) {
    return (i % 2 == 0) ? static_cast<double>(i) * side + s : static_cast<double>(i + 1) * side - s;
}

/// All image sources with reflection order <= max_order, sorted by distance to
/// the listener, then by position.
inline std::vector<ImageSource> image_sources(const Room2D& room, int max_order) {
    if (max_order < 0) throw Error(ErrorCode::InvalidArgument, "max order must be >= 0");
    std::vector<ImageSource> out;
    for (long i = -max_order; i <= max_order; ++i) {
        const long rest = max_order - std::labs(i);
        for (long j = -rest; j <= rest; ++j) {
            const Point2 p{image_coordinate(i, room.lx, room.source.x), image_coordinate(j, room.ly, room.source.y)};
            out.push_back({p, static_cast<int>(std::labs(i) + std::labs(j)), distance(p, room.listener)});
        }
    }
    std::sort(out.begin(), out.end(), [](const ImageSource& a, const ImageSource& b) {
        if (a.distance != b.distance) return a.distance < b.distance;
        return a.position < b.position;
    });
    return out;
}

/// Closed (p, q) winding path sampled at N points on the torus of major radius
/// R and minor radius r.
struct TorusPath {
    int p;
    int q;
    std::size_t samples;
    double major_radius;
    double minor_radius;
    std::vector<std::array<double, 3>> points;
    bool simple; // gcd(p, q) == 1

    /// Position at (possibly non-integer or out-of-range) step k.
    std::array<double, 3> at(double k) const {
        const double u = kTwoPi * p * k / static_cast<double>(samples);
        const double v = kTwoPi * q * k / static_cast<double>(samples);
        const double ring = major_radius + minor_radius * std::cos(v);
        return {ring * std::cos(u), ring * std::sin(u), minor_radius * std::sin(v)};
    }
};

inline TorusPath torus_winding_path(int p, int q, std::size_t n, double major_radius, double minor_radius,
                                    bool require_simple = false) {
    if (n < 3) throw Error(ErrorCode::InvalidArgument, "torus path needs N >= 3");
    if (!(major_radius > minor_radius && minor_radius > 0))
        throw Error(ErrorCode::InvalidArgument, "torus radii need R > r > 0");
    if (p == 0 && q == 0) throw Error(ErrorCode::InvalidArgument, "winding numbers (0,0) do not wind");
    const bool simple = std::gcd(p, q) == 1;
    if (require_simple && !simple)
        throw Error(ErrorCode::NotSimpleLoop,
                    "gcd(" + std::to_string(p) + "," + std::to_string(q) + ") != 1 gives a multiply traced loop");
    TorusPath path{p, q, n, major_radius, minor_radius, {}, simple};
    path.points.reserve(n);
    for (std::size_t k = 0; k < n; ++k) path.points.push_back(path.at(static_cast<double>(k)));
    return path;
}

/// Chord lengths between consecutive points, wrapping from the last point to
/// the first. When `normalize` is set the series is shifted to zero mean and
/// scaled to unit peak; a series flat to 1e-12 (relative) becomes all zeros.
inline TimeSeries path_distance_series(const TorusPath& path, bool normalize = false) {
    const std::size_t n = path.points.size();
    if (n < 2) throw Error(ErrorCode::InvalidArgument, "distance series needs at least 2 points");
    std::vector<double> d(n);
    for (std::size_t k = 0; k < n; ++k) {
        const auto& a = path.points[k];
        const auto& b = path.points[(k + 1) % n];
        d[k] = std::sqrt((a[0] - b[0]) * (a[0] - b[0]) + (a[1] - b[1]) * (a[1] - b[1]) + (a[2] - b[2]) * (a[2] - b[2]));
    }
    if (normalize) {
        const double mean = std::accumulate(d.begin(), d.end(), 0.0) / static_cast<double>(n);
        double peak = 0;
        for (double& v : d) {
            v -= mean;
            peak = std::max(peak, std::fabs(v));
        }
        const bool flat = peak <= 1e-12 * std::max(1.0, std::fabs(mean));
        for (double& v : d) v = flat ? 0.0 : v / peak;
    }
    return TimeSeries(std::move(d));
}

} // namespace topo
