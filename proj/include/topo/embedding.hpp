#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "topo/error.hpp"
#include "topo/persistence.hpp"

namespace topo {

/// Sampled signal; sample_rate is in samples per second.
struct TimeSeries {
    std::vector<double> samples;
    double sample_rate = 1.0;

    TimeSeries() = default;
    explicit TimeSeries(std::vector<double> s, double rate = 1.0) : samples(std::move(s)), sample_rate(rate) {
        for (double v : samples)
            if (!std::isfinite(v)) throw Error(ErrorCode::InvalidArgument, "non-finite sample");
    }

    std::size_t size() const noexcept { return samples.size(); }
    double operator[](std::size_t i) const { return samples[i]; }
};

/// Point i is (s[i], s[i+d], ..., s[i+(dim-1)d]).
inline PointCloud delay_embed(const TimeSeries& ts, std::size_t dim, std::size_t delay) {
    if (dim < 2) throw Error(ErrorCode::InvalidArgument, "embedding dimension must be >= 2");
    if (delay < 1) throw Error(ErrorCode::InvalidArgument, "delay must be >= 1");
    const std::size_t span = (dim - 1) * delay;
    if (ts.size() <= span)
        throw Error(ErrorCode::InsufficientSamples,
                    std::to_string(ts.size()) + " samples, need more than " + std::to_string(span));
    std::vector<std::vector<double>> pts(ts.size() - span, std::vector<double>(dim));
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t k = 0; k < dim; ++k) pts[i][k] = ts[i + k * delay];
    return PointCloud(std::move(pts));
}

/// Smallest over largest singular value of the mean-centred coordinates.
/// Near 0 means the cloud has collapsed onto a lower-dimensional set.
inline double degeneracy_score(const PointCloud& pc) {
    if (pc.size() < 2) throw Error(ErrorCode::InvalidArgument, "degeneracy score needs at least 2 points");
    const auto n = static_cast<Eigen::Index>(pc.size());
    const auto d = static_cast<Eigen::Index>(pc.dimension());
    Eigen::MatrixXd m(n, d);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index k = 0; k < d; ++k)
            m(i, k) = pc[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];
    m.rowwise() -= m.colwise().mean();
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    const auto& s = svd.singularValues();
    if (s.size() == 0 || s(0) == 0.0) return 0.0;
    return s(s.size() - 1) / s(0);
}

/// Unit-amplitude sine sampled with `period` samples per cycle.
inline TimeSeries sine_series(std::size_t length, double period, double amplitude = 1.0) {
    std::vector<double> s(length);
    for (std::size_t i = 0; i < length; ++i)
        s[i] = amplitude * std::sin(2.0 * std::numbers::pi * static_cast<double>(i) / period);
    return TimeSeries(std::move(s));
}

} // namespace topo
