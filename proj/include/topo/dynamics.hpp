#pragma once

// Circle maps on the flat circle [0,1): iterative phase functions, projections
// to amplitude, and phase oscillators.

#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

#include "topo/embedding.hpp"
#include "topo/error.hpp"

namespace topo {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// x mod 1 in [0,1). An exact 1.0 produced by rounding maps to 0.
inline double wrap_phase(double x) {
    double r = x - std::floor(x);
    if (r >= 1.0) r = 0.0;
    return r;
}

/// sin(2*pi*x + offset). With no offset, x in [0,1) is split into quarter
/// turns first (exactly, the quarter boundaries are dyadic), so the quarter
/// points give exactly 0, 1, 0, -1.
inline double sine_of_phase(double x, double offset = 0.0) {
    if (offset != 0.0 || !(x >= 0.0 && x < 1.0)) return std::sin(kTwoPi * x + offset);
    const double quarter = std::floor(4.0 * x);
    const double r = kTwoPi * (x - 0.25 * quarter);
    switch (static_cast<int>(quarter)) {
    case 0: return std::sin(r);
    case 1: return std::cos(r);
    case 2: return 0.0 - std::sin(r);
    default: return 0.0 - std::cos(r);
    }
}

/// A position on the flat circle, always in [0,1).
class Phase {
public:
    constexpr Phase() = default;
    explicit Phase(double x) : x_(wrap_phase(x)) {
        if (!std::isfinite(x)) throw Error(ErrorCode::NonFinitePhase, "phase must be finite");
    }
    constexpr double value() const noexcept { return x_; }
    friend bool operator==(const Phase&, const Phase&) = default;

private:
    double x_ = 0.0;
};

/// f(x) = slope*x + omega + gain*sin(2*pi*x). The constant-increment case
/// (slope 1, gain 0) evaluates as x + omega exactly.
struct PhaseFunction {
    enum class Kind { constant_increment, affine_sine };
    Kind kind = Kind::constant_increment;
    double omega = 0.0;
    double slope = 1.0;
    double gain = 0.0;

    static PhaseFunction constant(double omega) { return {Kind::constant_increment, omega, 1.0, 0.0}; }
    static PhaseFunction affine_sine(double slope, double omega, double gain) {
        return {Kind::affine_sine, omega, slope, gain};
    }

    double operator()(double x) const {
        if (kind == Kind::constant_increment) return x + omega;
        return slope * x + omega + gain * std::sin(kTwoPi * x);
    }
};

/// x_n = f(x_{n-1}) + input, mod 1.
inline Phase step_phase(const PhaseFunction& f, Phase x, double input = 0.0) {
    const double raw = f(x.value()) + input;
    if (!std::isfinite(raw)) throw Error(ErrorCode::NonFinitePhase, "phase function produced a non-finite value");
    return Phase(raw);
}

/// Triangle fold of the circle onto [0,1]: 2x up to x = 0.5, 2(1-x) after.
inline double fold_project(Phase p) {
    const double x = p.value();
    return x <= 0.5 ? 2.0 * x : 2.0 * (1.0 - x);
}

struct Projection {
    enum class Kind { sine, sawtooth, fold };
    Kind kind = Kind::sine;
    double amplitude = 1.0;
    double phase_offset = 0.0; // radians, sine only

    static Projection sine(double amplitude = 1.0, double phase_offset = 0.0) {
        return {Kind::sine, amplitude, phase_offset};
    }
    static Projection sawtooth() { return {Kind::sawtooth, 1.0, 0.0}; }
    static Projection fold() { return {Kind::fold, 1.0, 0.0}; }

    double operator()(Phase p) const {
        switch (kind) {
        case Kind::sine: return amplitude * sine_of_phase(p.value(), phase_offset);
        case Kind::sawtooth: return p.value();
        case Kind::fold: return fold_project(p);
        }
        return 0.0;
    }
};

/// y_n = p(x_n) along the orbit x_0, f(x_0), ...; `count` samples.
inline TimeSeries oscillate(const PhaseFunction& f, const Projection& p, Phase x0, std::size_t count) {
    if (count < 1) throw Error(ErrorCode::InvalidArgument, "oscillator needs count >= 1");
    std::vector<double> out;
    out.reserve(count);
    Phase x = x0;
    for (std::size_t n = 0; n < count; ++n) {
        out.push_back(p(x));
        if (n + 1 < count) x = step_phase(f, x);
    }
    return TimeSeries(std::move(out));
}

/// The phase orbit itself, `count` values starting with x0.
inline std::vector<Phase> phase_orbit(const PhaseFunction& f, Phase x0, std::size_t count) {
    std::vector<Phase> out;
    out.reserve(count);
    Phase x = x0;
    for (std::size_t n = 0; n < count; ++n) {
        out.push_back(x);
        x = step_phase(f, x);
    }
    return out;
}

} // namespace topo
