#pragma once

// Topological filters: a sheaf over the line complex
//
//     v0 --e0-- v1 --e1-- ... --e_{T-2}-- v_{T-1}
//
// with state R^N (or (S^1)^N) over every edge and the augmented state
// R^{N+1} = (state, injected input) over every vertex. Four maps connect them:
//   s: augmented vertex state -> state on the edge to the right
//   r: augmented vertex state -> state on the edge to the left (drops input)
//   i: augmented vertex state -> input sample
//   o: augmented vertex state -> output sample
// Time runs left to right. The state entering v0 is supplied by the caller.

#include <cmath>
#include <cstddef>
#include <istream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "topo/dynamics.hpp"
#include "topo/embedding.hpp"
#include "topo/error.hpp"
#include "topo/io.hpp"

namespace topo {

using StateVector = std::vector<double>;

/// T vertices and T-1 edges.
struct LineComplex {
    std::size_t length = 1;

    explicit LineComplex(std::size_t t) : length(t) {
        if (t < 1) throw Error(ErrorCode::InvalidArgument, "line complex needs at least one vertex");
    }
    std::size_t vertex_count() const noexcept { return length; }
    std::size_t edge_count() const noexcept { return length - 1; }
};

/// Direct-II register: x_0..x_{N-1} holds w[n-N]..w[n-1]; feedback a_1..a_N,
/// feedforward b_0..b_N.
struct LtiMaps {
    std::vector<double> a;
    std::vector<double> b;

    std::size_t order() const noexcept { return a.size(); }

    /// w[n] = x + sum_j -a_j * x_{N-j}
    double register_input(const StateVector& aug) const {
        const std::size_t n = order();
        double w = aug[n];
        for (std::size_t j = 1; j <= n; ++j) w += -a[j - 1] * aug[n - j];
        return w;
    }

    StateVector s(const StateVector& aug) const {
        const std::size_t n = order();
        if (n == 0) return {};
        StateVector out(aug.begin() + 1, aug.begin() + static_cast<std::ptrdiff_t>(n));
        out.push_back(register_input(aug));
        return out;
    }

    /// y = b_0 * w[n] + sum_i b_i * x_{N-i}
    double o(const StateVector& aug) const {
        const std::size_t n = order();
        double y = b[0] * register_input(aug);
        for (std::size_t i = 1; i <= n; ++i) y += b[i] * aug[n - i];
        return y;
    }
};

/// FM on a pair of circles: state (carrier phase x0, modulator phase z0).
struct FmMaps {
    double omega = 0.0;     // carrier increment per step
    double index = 0.0;     // modulation index H
    double mod_omega = 0.0; // modulator increment per step
    double phase = 0.0;     // output phase offset, radians

    StateVector s(const StateVector& aug) const {
        const double carrier = aug[0] + omega + index * std::sin(kTwoPi * aug[1]) + aug[2];
        if (!std::isfinite(carrier)) throw Error(ErrorCode::NonFinitePhase, "FM carrier phase is not finite");
        return {wrap_phase(carrier), wrap_phase(aug[1] + mod_omega)};
    }

    double o(const StateVector& aug) const { return sine_of_phase(aug[0], phase); }
};

class TopologicalFilter {
public:
    enum class SpaceKind { vector, circle_ensemble };

    static TopologicalFilter lti(std::vector<double> a, std::vector<double> b) {
        if (b.size() != a.size() + 1)
            throw Error(ErrorCode::InvalidArgument, "LTI filter needs len(b) = len(a) + 1");
        for (double v : a)
            if (!std::isfinite(v)) throw Error(ErrorCode::InvalidArgument, "non-finite feedback coefficient");
        for (double v : b)
            if (!std::isfinite(v)) throw Error(ErrorCode::InvalidArgument, "non-finite feedforward coefficient");
        return TopologicalFilter(LtiMaps{std::move(a), std::move(b)});
    }

    static TopologicalFilter fm(double omega, double index, double mod_omega, double phase) {
        for (double v : {omega, index, mod_omega, phase})
            if (!std::isfinite(v)) throw Error(ErrorCode::InvalidArgument, "non-finite FM parameter");
        return TopologicalFilter(FmMaps{omega, index, mod_omega, phase});
    }

    SpaceKind space_kind() const noexcept {
        return std::holds_alternative<LtiMaps>(maps_) ? SpaceKind::vector : SpaceKind::circle_ensemble;
    }

    /// N, the dimension of the state over edges.
    std::size_t state_dim() const noexcept {
        return std::visit([](const auto& m) -> std::size_t {
            if constexpr (std::is_same_v<std::decay_t<decltype(m)>, LtiMaps>) return m.order();
            else return 2;
        }, maps_);
    }

    std::size_t vertex_state_dim() const noexcept { return state_dim() + 1; }

    /// Injects an input sample into an edge state.
    StateVector augment(const StateVector& state, double input) const {
        StateVector aug = state;
        aug.push_back(input);
        return aug;
    }

    StateVector s(const StateVector& aug) const {
        return std::visit([&](const auto& m) { return m.s(aug); }, maps_);
    }
    StateVector r(const StateVector& aug) const { return StateVector(aug.begin(), aug.end() - 1); }
    double i(const StateVector& aug) const { return aug.back(); }
    double o(const StateVector& aug) const {
        return std::visit([&](const auto& m) { return m.o(aug); }, maps_);
    }

    StateVector zero_state() const { return StateVector(state_dim(), 0.0); }

    const std::variant<LtiMaps, FmMaps>& maps() const noexcept { return maps_; }

private:
    explicit TopologicalFilter(std::variant<LtiMaps, FmMaps> m) : maps_(std::move(m)) {}
    std::variant<LtiMaps, FmMaps> maps_;
};

inline TopologicalFilter lti_filter(std::vector<double> a, std::vector<double> b) {
    return TopologicalFilter::lti(std::move(a), std::move(b));
}

inline TopologicalFilter fm_filter(double omega, double index, double mod_omega, double phase) {
    return TopologicalFilter::fm(omega, index, mod_omega, phase);
}

/// Data over every cell of the line complex. `initial_state` is the state
/// flowing into vertex 0 from outside the complex.
struct Section {
    StateVector initial_state;
    std::vector<StateVector> vertex_states; // augmented, N+1 each
    std::vector<double> inputs;
    std::vector<double> outputs;
    std::vector<StateVector> edge_states; // N each, T-1 of them

    std::size_t vertex_count() const noexcept { return vertex_states.size(); }
};

struct PropagationResult {
    TimeSeries output;
    Section section;
};

inline PropagationResult propagate(const TopologicalFilter& f, const TimeSeries& input,
                                   std::optional<StateVector> initial_state = std::nullopt) {
    const StateVector init = initial_state.value_or(f.zero_state());
    if (init.size() != f.state_dim())
        throw Error(ErrorCode::StateDimensionMismatch,
                    "initial state has " + std::to_string(init.size()) + " entries, filter needs " +
                        std::to_string(f.state_dim()));
    if (input.size() == 0) throw Error(ErrorCode::InvalidArgument, "input must have at least one sample");
    const bool circle = f.space_kind() == TopologicalFilter::SpaceKind::circle_ensemble;

    Section sec;
    sec.initial_state = init;
    if (circle)
        for (double& v : sec.initial_state) v = wrap_phase(v);
    const std::size_t t = input.size();
    sec.vertex_states.reserve(t);
    sec.inputs.reserve(t);
    sec.outputs.reserve(t);
    sec.edge_states.reserve(t - 1);

    StateVector incoming = sec.initial_state;
    for (std::size_t k = 0; k < t; ++k) {
        StateVector aug = f.augment(incoming, input[k]);
        sec.inputs.push_back(f.i(aug));
        sec.outputs.push_back(f.o(aug));
        if (k + 1 < t) {
            incoming = f.s(aug);
            sec.edge_states.push_back(incoming);
        }
        sec.vertex_states.push_back(std::move(aug));
    }
    TimeSeries out(sec.outputs, input.sample_rate);
    return {std::move(out), std::move(sec)};
}

struct SectionViolation {
    enum class Kind { edge_forward, edge_restriction, input, output };
    Kind kind;
    std::size_t dimension; // 0 for vertices, 1 for edges
    std::size_t index;
    std::string message;
};

struct SectionCheck {
    bool ok = true;
    std::optional<SectionViolation> first_violation;
};

/// Checks that the section is consistent: each edge equals s of its left
/// vertex and r of its right vertex, each vertex's input and output cells equal
/// i and o of its state. Copied values are compared exactly, recomputed values
/// to within 1e-12 (on the circle, by circular distance).
inline SectionCheck verify_section(const TopologicalFilter& f, const Section& sec, const TimeSeries& input) {
    const std::size_t t = sec.vertex_states.size();
    const std::size_t n = f.state_dim();
    bool shape_ok = t >= 1 && input.size() == t && sec.inputs.size() == t && sec.outputs.size() == t &&
                    sec.edge_states.size() == t - 1 && sec.initial_state.size() == n;
    for (const auto& v : sec.vertex_states) shape_ok = shape_ok && v.size() == n + 1;
    for (const auto& e : sec.edge_states) shape_ok = shape_ok && e.size() == n;
    if (!shape_ok) throw Error(ErrorCode::SectionShapeMismatch, "section does not match the line complex of the input");

    constexpr double kTol = 1e-12;
    const bool circle = f.space_kind() == TopologicalFilter::SpaceKind::circle_ensemble;
    auto close = [&](double a, double b) {
        double d = std::fabs(a - b);
        if (circle) d = std::fmin(d, 1.0 - d);
        return d <= kTol;
    };
    auto fail = [](SectionViolation::Kind kind, std::size_t dim, std::size_t idx, std::string msg) {
        return SectionCheck{false, SectionViolation{kind, dim, idx, std::move(msg)}};
    };

    for (std::size_t k = 0; k < t; ++k) {
        const StateVector& aug = sec.vertex_states[k];
        const StateVector& left = k == 0 ? sec.initial_state : sec.edge_states[k - 1];
        if (f.r(aug) != left)
            return fail(SectionViolation::Kind::edge_restriction, k == 0 ? 0 : 1, k == 0 ? 0 : k - 1,
                        k == 0 ? "0-simplex 0 disagrees with the initial state"
                               : "1-simplex " + std::to_string(k - 1) + " is not r of 0-simplex " + std::to_string(k));
        if (sec.inputs[k] != f.i(aug) || sec.inputs[k] != input[k])
            return fail(SectionViolation::Kind::input, 0, k, "input cell of 0-simplex " + std::to_string(k));
        if (std::fabs(sec.outputs[k] - f.o(aug)) > kTol)
            return fail(SectionViolation::Kind::output, 0, k, "output cell of 0-simplex " + std::to_string(k));
        if (k + 1 < t) {
            const StateVector next = f.s(aug);
            for (std::size_t c = 0; c < n; ++c)
                if (!close(next[c], sec.edge_states[k][c]))
                    return fail(SectionViolation::Kind::edge_forward, 1, k,
                                "1-simplex " + std::to_string(k) + " is not s of 0-simplex " + std::to_string(k));
        }
    }
    return {};
}

/// Reference Direct-Form-I evaluation of
/// y[n] = sum_i b_i x[n-i] - sum_j a_j y[n-j], zero initial conditions.
inline std::vector<double> difference_equation(const std::vector<double>& a, const std::vector<double>& b,
                                               const std::vector<double>& x) {
    std::vector<double> y(x.size(), 0.0);
    for (std::size_t n = 0; n < x.size(); ++n) {
        double acc = 0.0;
        for (std::size_t i = 0; i < b.size() && i <= n; ++i) acc += b[i] * x[n - i];
        for (std::size_t j = 1; j <= a.size() && j <= n; ++j) acc -= a[j - 1] * y[n - j];
        y[n] = acc;
    }
    return y;
}

/// Filter description parsed from a `.filt` file (key=value lines, '#' comments):
///   kind=lti   a=<comma list, may be empty>  b=<comma list>
///   kind=fm    omega=<carrier step> index=<H> mod=<modulator step> phase=<radians>
///   state=<comma list>  (optional initial state; default zeros)
struct FilterConfig {
    TopologicalFilter filter;
    std::optional<StateVector> initial_state;
};

namespace detail {

inline std::vector<double> parse_list(const std::string& key, const std::string& value) {
    std::vector<double> out;
    if (io::trim(value).empty()) return out;
    std::size_t pos = 0;
    while (true) {
        const std::size_t comma = value.find(',', pos);
        double v = 0;
        if (!io::parse_double(std::string_view(value).substr(pos, comma == std::string::npos ? std::string::npos : comma - pos), v) ||
            !std::isfinite(v))
            throw Error(ErrorCode::ParseError, "key '" + key + "': not a number list");
        out.push_back(v);
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return out;
}

inline double parse_scalar(const std::map<std::string, std::string>& kv, const std::string& key, double fallback) {
    const auto it = kv.find(key);
    if (it == kv.end()) return fallback;
    double v = 0;
    if (!io::parse_double(it->second, v) || !std::isfinite(v))
        throw Error(ErrorCode::ParseError, "key '" + key + "': not a finite number");
    return v;
}

} // namespace detail

inline FilterConfig parse_filter_config(std::istream& in) {
    std::map<std::string, std::string> kv;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view view = io::trim(line);
        if (view.empty() || view.front() == '#') continue;
        const auto eq = view.find('=');
        if (eq == std::string_view::npos)
            throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": expected key=value");
        const std::string key(io::trim(view.substr(0, eq)));
        const std::string value(io::trim(view.substr(eq + 1)));
        if (!kv.emplace(key, value).second)
            throw Error(ErrorCode::ParseError, "key '" + key + "': given twice");
    }
    const auto kind = kv.find("kind");
    if (kind == kv.end()) throw Error(ErrorCode::ParseError, "key 'kind': missing");

    auto reject_unknown = [&](std::initializer_list<const char*> allowed) {
        for (const auto& [k, v] : kv) {
            bool ok = false;
            for (const char* a : allowed) ok = ok || k == a;
            if (!ok) throw Error(ErrorCode::ParseError, "key '" + k + "': not valid for kind=" + kind->second);
        }
    };

    std::optional<StateVector> state;
    if (const auto it = kv.find("state"); it != kv.end()) state = detail::parse_list("state", it->second);

    if (kind->second == "lti") {
        reject_unknown({"kind", "a", "b", "state"});
        const auto b = kv.find("b");
        if (b == kv.end()) throw Error(ErrorCode::ParseError, "key 'b': missing");
        std::vector<double> av = kv.count("a") ? detail::parse_list("a", kv.at("a")) : std::vector<double>{};
        std::vector<double> bv = detail::parse_list("b", b->second);
        if (bv.size() != av.size() + 1)
            throw Error(ErrorCode::ParseError, "key 'b': needs exactly one more coefficient than 'a'");
        if (state && state->size() != av.size())
            throw Error(ErrorCode::ParseError, "key 'state': needs " + std::to_string(av.size()) + " entries");
        return {lti_filter(std::move(av), std::move(bv)), state};
    }
    if (kind->second == "fm") {
        reject_unknown({"kind", "omega", "index", "mod", "phase", "state"});
        if (state && state->size() != 2) throw Error(ErrorCode::ParseError, "key 'state': needs 2 entries");
        return {fm_filter(detail::parse_scalar(kv, "omega", 0.0), detail::parse_scalar(kv, "index", 0.0),
                          detail::parse_scalar(kv, "mod", 0.0), detail::parse_scalar(kv, "phase", 0.0)),
                state};
    }
    throw Error(ErrorCode::ParseError, "key 'kind': expected lti or fm, got '" + kind->second + "'");
}

inline FilterConfig parse_filter_config(const std::string& text) {
    std::istringstream in(text);
    return parse_filter_config(in);
}

} // namespace topo
