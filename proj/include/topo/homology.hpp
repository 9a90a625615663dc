#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "topo/binlinalg.hpp"
#include "topo/complex.hpp"

namespace topo {

/// b[n] for n = 0..max_dimension.
using BettiVector = std::vector<std::size_t>;

/// b_n = nullity(d_n) - rank(d_{n+1}); zero above the top dimension.
inline std::size_t betti(const SimplicialComplex& c, int n) {
    if (n < 0) throw Error(ErrorCode::InvalidArgument, "homology dimension must be >= 0");
    if (n > c.max_dimension()) return 0;
    return gf2_nullity(boundary_gf2(c, n)) - gf2_rank(boundary_gf2(c, n + 1));
}

inline BettiVector betti_all(const SimplicialComplex& c) {
    const int top = c.max_dimension();
    if (top < 0) return {};
    // rank[n] = rank(d_n); d_0 and d_{top+1} have rank 0.
    std::vector<std::size_t> rank(static_cast<std::size_t>(top) + 2, 0);
    for (int n = 1; n <= top; ++n) rank[static_cast<std::size_t>(n)] = gf2_rank(boundary_gf2(c, n));
    BettiVector b(static_cast<std::size_t>(top) + 1);
    for (int n = 0; n <= top; ++n) {
        const auto k = static_cast<std::size_t>(n);
        b[k] = c.count(n) - rank[k] - rank[k + 1];
    }
    return b;
}

/// Free part of H_n, Z^rank. Torsion is not tracked.
struct HomologyGroupDescription {
    int dimension = 0;
    std::size_t free_rank = 0;

    std::string to_string() const { return "Z^" + std::to_string(free_rank); }
};

inline HomologyGroupDescription homology_group(const SimplicialComplex& c, int n) {
    return {n, betti(c, n)};
}

/// True iff d_n * d_{n+1} is the zero matrix in the given coefficients.
inline bool check_fundamental_lemma(const SimplicialComplex& c, int n, Coefficients mode) {
    if (n < 1) throw Error(ErrorCode::InvalidArgument, "fundamental lemma needs n >= 1");
    if (mode == Coefficients::gf2) return multiply(boundary_gf2(c, n), boundary_gf2(c, n + 1)).is_zero();
    return multiply(boundary_oriented(c, n), boundary_oriented(c, n + 1)).is_zero();
}

namespace reference {

inline SimplicialComplex hollow_triangle() { return SimplicialComplex::close({{0, 1}, {1, 2}, {0, 2}}); }
inline SimplicialComplex filled_triangle() { return SimplicialComplex::close({{0, 1, 2}}); }
inline SimplicialComplex solid_tetrahedron() { return SimplicialComplex::close({{0, 1, 2, 3}}); }
inline SimplicialComplex hollow_tetrahedron() {
    return SimplicialComplex::close({{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}});
}

/// Seven-vertex torus: triangles {i, i+1, i+3} and {i, i+2, i+3} mod 7.
inline SimplicialComplex torus7() {
    std::vector<Simplex> tris;
    for (VertexId i = 0; i < 7; ++i) {
        tris.push_back(Simplex::make({i, (i + 1) % 7, (i + 3) % 7}));
        tris.push_back(Simplex::make({i, (i + 2) % 7, (i + 3) % 7}));
    }
    return SimplicialComplex::close(tris);
}

/// Complex demos by name: triangle, triangle-filled, tetra, tetra-hollow,
/// sphere (same as tetra-hollow), ball (same as tetra), torus.
inline std::optional<SimplicialComplex> by_name(std::string_view name) {
    if (name == "triangle") return hollow_triangle();
    if (name == "triangle-filled") return filled_triangle();
    if (name == "tetra" || name == "ball") return solid_tetrahedron();
    if (name == "tetra-hollow" || name == "sphere") return hollow_tetrahedron();
    if (name == "torus") return torus7();
    return std::nullopt;
}

} // namespace reference

} // namespace topo
