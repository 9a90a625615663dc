#pragma once

// Abstract simplicial complexes over integer vertex ids, graph matrices, and
// boundary-matrix assembly.

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <map>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "topo/binlinalg.hpp"
#include "topo/error.hpp"

namespace topo {

using VertexId = std::uint32_t;

/// A simplex is its strictly increasing vertex list; dimension is size - 1.
class Simplex {
public:
    /// Canonicalizes arbitrary-order ids. Throws EmptySimplex / DuplicateVertex.
    static Simplex make(std::vector<VertexId> ids) {
        if (ids.empty()) throw Error(ErrorCode::EmptySimplex, "a simplex needs at least one vertex");
        std::sort(ids.begin(), ids.end());
        if (std::adjacent_find(ids.begin(), ids.end()) != ids.end())
            throw Error(ErrorCode::DuplicateVertex,
                        "vertex " + std::to_string(*std::adjacent_find(ids.begin(), ids.end())) +
                            " repeated");
        return Simplex(std::move(ids));
    }

    std::span<const VertexId> vertices() const noexcept { return vertices_; }
    int dimension() const noexcept { return static_cast<int>(vertices_.size()) - 1; }
    std::size_t size() const noexcept { return vertices_.size(); }
    VertexId operator[](std::size_t i) const { return vertices_[i]; }

    /// Face with the i-th vertex removed (the face opposite that vertex).
    Simplex face(std::size_t i) const {
        if (dimension() == 0) throw Error(ErrorCode::NoFaces, "a 0-simplex has no faces");
        if (i >= vertices_.size())
            throw Error(ErrorCode::IndexOutOfRange,
                        "face position " + std::to_string(i) + " for a " +
                            std::to_string(dimension()) + "-simplex");
        std::vector<VertexId> rest;
        rest.reserve(vertices_.size() - 1);
        for (std::size_t k = 0; k < vertices_.size(); ++k)
            if (k != i) rest.push_back(vertices_[k]);
        return Simplex(std::move(rest));
    }

    /// All codimension-1 faces, in deletion order 0..dim.
    std::vector<Simplex> faces() const {
        std::vector<Simplex> out;
        if (dimension() == 0) return out;
        out.reserve(vertices_.size());
        for (std::size_t i = 0; i < vertices_.size(); ++i) out.push_back(face(i));
        return out;
    }

    std::string to_string() const {
        std::string s = "{";
        for (std::size_t i = 0; i < vertices_.size(); ++i) {
            if (i) s += ',';
            s += std::to_string(vertices_[i]);
        }
        return s + "}";
    }

    friend auto operator<=>(const Simplex&, const Simplex&) = default;
    friend bool operator==(const Simplex&, const Simplex&) = default;

private:
    explicit Simplex(std::vector<VertexId> v) : vertices_(std::move(v)) {}
    std::vector<VertexId> vertices_;
};

inline Simplex make_simplex(std::vector<VertexId> ids) { return Simplex::make(std::move(ids)); }
inline Simplex face(const Simplex& s, std::size_t i) { return s.face(i); }

struct SimplexHash {
    std::size_t operator()(const Simplex& s) const noexcept {
        std::uint64_t h = 1469598103934665603ull;
        for (VertexId v : s.vertices()) {
            h ^= v;
            h *= 1099511628211ull;
        }
        return static_cast<std::size_t>(h);
    }
};

/// Finite simplicial complex, closed under faces. Simplices of each dimension
/// are kept in lexicographic order; a simplex's ordinal is its position there.
class SimplicialComplex {
public:
    SimplicialComplex() = default;

    /// Downward closure of the generators.
    static SimplicialComplex close(std::span<const Simplex> generators) {
        std::vector<std::set<Simplex>> by_dim;
        for (const Simplex& g : generators) {
            const auto d = static_cast<std::size_t>(g.dimension());
            if (by_dim.size() <= d) by_dim.resize(d + 1);
            by_dim[d].insert(g);
        }
        for (std::size_t d = by_dim.size(); d-- > 1;)
            for (const Simplex& s : by_dim[d])
                for (Simplex f : s.faces()) by_dim[d - 1].insert(std::move(f));

        SimplicialComplex c;
        c.simplices_.resize(by_dim.size());
        c.index_.resize(by_dim.size());
        for (std::size_t d = 0; d < by_dim.size(); ++d) {
            c.simplices_[d].assign(by_dim[d].begin(), by_dim[d].end());
            for (std::size_t k = 0; k < c.simplices_[d].size(); ++k)
                c.index_[d].emplace(c.simplices_[d][k], k);
        }
        return c;
    }

    static SimplicialComplex close(std::initializer_list<std::vector<VertexId>> generators) {
        std::vector<Simplex> g;
        for (const auto& ids : generators) g.push_back(Simplex::make(ids));
        return close(g);
    }

    /// Highest dimension present, or -1 for the empty complex.
    int max_dimension() const noexcept { return static_cast<int>(simplices_.size()) - 1; }
    bool empty() const noexcept { return simplices_.empty(); }

    std::size_t count(int dim) const {
        if (dim < 0 || dim > max_dimension()) return 0;
        return simplices_[static_cast<std::size_t>(dim)].size();
    }

    std::size_t total_count() const {
        std::size_t n = 0;
        for (const auto& s : simplices_) n += s.size();
        return n;
    }

    std::span<const Simplex> simplices(int dim) const {
        if (dim < 0 || dim > max_dimension()) return {};
        return simplices_[static_cast<std::size_t>(dim)];
    }

    bool contains(const Simplex& s) const { return ordinal(s).has_value(); }

    std::optional<std::size_t> ordinal(const Simplex& s) const {
        const int d = s.dimension();
        if (d > max_dimension()) return std::nullopt;
        const auto& idx = index_[static_cast<std::size_t>(d)];
        const auto it = idx.find(s);
        if (it == idx.end()) return std::nullopt;
        return it->second;
    }

    /// Euler characteristic, alternating sum of simplex counts.
    long long euler_characteristic() const {
        long long chi = 0;
        for (int d = 0; d <= max_dimension(); ++d)
            chi += (d % 2 == 0 ? 1 : -1) * static_cast<long long>(count(d));
        return chi;
    }

    friend bool operator==(const SimplicialComplex& a, const SimplicialComplex& b) {
        return a.simplices_ == b.simplices_;
    }

private:
    std::vector<std::vector<Simplex>> simplices_;
    std::vector<std::unordered_map<Simplex, std::size_t, SimplexHash>> index_;
};

inline SimplicialComplex close_complex(std::span<const Simplex> generators) {
    return SimplicialComplex::close(generators);
}

/// A graph G = (V, E): vertices 0..n-1 and a labelled edge list. Edge order is
/// the caller's (edge k is e_k); from_complex uses lexicographic order.
class VertexGraph {
public:
    VertexGraph(std::size_t vertex_count, std::vector<std::pair<VertexId, VertexId>> edges)
        : n_(vertex_count) {
        for (auto [u, v] : edges) {
            if (u == v) throw Error(ErrorCode::DuplicateVertex, "self-loop in graph");
            if (u >= n_ || v >= n_)
                throw Error(ErrorCode::IndexOutOfRange, "edge endpoint outside vertex range");
            edges_.emplace_back(std::min(u, v), std::max(u, v));
        }
    }

    /// Requires a complex of dimension <= 1 whose vertices are 0..n-1.
    static VertexGraph from_complex(const SimplicialComplex& c) {
        if (c.max_dimension() > 1)
            throw Error(ErrorCode::InvalidArgument, "graph complexes have no simplices of dimension >= 2");
        const auto verts = c.simplices(0);
        for (std::size_t k = 0; k < verts.size(); ++k)
            if (verts[k][0] != k)
                throw Error(ErrorCode::InvalidArgument, "graph vertices must be numbered 0..n-1");
        std::vector<std::pair<VertexId, VertexId>> e;
        for (const Simplex& s : c.simplices(1)) e.emplace_back(s[0], s[1]);
        return VertexGraph(verts.size(), std::move(e));
    }

    std::size_t vertex_count() const noexcept { return n_; }
    std::span<const std::pair<VertexId, VertexId>> edges() const noexcept { return edges_; }

private:
    std::size_t n_;
    std::vector<std::pair<VertexId, VertexId>> edges_;
};

inline BitMatrix adjacency_matrix(const VertexGraph& g) {
    BitMatrix a(g.vertex_count(), g.vertex_count());
    for (auto [u, v] : g.edges()) {
        a.set(u, v, true);
        a.set(v, u, true);
    }
    return a;
}

/// Rows are vertices, columns are edges.
inline BitMatrix incidence_matrix(const VertexGraph& g) {
    BitMatrix b(g.vertex_count(), g.edges().size());
    for (std::size_t e = 0; e < g.edges().size(); ++e) {
        b.set(g.edges()[e].first, e, true);
        b.set(g.edges()[e].second, e, true);
    }
    return b;
}

enum class Coefficients { gf2, oriented };

/// GF(2) boundary map from n-simplices to (n-1)-simplices. For n = 0 the
/// result has zero rows and one column per vertex.
inline BitMatrix boundary_gf2(const SimplicialComplex& c, int n) {
    if (n < 0) throw Error(ErrorCode::InvalidArgument, "boundary dimension must be >= 0");
    const auto cols = c.simplices(n);
    BitMatrix m(n == 0 ? 0 : c.count(n - 1), cols.size());
    if (n == 0) return m;
    for (std::size_t j = 0; j < cols.size(); ++j)
        for (const Simplex& f : cols[j].faces()) m.set(*c.ordinal(f), j, true);
    return m;
}

/// Oriented boundary map: deleting the i-th vertex contributes (-1)^i. An edge
/// {u < v} is read as an arrow from v to u: +1 at the base v, -1 at the tip u.
inline IntMatrix boundary_oriented(const SimplicialComplex& c, int n) {
    if (n < 0) throw Error(ErrorCode::InvalidArgument, "boundary dimension must be >= 0");
    const auto cols = c.simplices(n);
    IntMatrix m(n == 0 ? 0 : c.count(n - 1), cols.size());
    if (n == 0) return m;
    for (std::size_t j = 0; j < cols.size(); ++j) {
        const auto faces = cols[j].faces();
        for (std::size_t i = 0; i < faces.size(); ++i)
            m(*c.ordinal(faces[i]), j) = (i % 2 == 0) ? 1 : -1;
    }
    return m;
}

/// Parses the .cplx text format: one simplex per line, labels separated by a
/// single space, '#' starts a comment line. Labels map to ids in order of first
/// appearance. Closure is applied.
struct ParsedComplex {
    SimplicialComplex complex;
    std::vector<std::string> labels; // labels[id]
};

inline ParsedComplex parse_cplx(std::istream& in) {
    std::map<std::string, VertexId> ids;
    std::vector<std::string> labels;
    std::vector<Simplex> generators;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        std::vector<VertexId> simplex;
        std::size_t pos = 0;
        while (true) {
            const std::size_t next = line.find(' ', pos);
            const std::string tok = line.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
            if (tok.empty())
                throw Error(ErrorCode::ParseError,
                            "line " + std::to_string(line_no) + ": labels must be separated by a single space");
            auto [it, inserted] = ids.emplace(tok, static_cast<VertexId>(labels.size()));
            if (inserted) labels.push_back(tok);
            simplex.push_back(it->second);
            if (next == std::string::npos) break;
            pos = next + 1;
        }
        try {
            generators.push_back(Simplex::make(std::move(simplex)));
        } catch (const Error& e) {
            throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return {SimplicialComplex::close(generators), std::move(labels)};
}

inline ParsedComplex parse_cplx(const std::string& text) {
    std::istringstream in(text);
    return parse_cplx(in);
}

} // namespace topo
