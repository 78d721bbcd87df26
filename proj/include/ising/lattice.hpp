#pragma once

#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace ising {

// Finite graph with dense integer vertex ids. Parallel edges are allowed,
// each edge carries its own index. boundary_deficiency(v) counts the
// Z^2-neighbors of v that lie outside the vertex set; it drives the
// phantom-neighbor realization of the plus/minus boundary condition.
struct LatticeGraph {
    int vertex_count = 0;
    std::vector<std::pair<int, int>> edges;
    // per-vertex list of (neighbor, edge index)
    std::vector<std::vector<std::pair<int, int>>> adjacency;
    std::vector<int> boundary_deficiency;
    std::optional<int> aux_vertex;

    int edge_count() const { return static_cast<int>(edges.size()); }
    int degree(int v) const { return static_cast<int>(adjacency[v].size()); }

    void add_edge(int u, int v) {
        int idx = edge_count();
        edges.emplace_back(u, v);
        adjacency[u].emplace_back(v, idx);
        adjacency[v].emplace_back(u, idx);
    }

    // Edge index for a vertex pair (first match); -1 if absent.
    int find_edge(int u, int v) const {
        for (auto [w, idx] : adjacency[u])
            if (w == v) return idx;
        return -1;
    }
};

// Bijection between primal and dual edge indices: dual edge
// primal_to_dual[i] crosses primal edge i.
struct DualMap {
    std::vector<int> primal_to_dual;
    std::vector<int> dual_to_primal;
};

// Square lattice G_L on {0,...,L-1}^2, row-major vertex ids v = r*L + c.
// Canonical edge order: all horizontal edges row by row, then all
// vertical edges row by row.
inline LatticeGraph build_square_lattice(int L) {
    if (L < 1) throw std::invalid_argument("build_square_lattice: L must be >= 1");
    LatticeGraph g;
    g.vertex_count = L * L;
    g.adjacency.resize(g.vertex_count);
    for (int r = 0; r < L; ++r)
        for (int c = 0; c + 1 < L; ++c)
            g.add_edge(r * L + c, r * L + c + 1);
    for (int r = 0; r + 1 < L; ++r)
        for (int c = 0; c < L; ++c)
            g.add_edge(r * L + c, (r + 1) * L + c);
    g.boundary_deficiency.resize(g.vertex_count);
    for (int v = 0; v < g.vertex_count; ++v)
        g.boundary_deficiency[v] = 4 - g.degree(v);
    return g;
}

// Planar dual of G_L: one vertex per inner face (the face with corners
// (r,c),(r,c+1),(r+1,c),(r+1,c+1) gets id r*(L-1)+c, matching the
// row-major ids of G_{L-1}), plus the auxiliary vertex v* for the outer
// face. One dual edge crosses each primal edge; faces sharing k boundary
// edges with the outer face get k parallel edges to v*.
//
// Dual edge order: the canonical edges of G_{L-1} first (so stripping v*
// leaves G_{L-1} with matching indices), then the v* edges in primal
// edge-index order.
inline std::pair<LatticeGraph, DualMap> build_dual(int L) {
    if (L < 2) throw std::invalid_argument("build_dual: L must be >= 2");
    const int M = L - 1;
    LatticeGraph primal = build_square_lattice(L);
    LatticeGraph inner = build_square_lattice(M);

    LatticeGraph dual;
    dual.vertex_count = M * M + 1;
    dual.adjacency.resize(dual.vertex_count);
    dual.aux_vertex = M * M;

    DualMap map;
    map.primal_to_dual.assign(primal.edge_count(), -1);
    map.dual_to_primal.assign(primal.edge_count(), -1);

    auto link = [&](int primal_idx, int du, int dv) {
        int dual_idx = dual.edge_count();
        dual.add_edge(du, dv);
        map.primal_to_dual[primal_idx] = dual_idx;
        map.dual_to_primal[dual_idx] = primal_idx;
    };

    // Inner dual edges, in G_{L-1} canonical order. A horizontal dual
    // edge (r,c)-(r,c+1) crosses the primal vertical edge
    // (r,c+1)-(r+1,c+1); a vertical dual edge (r,c)-(r+1,c) crosses the
    // primal horizontal edge (r+1,c)-(r+1,c+1).
    const int primal_horiz = L * (L - 1);  // index offset of vertical edges
    for (auto [fu, fv] : inner.edges) {
        int ru = fu / M, cu = fu % M;
        int rv = fv / M, cv = fv % M;
        int primal_idx;
        if (ru == rv)  // horizontal dual edge
            primal_idx = primal_horiz + ru * L + (cu + 1);
        else  // vertical dual edge
            primal_idx = (ru + 1) * (L - 1) + cu;
        link(primal_idx, fu, fv);
    }

    // Edges to v*, one per boundary primal edge.
    for (int i = 0; i < primal.edge_count(); ++i) {
        if (map.primal_to_dual[i] != -1) continue;
        int face;
        if (i < primal_horiz) {
            int r = i / (L - 1), c = i % (L - 1);
            face = (r == 0) ? c : (M - 1) * M + c;  // face below the top row, above the bottom
        } else {
            int j = i - primal_horiz;
            int r = j / L, c = j % L;
            face = (c == 0) ? r * M : r * M + (M - 1);
        }
        link(i, *dual.aux_vertex, face);
    }

    dual.boundary_deficiency.assign(dual.vertex_count, 0);
    return {std::move(dual), std::move(map)};
}

}  // namespace ising
