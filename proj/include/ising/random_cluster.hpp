#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "ising/lattice.hpp"
#include "ising/rng.hpp"
#include "ising/spin.hpp"

namespace ising {

// Bond configuration omega: subset of the edge indices of a LatticeGraph.
struct RCState {
    std::vector<bool> included;

    int edge_count() const { return static_cast<int>(included.size()); }
    int bond_count() const {
        return static_cast<int>(std::count(included.begin(), included.end(), true));
    }
};

struct ComponentLabeling {
    std::vector<int> label;  // canonical: smallest vertex index in the component
    int component_count = 0;
};

// p* = 1 - p/(2-p); involution on [0,1], self-dual at p = 2 - sqrt(2).
inline double dual_p(double p) {
    if (p < 0 || p > 1) throw std::invalid_argument("dual_p: need p in [0,1]");
    return 1.0 - p / (2.0 - p);
}

// beta* = log(coth(beta/2)); involution, maps (beta_c, inf) onto (0, beta_c).
inline double dual_beta(double beta) {
    if (beta <= 0) throw std::invalid_argument("dual_beta: beta must be > 0");
    return std::log(1.0 / std::tanh(beta / 2.0));
}

// Spins -> bonds: include each satisfied edge independently with
// probability p; parallel edges are sampled independently.
inline RCState ising_to_rc(const LatticeGraph& g, const SpinConfiguration& sigma, double p,
                           RandomStream& rand) {
    RCState omega;
    omega.included.resize(g.edges.size(), false);
    for (std::size_t i = 0; i < g.edges.size(); ++i) {
        auto [u, v] = g.edges[i];
        if (sigma[u] == sigma[v] && rand.next_uniform() < p) omega.included[i] = true;
    }
    return omega;
}

// Union-find with path compression and union by size.
inline ComponentLabeling connected_components(const LatticeGraph& g, const RCState& omega) {
    std::vector<int> parent(g.vertex_count);
    std::vector<int> size(g.vertex_count, 1);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };
    for (std::size_t i = 0; i < g.edges.size(); ++i) {
        if (!omega.included[i]) continue;
        int a = find(g.edges[i].first), b = find(g.edges[i].second);
        if (a == b) continue;
        if (size[a] < size[b]) std::swap(a, b);
        parent[b] = a;
        size[a] += size[b];
    }
    ComponentLabeling out;
    out.label.assign(g.vertex_count, -1);
    // canonical labels: smallest vertex index per component
    std::vector<int> root_label(g.vertex_count, -1);
    for (int v = 0; v < g.vertex_count; ++v) {
        int r = find(v);
        if (root_label[r] == -1) {
            root_label[r] = v;
            ++out.component_count;
        }
        out.label[v] = root_label[r];
    }
    return out;
}

// Bonds -> spins: one fair-coin spin per connected component.
inline SpinConfiguration rc_to_ising(const LatticeGraph& g, const RCState& omega,
                                     RandomStream& rand) {
    ComponentLabeling comps = connected_components(g, omega);
    SpinConfiguration sigma(g.vertex_count, 0);
    for (int v = 0; v < g.vertex_count; ++v) {
        if (comps.label[v] == v)
            sigma[v] = rand.next_uniform() < 0.5 ? std::int8_t{1} : std::int8_t{-1};
    }
    for (int v = 0; v < g.vertex_count; ++v) sigma[v] = sigma[comps.label[v]];
    return sigma;
}

// Transport the complement through the edge bijection: e in omega iff
// e* not in omega*.
inline RCState dual_rc_state(const RCState& omega, const DualMap& map) {
    RCState dual;
    dual.included.resize(omega.included.size());
    for (std::size_t i = 0; i < omega.included.size(); ++i)
        dual.included[map.primal_to_dual[i]] = !omega.included[i];
    return dual;
}

// Inverse direction of dual_rc_state.
inline RCState primal_rc_state(const RCState& dual, const DualMap& map) {
    RCState omega;
    omega.included.resize(dual.included.size());
    for (std::size_t i = 0; i < dual.included.size(); ++i)
        omega.included[i] = !dual.included[map.primal_to_dual[i]];
    return omega;
}

// Unnormalized random-cluster weight p^|omega| (1-p)^(|E|-|omega|) q^C(omega).
inline double rc_weight(const LatticeGraph& g, const RCState& omega, double p, double q = 2.0) {
    if (p < 0 || p > 1) throw std::invalid_argument("rc_weight: need p in [0,1]");
    int bonds = omega.bond_count();
    int comps = connected_components(g, omega).component_count;
    return std::pow(p, bonds) * std::pow(1.0 - p, g.edge_count() - bonds) * std::pow(q, comps);
}

}  // namespace ising
