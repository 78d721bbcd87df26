#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "ising/lattice.hpp"

namespace ising {

// Spin assignment, one entry of {-1,+1} per vertex. Carries the
// coordinatewise partial order: s <= t iff s[v] <= t[v] for all v.
using SpinConfiguration = std::vector<std::int8_t>;

enum class Boundary { free_bc, plus, minus };

inline const double beta_critical = std::log(1.0 + std::sqrt(2.0));

inline double beta_to_p(double beta) {
    if (beta < 0) throw std::invalid_argument("beta_to_p: beta must be >= 0");
    return -std::expm1(-beta);
}

inline double p_to_beta(double p) {
    if (p < 0 || p >= 1) throw std::invalid_argument("p_to_beta: need 0 <= p < 1");
    return -std::log1p(-p);
}

inline SpinConfiguration all_spins(int n, std::int8_t s) {
    return SpinConfiguration(static_cast<std::size_t>(n), s);
}

inline bool spin_leq(const SpinConfiguration& a, const SpinConfiguration& b) {
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] > b[i]) return false;
    return true;
}

// Counts of +1 and -1 neighbors of v, with edge multiplicity. Under the
// plus/minus boundary the missing Z^2-neighbors count as phantom spins of
// the fixed sign, so n_plus + n_minus = 4 on G_L.
inline std::pair<int, int> agreement_counts(const LatticeGraph& g, const SpinConfiguration& sigma,
                                            int v, Boundary bc) {
    if (v < 0 || v >= g.vertex_count)
        throw std::out_of_range("agreement_counts: vertex index out of range");
    int n_plus = 0, n_minus = 0;
    for (auto [w, idx] : g.adjacency[v])
        (sigma[w] > 0 ? n_plus : n_minus)++;
    if (bc == Boundary::plus)
        n_plus += g.boundary_deficiency[v];
    else if (bc == Boundary::minus)
        n_minus += g.boundary_deficiency[v];
    return {n_plus, n_minus};
}

// Conditional probability that a refreshed spin is +1 given its
// neighborhood: 1 / (1 + e^{-beta (n_plus - n_minus)}). The exponential
// argument is kept nonpositive.
inline double plus_probability(int n_plus, int n_minus, double beta) {
    double d = beta * (n_plus - n_minus);
    if (d >= 0) return 1.0 / (1.0 + std::exp(-d));
    double e = std::exp(d);
    return e / (1.0 + e);
}

// Heat-bath refresh probabilities for delta = n_plus - n_minus in
// [-4, 4], precomputed once per (beta, run).
class HeatBathTable {
public:
    explicit HeatBathTable(double beta) {
        for (int d = -4; d <= 4; ++d) p_plus_[d + 4] = plus_probability(d, 0, beta);
    }
    double p_plus(int delta) const { return p_plus_[delta + 4]; }

private:
    std::array<double, 9> p_plus_;
};

// The grand-coupling update phi(sigma, v, u): refresh sigma(v) to +1 iff
// u < p_plus (strict). Monotone in sigma for fixed (v, u).
inline void heat_bath_update(const LatticeGraph& g, SpinConfiguration& sigma, int v, double u,
                             double beta, Boundary bc) {
    auto [n_plus, n_minus] = agreement_counts(g, sigma, v, bc);
    sigma[v] = (u < plus_probability(n_plus, n_minus, beta)) ? std::int8_t{1} : std::int8_t{-1};
}

// Same update driven by a precomputed table; the hot path of CFTP.
inline void heat_bath_update(const LatticeGraph& g, SpinConfiguration& sigma, int v, double u,
                             const HeatBathTable& table, Boundary bc) {
    int delta = 0;
    for (auto [w, idx] : g.adjacency[v]) delta += sigma[w];
    if (bc == Boundary::plus)
        delta += g.boundary_deficiency[v];
    else if (bc == Boundary::minus)
        delta -= g.boundary_deficiency[v];
    sigma[v] = (u < table.p_plus(delta)) ? std::int8_t{1} : std::int8_t{-1};
}

// Unnormalized Boltzmann weight exp(beta * (#agreeing edges + boundary
// agreements)). Boundary agreements count phantom fixed-sign neighbors
// with multiplicity boundary_deficiency(v).
inline double unnormalized_weight(const LatticeGraph& g, const SpinConfiguration& sigma,
                                  double beta, Boundary bc) {
    long agree = 0;
    for (auto [u, v] : g.edges)
        if (sigma[u] == sigma[v]) ++agree;
    if (bc != Boundary::free_bc) {
        std::int8_t fixed = (bc == Boundary::plus) ? 1 : -1;
        for (int v = 0; v < g.vertex_count; ++v)
            if (sigma[v] == fixed) agree += g.boundary_deficiency[v];
    }
    return std::exp(beta * static_cast<double>(agree));
}

}  // namespace ising
