#pragma once

#include <cmath>
#include <cstdint>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "ising/lattice.hpp"
#include "ising/random_cluster.hpp"
#include "ising/spin.hpp"

namespace ising {

// Exact probability table over a finite outcome space. Ising outcomes are
// state bitmasks (bit v = 1 iff spin(v) = +1); RC outcomes are edge
// bitmasks.
struct DistributionTable {
    std::vector<double> prob;
    double normalizer = 0.0;

    std::size_t outcome_count() const { return prob.size(); }
};

inline SpinConfiguration spins_from_mask(std::uint32_t mask, int n) {
    SpinConfiguration sigma(n);
    for (int v = 0; v < n; ++v) sigma[v] = (mask >> v & 1) ? std::int8_t{1} : std::int8_t{-1};
    return sigma;
}

inline std::uint32_t mask_from_spins(const SpinConfiguration& sigma) {
    std::uint32_t mask = 0;
    for (std::size_t v = 0; v < sigma.size(); ++v)
        if (sigma[v] > 0) mask |= std::uint32_t{1} << v;
    return mask;
}

// Exact Boltzmann distribution by summation over all 2^N spin states.
inline DistributionTable enumerate_boltzmann(const LatticeGraph& g, double beta, Boundary bc) {
    if (g.vertex_count > 20)
        throw std::invalid_argument("enumerate_boltzmann: vertex count exceeds 20");
    std::size_t count = std::size_t{1} << g.vertex_count;
    DistributionTable table;
    table.prob.resize(count);
    for (std::size_t mask = 0; mask < count; ++mask) {
        double w = unnormalized_weight(g, spins_from_mask(static_cast<std::uint32_t>(mask),
                                                          g.vertex_count),
                                       beta, bc);
        table.prob[mask] = w;
        table.normalizer += w;
    }
    for (double& p : table.prob) p /= table.normalizer;
    return table;
}

// Exact random-cluster distribution over all 2^|E| bond configurations.
inline DistributionTable enumerate_rc(const LatticeGraph& g, double p, double q = 2.0) {
    if (g.edge_count() > 22) throw std::invalid_argument("enumerate_rc: edge count exceeds 22");
    std::size_t count = std::size_t{1} << g.edge_count();
    DistributionTable table;
    table.prob.resize(count);
    RCState omega;
    omega.included.resize(g.edges.size());
    for (std::size_t mask = 0; mask < count; ++mask) {
        for (int e = 0; e < g.edge_count(); ++e) omega.included[e] = (mask >> e) & 1;
        double w = rc_weight(g, omega, p, q);
        table.prob[mask] = w;
        table.normalizer += w;
    }
    for (double& pr : table.prob) pr /= table.normalizer;
    return table;
}

// Total variation distance: half the L1 distance.
inline double tv_distance(const DistributionTable& a, const DistributionTable& b) {
    if (a.prob.size() != b.prob.size())
        throw std::invalid_argument("tv_distance: mismatched outcome spaces");
    double s = 0.0;
    for (std::size_t i = 0; i < a.prob.size(); ++i) s += std::abs(a.prob[i] - b.prob[i]);
    return s / 2.0;
}

// Empirical counts vs an exact table.
inline double tv_distance(const std::vector<std::uint64_t>& counts, const DistributionTable& b) {
    if (counts.size() != b.prob.size())
        throw std::invalid_argument("tv_distance: mismatched outcome spaces");
    double n = 0.0;
    for (auto c : counts) n += static_cast<double>(c);
    double s = 0.0;
    for (std::size_t i = 0; i < counts.size(); ++i)
        s += std::abs(static_cast<double>(counts[i]) / n - b.prob[i]);
    return s / 2.0;
}

// Text serialization, one "outcome-index probability" pair per line.
inline void write_table(std::ostream& os, const DistributionTable& table) {
    os.precision(17);
    os << table.prob.size() << ' ' << table.normalizer << '\n';
    for (std::size_t i = 0; i < table.prob.size(); ++i) os << i << ' ' << table.prob[i] << '\n';
}

inline DistributionTable read_table(std::istream& is) {
    DistributionTable table;
    std::size_t count = 0;
    is >> count >> table.normalizer;
    table.prob.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
        std::size_t idx;
        is >> idx >> table.prob[idx];
    }
    if (!is) throw std::runtime_error("read_table: malformed table");
    return table;
}

struct ChiSquareResult {
    double statistic = 0.0;
    int degrees_of_freedom = 0;
};

// Pearson statistic. Bins with expected count < 5 are pooled into a
// single bin; dof = (#bins after pooling) - 1.
inline ChiSquareResult chi_square(const std::vector<std::uint64_t>& counts,
                                  const DistributionTable& expected) {
    if (counts.size() != expected.prob.size())
        throw std::invalid_argument("chi_square: mismatched outcome spaces");
    double n = 0.0;
    for (auto c : counts) n += static_cast<double>(c);
    if (n == 0) throw std::invalid_argument("chi_square: empty sample");

    ChiSquareResult r;
    double pooled_obs = 0.0, pooled_exp = 0.0;
    int bins = 0;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        double e = n * expected.prob[i];
        double o = static_cast<double>(counts[i]);
        if (e < 5.0) {
            pooled_obs += o;
            pooled_exp += e;
        } else {
            r.statistic += (o - e) * (o - e) / e;
            ++bins;
        }
    }
    if (pooled_exp > 0.0) {
        r.statistic += (pooled_obs - pooled_exp) * (pooled_obs - pooled_exp) / pooled_exp;
        ++bins;
    }
    r.degrees_of_freedom = bins - 1;
    return r;
}

// Upper quantile of the chi-square distribution via the Wilson-Hilferty
// cube approximation; z is the standard normal quantile.
inline double chi_square_critical(int dof, double z = 3.71901648546)  // z for 99.99%
{
    double k = static_cast<double>(dof);
    double t = 1.0 - 2.0 / (9.0 * k) + z * std::sqrt(2.0 / (9.0 * k));
    return k * t * t * t;
}

struct EsJointReport {
    bool pass = false;
    double max_error_spin_to_bond = 0.0;  // sup_omega |sum_sigma pi K - mu|
    double max_error_bond_to_spin = 0.0;  // sup_sigma |sum_omega mu K - pi|
};

// Verifies both Edwards-Sokal pushforward identities analytically: the
// spins->bonds kernel applied to pi_beta reproduces mu_p, and the
// bonds->spins kernel applied to mu_p reproduces pi_beta. No sampling;
// kernels are closed-form products.
inline EsJointReport es_joint_check(const LatticeGraph& g, double beta, double tol = 1e-10) {
    if (g.vertex_count > 12 || g.edge_count() > 22)
        throw std::invalid_argument("es_joint_check: graph too large");
    double p = beta_to_p(beta);
    DistributionTable pi = enumerate_boltzmann(g, beta, Boundary::free_bc);
    DistributionTable mu = enumerate_rc(g, p, 2.0);
    std::size_t n_spin = pi.prob.size();
    std::size_t n_bond = mu.prob.size();

    // satisfied-edge bitmask per spin state
    std::vector<std::uint32_t> satisfied(n_spin, 0);
    for (std::size_t s = 0; s < n_spin; ++s) {
        SpinConfiguration sigma = spins_from_mask(static_cast<std::uint32_t>(s), g.vertex_count);
        for (int e = 0; e < g.edge_count(); ++e)
            if (sigma[g.edges[e].first] == sigma[g.edges[e].second])
                satisfied[s] |= std::uint32_t{1} << e;
    }

    EsJointReport report;

    // spins -> bonds: accumulate pi(sigma) * p^|w| (1-p)^(|S|-|w|) over
    // subsets w of the satisfied set S(sigma)
    std::vector<double> pushed(n_bond, 0.0);
    for (std::size_t s = 0; s < n_spin; ++s) {
        std::uint32_t sat = satisfied[s];
        int sat_count = __builtin_popcount(sat);
        std::uint32_t w = sat;
        while (true) {
            int k = __builtin_popcount(w);
            pushed[w] += pi.prob[s] * std::pow(p, k) * std::pow(1.0 - p, sat_count - k);
            if (w == 0) break;
            w = (w - 1) & sat;
        }
    }
    for (std::size_t w = 0; w < n_bond; ++w)
        report.max_error_spin_to_bond =
            std::max(report.max_error_spin_to_bond, std::abs(pushed[w] - mu.prob[w]));

    // bonds -> spins: each of the 2^C component sign choices is equally
    // likely
    std::vector<double> pulled(n_spin, 0.0);
    RCState omega;
    omega.included.resize(g.edges.size());
    for (std::size_t w = 0; w < n_bond; ++w) {
        for (int e = 0; e < g.edge_count(); ++e) omega.included[e] = (w >> e) & 1;
        ComponentLabeling comps = connected_components(g, omega);
        std::vector<int> roots;
        for (int v = 0; v < g.vertex_count; ++v)
            if (comps.label[v] == v) roots.push_back(v);
        double share = mu.prob[w] / std::pow(2.0, comps.component_count);
        for (std::uint32_t choice = 0; choice < (std::uint32_t{1} << roots.size()); ++choice) {
            std::uint32_t mask = 0;
            for (std::size_t r = 0; r < roots.size(); ++r) {
                if (!((choice >> r) & 1)) continue;
                for (int v = 0; v < g.vertex_count; ++v)
                    if (comps.label[v] == roots[r]) mask |= std::uint32_t{1} << v;
            }
            pulled[mask] += share;
        }
    }
    for (std::size_t s = 0; s < n_spin; ++s)
        report.max_error_bond_to_spin =
            std::max(report.max_error_bond_to_spin, std::abs(pulled[s] - pi.prob[s]));

    report.pass =
        report.max_error_spin_to_bond <= tol && report.max_error_bond_to_spin <= tol;
    return report;
}

}  // namespace ising
