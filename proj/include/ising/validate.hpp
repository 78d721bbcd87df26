#pragma once

#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "ising/cftp.hpp"
#include "ising/lattice.hpp"
#include "ising/oracle.hpp"
#include "ising/random_cluster.hpp"
#include "ising/sampler.hpp"
#include "ising/spin.hpp"

namespace ising {

// Max over all bond configurations of |mu_p(omega) - mu*_{p_star}(omega*)|
// on G_L vs its dual, both fully enumerated. p_star is a parameter so a
// deliberately wrong dual probability can serve as a negative control.
inline double measure_duality_error(int L, double p, double p_star) {
    LatticeGraph g = build_square_lattice(L);
    auto [dual_graph, map] = build_dual(L);
    DistributionTable mu = enumerate_rc(g, p, 2.0);
    DistributionTable mu_star = enumerate_rc(dual_graph, p_star, 2.0);
    double worst = 0.0;
    for (std::size_t w = 0; w < mu.prob.size(); ++w) {
        std::size_t w_star = 0;
        for (int e = 0; e < g.edge_count(); ++e)
            if (!((w >> e) & 1)) w_star |= std::size_t{1} << map.primal_to_dual[e];
        worst = std::max(worst, std::abs(mu.prob[w] - mu_star.prob[w_star]));
    }
    return worst;
}

inline double measure_duality_error(int L, double p) {
    return measure_duality_error(L, p, dual_p(p));
}

// Exhaustive monotonicity check of the grand-coupling update on G_L:
// every ordered pair sigma <= eta, every vertex, u on a uniform grid.
// Returns the number of order violations.
inline long monotonicity_violations_exhaustive(int L, double beta, Boundary bc,
                                               int u_grid = 64) {
    LatticeGraph g = build_square_lattice(L);
    int n = g.vertex_count;
    long violations = 0;
    for (std::uint32_t a = 0; a < (1u << n); ++a) {
        SpinConfiguration sigma = spins_from_mask(a, n);
        for (std::uint32_t b = 0; b < (1u << n); ++b) {
            if ((a & b) != a) continue;  // sigma <= eta iff mask(a) subset of mask(b)
            SpinConfiguration eta = spins_from_mask(b, n);
            for (int v = 0; v < n; ++v) {
                for (int k = 0; k < u_grid; ++k) {
                    double u = (k + 0.5) / u_grid;
                    SpinConfiguration s2 = sigma, e2 = eta;
                    heat_bath_update(g, s2, v, u, beta, bc);
                    heat_bath_update(g, e2, v, u, beta, bc);
                    if (!spin_leq(s2, e2)) ++violations;
                }
            }
        }
    }
    return violations;
}

// Randomized monotonicity check on larger lattices.
inline long monotonicity_violations_random(int L, double beta, Boundary bc, long trials,
                                           std::uint64_t seed) {
    LatticeGraph g = build_square_lattice(L);
    int n = g.vertex_count;
    RandomStream rand(seed, 97);
    long violations = 0;
    for (long t = 0; t < trials; ++t) {
        SpinConfiguration sigma(n), eta(n);
        for (int v = 0; v < n; ++v) {
            double r = rand.next_uniform();
            // three cases keep sigma <= eta
            if (r < 1.0 / 3) { sigma[v] = -1; eta[v] = -1; }
            else if (r < 2.0 / 3) { sigma[v] = -1; eta[v] = 1; }
            else { sigma[v] = 1; eta[v] = 1; }
        }
        int v = static_cast<int>(rand.next_uniform() * n);
        double u = rand.next_uniform();
        heat_bath_update(g, sigma, v, u, beta, bc);
        heat_bath_update(g, eta, v, u, beta, bc);
        if (!spin_leq(sigma, eta)) ++violations;
    }
    return violations;
}

// Max error between the plus-boundary Boltzmann law on G_{L-1} and the
// conditional law on G_L* given spin(v*) = +1, restricted to the
// non-auxiliary vertices. This is the identity behind the dual branch.
inline double plus_boundary_conditional_error(int L, double beta) {
    LatticeGraph inner = build_square_lattice(L - 1);
    auto [dual_graph, map] = build_dual(L);
    DistributionTable plus_law = enumerate_boltzmann(inner, beta, Boundary::plus);
    DistributionTable full = enumerate_boltzmann(dual_graph, beta, Boundary::free_bc);

    int n = inner.vertex_count;  // aux vertex has the top bit
    std::vector<double> conditional(std::size_t{1} << n, 0.0);
    double z = 0.0;
    for (std::size_t mask = 0; mask < conditional.size(); ++mask) {
        double pr = full.prob[mask | (std::size_t{1} << n)];
        conditional[mask] = pr;
        z += pr;
    }
    double worst = 0.0;
    for (std::size_t mask = 0; mask < conditional.size(); ++mask)
        worst = std::max(worst, std::abs(conditional[mask] / z - plus_law.prob[mask]));
    return worst;
}

struct SamplingCheck {
    double tv = 0.0;
    ChiSquareResult chi;
    double chi_critical = 0.0;
    std::vector<std::uint64_t> counts;
};

// Draw `samples` exact samples on G_L and compare against the enumerated
// Boltzmann table.
inline SamplingCheck sampling_check(int L, double beta, Branch branch, long samples,
                                    std::uint64_t seed,
                                    const DistributionTable& oracle_table) {
    SamplingCheck out;
    out.counts.assign(oracle_table.prob.size(), 0);
    SamplerConfig config;
    config.side = L;
    config.beta = beta;
    config.branch = branch;
    for (long i = 0; i < samples; ++i) {
        config.seed = seed + static_cast<std::uint64_t>(i);
        SampleResult r = sample_ising(config);
        ++out.counts[mask_from_spins(r.spins)];
    }
    out.tv = tv_distance(out.counts, oracle_table);
    out.chi = chi_square(out.counts, oracle_table);
    out.chi_critical = chi_square_critical(out.chi.degrees_of_freedom);
    return out;
}

// CFTP restart invariance: rerunning with the start epoch forced one past
// the coalescing epoch must leave the time-0 state unchanged.
inline bool restart_invariant(int L, double beta, Boundary bc, std::uint64_t seed) {
    LatticeGraph g = build_square_lattice(L);
    RandomnessSchedule schedule(seed, g.vertex_count, kStreamCftp);
    CftpResult first = cftp_sample(g, beta, bc, schedule);
    HeatBathTable table(beta);
    // one epoch deeper, run once straight through
    std::int64_t span = (std::int64_t{1} << (first.epochs_used + 1)) - 1;
    SpinConfiguration bottom = all_spins(g.vertex_count, -1);
    SpinConfiguration top = all_spins(g.vertex_count, 1);
    for (std::int64_t s = -span + 1; s <= 0; ++s) {
        auto [v, u] = schedule.draw(s);
        heat_bath_update(g, bottom, v, u, table, bc);
        heat_bath_update(g, top, v, u, table, bc);
    }
    return coalesced(bottom, top) && top == first.sample;
}

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

inline CheckResult make_check(const std::string& name, bool pass, double value, double bound,
                              const char* relation = "<=") {
    std::ostringstream os;
    os.precision(6);
    os << value << " " << relation << " " << bound;
    return {name, pass, os.str()};
}

// The validation suite behind `validate --level quick|full`.
inline std::vector<CheckResult> run_validation(bool full, std::uint64_t seed = 1,
                                               long samples = 200000) {
    std::vector<CheckResult> checks;

    {
        double e1 = std::abs(dual_beta(beta_critical) - beta_critical);
        double e2 = std::abs(dual_p(2.0 - std::sqrt(2.0)) - (2.0 - std::sqrt(2.0)));
        double e = std::max(e1, e2);
        checks.push_back(make_check("self-dual point", e <= 1e-12, e, 1e-12));
    }
    {
        double worst = 0.0;
        for (double beta = 0.1; beta <= 2.01; beta += 0.1)
            worst = std::max(worst, std::abs(dual_beta(dual_beta(beta)) - beta));
        for (double p = 0.05; p <= 0.951; p += 0.05)
            worst = std::max(worst, std::abs(dual_p(dual_p(p)) - p));
        checks.push_back(make_check("duality involutions", worst <= 1e-10, worst, 1e-10));
    }
    {
        double worst = 0.0;
        for (int L : {2, 3})
            for (double beta : {0.3, beta_critical, 1.5}) {
                EsJointReport r = es_joint_check(build_square_lattice(L), beta);
                worst = std::max({worst, r.max_error_spin_to_bond, r.max_error_bond_to_spin});
            }
        checks.push_back(make_check("Edwards-Sokal identities (G_2, G_3)", worst <= 1e-10,
                                    worst, 1e-10));
    }
    {
        double worst = 0.0;
        for (double p : {0.2, 2.0 - std::sqrt(2.0), 0.8})
            worst = std::max(worst, measure_duality_error(3, p));
        checks.push_back(make_check("RC measure duality on G_3", worst <= 1e-10, worst, 1e-10));
    }
    {
        double worst = std::max(plus_boundary_conditional_error(2, 0.7),
                                plus_boundary_conditional_error(3, 0.7));
        checks.push_back(
            make_check("plus boundary = conditional dual law", worst <= 1e-10, worst, 1e-10));
    }
    {
        long v = monotonicity_violations_exhaustive(2, beta_critical, Boundary::free_bc);
        checks.push_back(make_check("monotone coupling (exhaustive G_2)", v == 0,
                                    static_cast<double>(v), 0, "=="));
    }

    if (full) {
        for (double beta : {0.4, beta_critical, 1.2}) {
            LatticeGraph g3 = build_square_lattice(3);
            DistributionTable table = enumerate_boltzmann(g3, beta, Boundary::free_bc);
            SamplingCheck c = sampling_check(3, beta, Branch::automatic, samples, seed, table);
            std::ostringstream name;
            name.precision(4);
            name << "sampling TV/chi2 on G_3, beta=" << beta;
            bool pass = c.tv <= 0.03 && c.chi.statistic <= c.chi_critical;
            std::ostringstream detail;
            detail.precision(4);
            detail << "TV=" << c.tv << " (<=0.03), chi2=" << c.chi.statistic
                   << " (<=" << c.chi_critical << ", dof=" << c.chi.degrees_of_freedom << ")";
            checks.push_back({name.str(), pass, detail.str()});
        }
        {
            LatticeGraph g3 = build_square_lattice(3);
            DistributionTable table = enumerate_boltzmann(g3, 1.0, Boundary::free_bc);
            SamplingCheck direct =
                sampling_check(3, 1.0, Branch::direct, samples, seed, table);
            SamplingCheck dual =
                sampling_check(3, 1.0, Branch::dual, samples, seed + 1000003, table);
            DistributionTable emp_a, emp_b;
            double na = 0, nb = 0;
            for (auto c : direct.counts) na += static_cast<double>(c);
            for (auto c : dual.counts) nb += static_cast<double>(c);
            for (std::size_t i = 0; i < table.prob.size(); ++i) {
                emp_a.prob.push_back(static_cast<double>(direct.counts[i]) / na);
                emp_b.prob.push_back(static_cast<double>(dual.counts[i]) / nb);
            }
            double cross = tv_distance(emp_a, emp_b);
            bool pass = direct.tv <= 0.03 && dual.tv <= 0.03 && cross <= 0.04;
            std::ostringstream detail;
            detail.precision(4);
            detail << "TV(direct)=" << direct.tv << ", TV(dual)=" << dual.tv
                   << ", TV(direct,dual)=" << cross << " (<=0.04)";
            checks.push_back({"branch equivalence on G_3, beta=1.0", pass, detail.str()});
        }
        {
            int bad = 0;
            for (std::uint64_t s = 0; s < 1000; ++s)
                if (!restart_invariant(2, 0.8, Boundary::free_bc, seed + s)) ++bad;
            checks.push_back(make_check("CFTP restart invariance (G_2, 1000 seeds)", bad == 0,
                                        bad, 0, "=="));
        }
        {
            long v = monotonicity_violations_random(4, beta_critical, Boundary::free_bc, 100000,
                                                    seed);
            checks.push_back(make_check("monotone coupling (randomized G_4)", v == 0,
                                        static_cast<double>(v), 0, "=="));
        }
    }
    return checks;
}

}  // namespace ising
