#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "ising/oracle.hpp"
#include "ising/sampler.hpp"
#include "ising/validate.hpp"

using namespace ising;

TEST_CASE("describe") {
    DualityReport r = describe(1.2);
    CHECK(r.branch == Branch::dual);
    REQUIRE(r.beta_star.has_value());
    CHECK_THAT(*r.beta_star, Catch::Matchers::WithinAbs(0.6217, 1e-4));
    CHECK_THAT(*r.p_star, Catch::Matchers::WithinAbs(beta_to_p(*r.beta_star), 1e-15));

    r = describe(beta_critical);
    CHECK(r.branch == Branch::direct);  // exact tie goes direct
    CHECK_THAT(*r.beta_star, Catch::Matchers::WithinAbs(beta_critical, 1e-12));

    r = describe(0.4);
    CHECK(r.branch == Branch::direct);

    r = describe(0.0);
    CHECK(r.p == 0.0);
    CHECK_FALSE(r.beta_star.has_value());

    CHECK_THROWS_AS(describe(-0.1), std::invalid_argument);
}

TEST_CASE("auto branch selection") {
    SamplerConfig config;
    config.side = 3;
    config.seed = 11;

    config.beta = 0.4;
    CHECK(sample_ising(config).branch_taken == Branch::direct);
    config.beta = beta_critical;
    CHECK(sample_ising(config).branch_taken == Branch::direct);
    config.beta = 1.2;
    CHECK(sample_ising(config).branch_taken == Branch::dual);

    // L = 1 never takes the dual route
    config.side = 1;
    config.beta = 4.0;
    SampleResult r = sample_ising(config);
    CHECK(r.branch_taken == Branch::direct);
    CHECK(r.spins.size() == 1);
}

TEST_CASE("branch override") {
    SamplerConfig config;
    config.side = 3;
    config.seed = 5;
    config.beta = 1.0;  // naturally dual
    config.branch = Branch::dual;
    CHECK(sample_ising(config).branch_taken == Branch::dual);
    config.branch = Branch::direct;
    CHECK(sample_ising(config).branch_taken == Branch::direct);

    // forcing direct deep in the cold phase hits the cap
    config.beta = 2.5;
    config.side = 6;
    config.cftp.max_total_updates = 100000;
    CHECK_THROWS_AS(sample_ising(config), CoalescenceCapExceeded);

    config.branch = Branch::dual;
    config.boundary = Boundary::plus;
    CHECK_THROWS_AS(sample_ising(config), std::invalid_argument);
}

TEST_CASE("determinism across the full pipeline") {
    for (double beta : {0.5, 1.3}) {
        SamplerConfig config;
        config.side = 4;
        config.beta = beta;
        config.seed = 314159;
        SampleResult a = sample_ising(config);
        SampleResult b = sample_ising(config);
        CHECK(a.spins == b.spins);
        CHECK(a.branch_taken == b.branch_taken);
        config.seed = 314160;
        SampleResult c = sample_ising(config);
        CHECK(a.spins != c.spins);  // overwhelmingly likely for 16 spins
    }
}

TEST_CASE("infinite temperature gives iid spins") {
    SamplerConfig config;
    config.side = 2;
    config.beta = 0.0;
    std::vector<std::uint64_t> counts(16, 0);
    const int n = 40000;
    for (int i = 0; i < n; ++i) {
        config.seed = 2000 + i;
        ++counts[mask_from_spins(sample_ising(config).spins)];
    }
    DistributionTable uniform;
    uniform.prob.assign(16, 1.0 / 16);
    CHECK(tv_distance(counts, uniform) < 0.02);
}

TEST_CASE("dual route matches the oracle on G_3") {
    LatticeGraph g = build_square_lattice(3);
    double beta = 1.2;
    DistributionTable oracle = enumerate_boltzmann(g, beta, Boundary::free_bc);
    SamplingCheck check = sampling_check(3, beta, Branch::automatic, 30000, 60000, oracle);
    CHECK(check.tv < 0.05);
}

TEST_CASE("sign symmetry of free-boundary samples") {
    // free boundary: the empirical laws of sigma and -sigma agree
    std::vector<std::uint64_t> counts(512, 0);
    SamplerConfig config;
    config.side = 3;
    config.beta = 1.0;
    const int n = 30000;
    for (int i = 0; i < n; ++i) {
        config.seed = 7000000 + i;
        ++counts[mask_from_spins(sample_ising(config).spins)];
    }
    double asymmetry = 0.0;
    for (std::size_t m = 0; m < 512; ++m)
        asymmetry +=
            std::abs(static_cast<double>(counts[m]) - static_cast<double>(counts[511 - m]));
    asymmetry /= 2.0 * n;
    CHECK(asymmetry < 0.05);
}

TEST_CASE("batch output is seed-ordered and reproducible") {
    SamplerConfig config;
    config.side = 3;
    config.beta = 0.7;
    config.seed = 40;
    auto batch = sample_batch(config, 5);
    REQUIRE(batch.size() == 5);
    for (int i = 0; i < 5; ++i) {
        SamplerConfig single = config;
        single.seed = 40 + i;
        CHECK(batch[i].spins == sample_ising(single).spins);
    }
}
