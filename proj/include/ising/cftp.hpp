#pragma once

#include <cassert>
#include <cstdint>
#include <optional>
#include <stdexcept>

#include "ising/lattice.hpp"
#include "ising/rng.hpp"
#include "ising/spin.hpp"

namespace ising {

struct CoalescenceCapExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CftpResult {
    SpinConfiguration sample;
    int epochs_used = 0;
    std::uint64_t total_updates = 0;  // single-site updates across all epochs, both chains
};

struct CftpOptions {
    std::uint64_t max_total_updates = std::uint64_t{1} << 30;
    std::optional<int> max_epoch;
};

inline bool coalesced(const SpinConfiguration& bottom, const SpinConfiguration& top) {
    if (bottom.size() != top.size())
        throw std::invalid_argument("coalesced: configuration length mismatch");
    return bottom == top;
}

// Monotone coupling from the past with epoch doubling. Epoch t runs both
// chains from time -(2^t - 1): the bottom chain from all-minus, the top
// from all-plus, applying the grand-coupling update with schedule.draw(s)
// at each step s in {-(2^t - 1)+1, ..., 0}. Overlapping times across
// epochs reuse identical draws, so the common state at coalescence is an
// exact draw from pi_beta (free) or pi_beta^{+/-}.
inline CftpResult cftp_sample(const LatticeGraph& g, double beta, Boundary bc,
                              const RandomnessSchedule& schedule, const CftpOptions& opts = {}) {
    if (g.vertex_count < 1) throw std::invalid_argument("cftp_sample: empty graph");
    if (beta < 0) throw std::invalid_argument("cftp_sample: beta must be >= 0");
    HeatBathTable table(beta);

    CftpResult result;
    for (int epoch = 1;; ++epoch) {
        std::int64_t span = (std::int64_t{1} << epoch) - 1;
        if (opts.max_epoch && epoch > *opts.max_epoch)
            throw CoalescenceCapExceeded("cftp_sample: epoch cap exceeded");
        if (result.total_updates + 2 * static_cast<std::uint64_t>(span) > opts.max_total_updates)
            throw CoalescenceCapExceeded("cftp_sample: update cap exceeded");

        SpinConfiguration bottom = all_spins(g.vertex_count, -1);
        SpinConfiguration top = all_spins(g.vertex_count, 1);
        for (std::int64_t s = -span + 1; s <= 0; ++s) {
            auto [v, u] = schedule.draw(s);
            heat_bath_update(g, bottom, v, u, table, bc);
            heat_bath_update(g, top, v, u, table, bc);
            assert(spin_leq(bottom, top));
        }
        result.total_updates += 2 * static_cast<std::uint64_t>(span);
        result.epochs_used = epoch;
        if (coalesced(bottom, top)) {
            result.sample = std::move(top);
            return result;
        }
    }
}

}  // namespace ising
