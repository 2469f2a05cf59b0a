#pragma once

#include <cstdint>
#include <string>

#include "broac/worldgen.hpp"

namespace broac {

struct EquivalenceReport {
    std::size_t worlds = 0;
    std::size_t decisions = 0;
    std::size_t divergences = 0;
    std::string first_divergence;  // human-readable locator, empty when clean
};

/// Generates `trials` seeded small worlds and compares the resolver against
/// the literal-rule oracle on every (agent, item, applicable ability) triple
/// and every (agent, global ability) pair.
EquivalenceReport run_equivalence(std::size_t trials, std::uint64_t seed,
                                  const FuzzParams& params = {});

}  // namespace broac
