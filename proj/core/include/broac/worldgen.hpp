#pragma once

#include <cstdint>
#include <memory>

#include "broac/engine.hpp"

namespace broac {

/// Shape of a generated site: per-user item and permission ratios. The same
/// seed and parameters always produce the same world.
struct WorldGenParams {
    std::size_t users = 10;
    std::size_t items_per_user = 12;
    std::size_t permissions_per_user = 24;
    std::uint64_t seed = 1;
    /// Approximate fraction of items made visible to the anonymous agent via
    /// an AllToOne "view Item.name" allow.
    double anonymous_visible_fraction = 0.5;
};

/// Builds a site-shaped world: one Person agent per user plus their documents
/// and collections, creator defaults, team collections of agents, mixed
/// enabled flags, and random permissions across all nine levels and both
/// signs. Construction runs as the system actor.
std::unique_ptr<Engine> random_world(const WorldGenParams& params);

/// Bounds for the small adversarial worlds used in equivalence fuzzing.
struct FuzzParams {
    std::size_t max_agents = 8;
    std::size_t max_items = 12;
    std::size_t max_collections = 5;
    std::size_t max_permissions = 30;
};

/// Small random world with arbitrary membership graphs (nesting and cycles
/// included), mixed enabled flags, and permissions over all shapes, abilities
/// and signs. No creator defaults, so the permission mix is fully random.
std::unique_ptr<Engine> random_small_world(std::uint64_t seed, const FuzzParams& params = {});

}  // namespace broac
