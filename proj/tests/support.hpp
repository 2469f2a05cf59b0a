#pragma once

#include <random>
#include <unordered_set>
#include <vector>

#include "broac/world.hpp"

namespace broac::test {

// Path-enumeration membership check, written independently of the closure
// maintenance in World: a fresh depth-first walk per query with a visited set
// for cycle safety.
inline bool path_exists(const World& w, EntityIndex from, EntityIndex target, bool enabled_only,
                        std::unordered_set<EntityIndex>& visited) {
    for (const World::Edge& e : w.edges_of(from)) {
        if (enabled_only && !e.enabled) continue;
        if (e.member == target) return true;
        if (!visited.insert(e.member).second) continue;
        if (path_exists(w, e.member, target, enabled_only, visited)) return true;
    }
    return false;
}

inline std::unordered_set<EntityIndex> brute_members(const World& w, EntityIndex collection,
                                                     bool enabled_only) {
    std::unordered_set<EntityIndex> out;
    for (EntityIndex m = 0; m < w.entity_slots(); ++m) {
        if (!w.alive(m)) continue;
        std::unordered_set<EntityIndex> visited{collection};
        if (path_exists(w, collection, m, enabled_only, visited)) out.insert(m);
    }
    return out;
}

// Random membership graph over `nodes` collections plus `leaves` plain items,
// cycles allowed.
inline void random_membership_graph(World& w, std::mt19937_64& rng, std::size_t nodes,
                                    std::size_t leaves, double edge_chance,
                                    std::vector<EntityIndex>* collections_out = nullptr) {
    std::vector<EntityIndex> all;
    std::vector<EntityIndex> collections;
    for (std::size_t i = 0; i < nodes; ++i) {
        EntityIndex c = w.add_entity("n" + std::to_string(i), "Collection");
        collections.push_back(c);
        all.push_back(c);
    }
    for (std::size_t i = 0; i < leaves; ++i)
        all.push_back(w.add_entity("leaf" + std::to_string(i), "Document"));

    for (EntityIndex c : collections) {
        for (EntityIndex m : all) {
            if (m == c) continue;
            if (static_cast<double>(rng() >> 11) * 0x1.0p-53 >= edge_chance) continue;
            w.add_edge(c, m, (rng() & 1) != 0);
        }
    }
    if (collections_out) *collections_out = collections;
}

}  // namespace broac::test
