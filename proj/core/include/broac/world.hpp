#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "broac/type_registry.hpp"

namespace broac {

using EntityIndex = std::uint32_t;
inline constexpr EntityIndex kNoEntity = 0xFFFFFFFFu;
inline constexpr std::string_view kAnonymousId = "anonymous";

struct Entity {
    std::string id;
    TypeId type = 0;
    EntityIndex creator = kNoEntity;
    bool alive = true;
};

struct MembershipEdge {
    EntityIndex collection = kNoEntity;
    EntityIndex member = kNoEntity;
    bool enabled = false;
};

struct WorldOptions {
    bool anonymous_enabled = true;
};

/// Entities and membership edges, plus the derived recursive-membership
/// closure with enabled-path tracking.
///
/// Two closure variants are maintained: plain reachability over membership
/// edges, and reachability restricted to paths whose every edge has
/// `permission_enabled=true`. Cycles are legal; closure is reachability via
/// one or more edges, so a collection on a cycle contains itself.
///
/// Mutation here is structural only; the ability guards of the permission
/// model live in Engine. Single writer, many readers.
class World {
public:
    World(const TypeRegistry& registry, WorldOptions options = {});

    const TypeRegistry& registry() const { return *registry_; }
    bool anonymous_enabled() const { return options_.anonymous_enabled; }
    /// Index of the reserved `anonymous` agent, if enabled.
    std::optional<EntityIndex> anonymous() const;

    // -- entities ------------------------------------------------------

    EntityIndex add_entity(const std::string& id, const std::string& type,
                           std::optional<EntityIndex> creator = std::nullopt);
    /// Removes the entity and every membership edge touching it. Permission
    /// cascade is the Engine's job.
    void remove_entity(EntityIndex e);

    bool has_entity(std::string_view id) const;
    EntityIndex index_of(std::string_view id) const;  // throws if unknown
    const Entity& entity(EntityIndex e) const;
    bool alive(EntityIndex e) const;

    bool is_agent(EntityIndex e) const;
    bool is_collection(EntityIndex e) const;

    /// Total slots, live or dead; iterate with alive().
    std::size_t entity_slots() const { return entities_.size(); }
    std::size_t live_count() const { return live_count_; }
    std::vector<EntityIndex> live_entities() const;

    // -- membership edges ----------------------------------------------

    void add_edge(EntityIndex collection, EntityIndex member, bool enabled);
    void set_edge_enabled(EntityIndex collection, EntityIndex member, bool enabled);
    void remove_edge(EntityIndex collection, EntityIndex member);
    bool has_edge(EntityIndex collection, EntityIndex member) const;
    bool edge_enabled(EntityIndex collection, EntityIndex member) const;

    struct Edge {
        EntityIndex member;
        bool enabled;
    };
    /// Raw outgoing edges of a collection, unexpanded. This is the surface
    /// the brute-force oracle works from.
    const std::vector<Edge>& edges_of(EntityIndex collection) const;
    std::vector<MembershipEdge> all_edges() const;

    // -- derived closure -----------------------------------------------

    /// Direct and indirect members of the collection.
    const std::unordered_set<EntityIndex>& recursive_members(EntityIndex collection) const;
    /// Members reachable along some path whose edges are all enabled.
    const std::unordered_set<EntityIndex>& enabled_recursive_members(EntityIndex collection) const;

    bool in_recursive(EntityIndex collection, EntityIndex member) const;
    bool in_enabled_recursive(EntityIndex collection, EntityIndex member) const;

    /// Collections whose recursive closure contains `e` (subject-side index).
    const std::vector<EntityIndex>& containers_of(EntityIndex e) const;
    /// Collections whose enabled closure contains `e` (object-side index).
    const std::vector<EntityIndex>& enabled_containers_of(EntityIndex e) const;

private:
    void require_alive(EntityIndex e, const char* role) const;
    void ensure_closure() const;
    void recompute_closure() const;

    const TypeRegistry* registry_;
    WorldOptions options_;
    std::vector<Entity> entities_;
    std::unordered_map<std::string, EntityIndex> by_id_;
    std::size_t live_count_ = 0;
    std::optional<EntityIndex> anonymous_;

    std::vector<std::vector<Edge>> out_edges_;  // indexed by collection

    // Closure caches, rebuilt lazily after any structural mutation.
    mutable bool closure_dirty_ = true;
    mutable std::vector<std::unordered_set<EntityIndex>> closure_;
    mutable std::vector<std::unordered_set<EntityIndex>> enabled_closure_;
    mutable std::vector<std::vector<EntityIndex>> containers_;
    mutable std::vector<std::vector<EntityIndex>> enabled_containers_;
};

}  // namespace broac
