#include "broac/world.hpp"

#include <algorithm>
#include <deque>

#include "broac/errors.hpp"

namespace broac {

namespace {

bool valid_identifier(std::string_view id) {
    if (id.empty()) return false;
    for (char c : id) {
        bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                  (c >= '0' && c <= '9') || c == '_';
        if (!ok) return false;
    }
    return true;
}

}  // namespace

World::World(const TypeRegistry& registry, WorldOptions options)
    : registry_(&registry), options_(options) {
    if (options_.anonymous_enabled)
        anonymous_ = add_entity(std::string(kAnonymousId), "Agent");
}

std::optional<EntityIndex> World::anonymous() const {
    return anonymous_;
}

EntityIndex World::add_entity(const std::string& id, const std::string& type,
                              std::optional<EntityIndex> creator) {
    if (!valid_identifier(id))
        throw ValidationError("invalid entity id: '" + id + "'");
    if (by_id_.count(id))
        throw ValidationError("duplicate entity id: " + id);
    TypeId tid = registry_->type_id(type);  // throws on unknown type
    if (creator && !is_agent(*creator))
        throw ValidationError("creator of '" + id + "' is not an agent");

    EntityIndex e = static_cast<EntityIndex>(entities_.size());
    entities_.push_back(Entity{id, tid, creator.value_or(kNoEntity), true});
    out_edges_.emplace_back();
    by_id_.emplace(id, e);
    ++live_count_;
    closure_dirty_ = true;
    return e;
}

void World::remove_entity(EntityIndex e) {
    require_alive(e, "entity");
    if (anonymous_ && *anonymous_ == e)
        throw ValidationError("the reserved anonymous agent cannot be removed");
    by_id_.erase(entities_[e].id);
    entities_[e].alive = false;
    --live_count_;
    out_edges_[e].clear();
    for (auto& edges : out_edges_)
        std::erase_if(edges, [e](const Edge& edge) { return edge.member == e; });
    closure_dirty_ = true;
}

bool World::has_entity(std::string_view id) const {
    return by_id_.count(std::string(id)) > 0;
}

EntityIndex World::index_of(std::string_view id) const {
    auto it = by_id_.find(std::string(id));
    if (it == by_id_.end())
        throw ValidationError("unknown entity: " + std::string(id));
    return it->second;
}

const Entity& World::entity(EntityIndex e) const {
    require_alive(e, "entity");
    return entities_[e];
}

bool World::alive(EntityIndex e) const {
    return e < entities_.size() && entities_[e].alive;
}

bool World::is_agent(EntityIndex e) const {
    require_alive(e, "entity");
    return registry_->derives_from(entities_[e].type, registry_->agent_type_id());
}

bool World::is_collection(EntityIndex e) const {
    require_alive(e, "entity");
    return registry_->derives_from(entities_[e].type, registry_->collection_type_id());
}

std::vector<EntityIndex> World::live_entities() const {
    std::vector<EntityIndex> out;
    out.reserve(live_count_);
    for (EntityIndex e = 0; e < entities_.size(); ++e)
        if (entities_[e].alive) out.push_back(e);
    return out;
}

void World::add_edge(EntityIndex collection, EntityIndex member, bool enabled) {
    require_alive(collection, "collection");
    require_alive(member, "member");
    if (!is_collection(collection))
        throw ValidationError("'" + entities_[collection].id + "' is not a collection");
    if (collection == member)
        throw ValidationError("self-membership is not allowed: " + entities_[collection].id);
    if (has_edge(collection, member))
        throw ValidationError("duplicate membership: " + entities_[collection].id + " already contains " +
                              entities_[member].id);
    out_edges_[collection].push_back(Edge{member, enabled});
    closure_dirty_ = true;
}

void World::set_edge_enabled(EntityIndex collection, EntityIndex member, bool enabled) {
    require_alive(collection, "collection");
    require_alive(member, "member");
    for (Edge& edge : out_edges_[collection]) {
        if (edge.member == member) {
            if (edge.enabled != enabled) {
                edge.enabled = enabled;
                closure_dirty_ = true;
            }
            return;
        }
    }
    throw ValidationError("no membership of " + entities_[member].id + " in " +
                          entities_[collection].id);
}

void World::remove_edge(EntityIndex collection, EntityIndex member) {
    require_alive(collection, "collection");
    auto& edges = out_edges_[collection];
    auto it = std::find_if(edges.begin(), edges.end(),
                           [member](const Edge& e) { return e.member == member; });
    if (it == edges.end())
        throw ValidationError("no membership of " + entities_.at(member).id + " in " +
                              entities_[collection].id);
    edges.erase(it);
    closure_dirty_ = true;
}

bool World::has_edge(EntityIndex collection, EntityIndex member) const {
    if (collection >= out_edges_.size()) return false;
    for (const Edge& e : out_edges_[collection])
        if (e.member == member) return true;
    return false;
}

bool World::edge_enabled(EntityIndex collection, EntityIndex member) const {
    for (const Edge& e : out_edges_.at(collection))
        if (e.member == member) return e.enabled;
    throw ValidationError("no such membership edge");
}

const std::vector<World::Edge>& World::edges_of(EntityIndex collection) const {
    return out_edges_.at(collection);
}

std::vector<MembershipEdge> World::all_edges() const {
    std::vector<MembershipEdge> out;
    for (EntityIndex c = 0; c < out_edges_.size(); ++c)
        for (const Edge& e : out_edges_[c])
            out.push_back(MembershipEdge{c, e.member, e.enabled});
    return out;
}

const std::unordered_set<EntityIndex>& World::recursive_members(EntityIndex collection) const {
    require_alive(collection, "collection");
    if (!is_collection(collection))
        throw ValidationError("'" + entities_[collection].id + "' is not a collection");
    ensure_closure();
    return closure_[collection];
}

const std::unordered_set<EntityIndex>& World::enabled_recursive_members(EntityIndex collection) const {
    require_alive(collection, "collection");
    if (!is_collection(collection))
        throw ValidationError("'" + entities_[collection].id + "' is not a collection");
    ensure_closure();
    return enabled_closure_[collection];
}

bool World::in_recursive(EntityIndex collection, EntityIndex member) const {
    ensure_closure();
    return collection < closure_.size() && closure_[collection].count(member) > 0;
}

bool World::in_enabled_recursive(EntityIndex collection, EntityIndex member) const {
    ensure_closure();
    return collection < enabled_closure_.size() && enabled_closure_[collection].count(member) > 0;
}

const std::vector<EntityIndex>& World::containers_of(EntityIndex e) const {
    require_alive(e, "entity");
    ensure_closure();
    return containers_[e];
}

const std::vector<EntityIndex>& World::enabled_containers_of(EntityIndex e) const {
    require_alive(e, "entity");
    ensure_closure();
    return enabled_containers_[e];
}

void World::require_alive(EntityIndex e, const char* role) const {
    if (!alive(e))
        throw ValidationError(std::string("unknown or deleted ") + role);
}

void World::ensure_closure() const {
    if (closure_dirty_) recompute_closure();
}

// Full recomputation: breadth-first reachability from every collection, once
// over all edges and once over enabled edges only. Affected-component
// incremental maintenance is an optimization this scale does not need.
void World::recompute_closure() const {
    const std::size_t n = entities_.size();
    closure_.assign(n, {});
    enabled_closure_.assign(n, {});
    containers_.assign(n, {});
    enabled_containers_.assign(n, {});

    std::deque<EntityIndex> queue;
    std::vector<char> seen(n);

    for (EntityIndex c = 0; c < n; ++c) {
        if (!entities_[c].alive || out_edges_[c].empty()) continue;

        // Plain reachability (membership edges regardless of flag).
        std::fill(seen.begin(), seen.end(), 0);
        queue.assign(1, c);
        while (!queue.empty()) {
            EntityIndex cur = queue.front();
            queue.pop_front();
            if (cur >= out_edges_.size()) continue;
            for (const Edge& e : out_edges_[cur]) {
                if (seen[e.member]) continue;
                seen[e.member] = 1;
                closure_[c].insert(e.member);
                containers_[e.member].push_back(c);
                queue.push_back(e.member);
            }
        }

        // Enabled reachability: a member qualifies iff some path from c to it
        // consists solely of enabled edges, i.e. reachability in the
        // enabled-edge subgraph.
        std::fill(seen.begin(), seen.end(), 0);
        queue.assign(1, c);
        while (!queue.empty()) {
            EntityIndex cur = queue.front();
            queue.pop_front();
            if (cur >= out_edges_.size()) continue;
            for (const Edge& e : out_edges_[cur]) {
                if (!e.enabled || seen[e.member]) continue;
                seen[e.member] = 1;
                enabled_closure_[c].insert(e.member);
                enabled_containers_[e.member].push_back(c);
                queue.push_back(e.member);
            }
        }
    }
    closure_dirty_ = false;
}

}  // namespace broac
