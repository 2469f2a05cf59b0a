#include "broac/oracle.hpp"

#include <vector>

namespace broac::oracle {

namespace {

// Independent copy of the precedence grid, indexed [subject][object] with
// One=0, Some=1, All=2.
constexpr int kLevelGrid[3][3] = {{1, 2, 3}, {4, 5, 6}, {7, 8, 9}};

int axis(SpecKind k) {
    switch (k) {
        case SpecKind::One: return 0;
        case SpecKind::Some: return 1;
        case SpecKind::All: return 2;
    }
    return 2;
}

// Depth-first walk over raw membership edges. With enabled_only the walk may
// only cross enabled edges, so reaching the target means some path exists
// whose edges are all enabled.
bool reachable(const World& world, EntityIndex from, EntityIndex target, bool enabled_only,
               std::vector<char>& visited) {
    if (from >= world.entity_slots()) return false;
    for (const World::Edge& e : world.edges_of(from)) {
        if (enabled_only && !e.enabled) continue;
        if (e.member == target) return true;
        if (visited[e.member]) continue;
        visited[e.member] = 1;
        if (reachable(world, e.member, target, enabled_only, visited)) return true;
    }
    return false;
}

bool member_by_paths(const World& world, EntityIndex collection, EntityIndex target,
                     bool enabled_only) {
    std::vector<char> visited(world.entity_slots(), 0);
    visited[collection] = 1;
    return reachable(world, collection, target, enabled_only, visited);
}

bool ability_matches(std::string_view have, std::string_view want) {
    return have == want || have == kDoAnything;
}

bool subject_covers(const World& world, const SubjectSpec& s, EntityIndex agent) {
    switch (s.kind) {
        case SpecKind::One: return s.target == agent;
        case SpecKind::Some: return member_by_paths(world, s.target, agent, false);
        case SpecKind::All: return true;
    }
    return false;
}

bool object_covers(const World& world, const ObjectSpec& o, EntityIndex item) {
    switch (o.kind) {
        case SpecKind::One: return o.target == item;
        case SpecKind::Some: return member_by_paths(world, o.target, item, true);
        case SpecKind::All: return true;
    }
    return false;
}

struct SignedLevel {
    int level;
    bool allow;
};

// The rule text, verbatim: the agent has the ability iff (a) some relevant
// permission allows at some level and (b) no relevant permission denies at a
// level with the same or a lower number.
bool literal_rule(const std::vector<SignedLevel>& relevant) {
    for (const SignedLevel& a : relevant) {
        if (!a.allow) continue;
        bool beaten = false;
        for (const SignedLevel& d : relevant) {
            if (!d.allow && d.level <= a.level) {
                beaten = true;
                break;
            }
        }
        if (!beaten) return true;
    }
    return false;
}

}  // namespace

bool resolve_global_ability(const World& world, const PermissionStore& store, EntityIndex agent,
                            std::string_view ability) {
    std::vector<SignedLevel> relevant;
    for (const GlobalPermission& p : store.global_permissions()) {
        if (!ability_matches(p.ability, ability)) continue;
        if (!subject_covers(world, p.subject, agent)) continue;
        relevant.push_back(SignedLevel{axis(p.subject.kind) + 1, p.allow});
    }
    return literal_rule(relevant);
}

bool resolve_item_ability(const World& world, const PermissionStore& store, EntityIndex agent,
                          EntityIndex item, std::string_view ability) {
    // Holding the global do_anything grants every item ability outright.
    if (resolve_global_ability(world, store, agent, kDoAnything)) return true;

    std::vector<SignedLevel> relevant;
    for (const Permission& p : store.item_permissions()) {
        if (!ability_matches(p.ability, ability)) continue;
        if (!subject_covers(world, p.subject, agent)) continue;
        if (!object_covers(world, p.object, item)) continue;
        relevant.push_back(SignedLevel{kLevelGrid[axis(p.subject.kind)][axis(p.object.kind)], p.allow});
    }
    return literal_rule(relevant);
}

}  // namespace broac::oracle
