#pragma once

#include <compare>
#include <cstdint>
#include <string>

#include "broac/world.hpp"

namespace broac {

enum class SpecKind : std::uint8_t { One = 1, Some = 2, All = 3 };

/// Subject axis: a single agent, the members of a collection of agents, or
/// all agents.
struct SubjectSpec {
    SpecKind kind = SpecKind::All;
    EntityIndex target = kNoEntity;  // agent for One, collection for Some

    static SubjectSpec one(EntityIndex agent) { return {SpecKind::One, agent}; }
    static SubjectSpec some(EntityIndex collection) { return {SpecKind::Some, collection}; }
    static SubjectSpec all() { return {SpecKind::All, kNoEntity}; }

    friend bool operator==(const SubjectSpec&, const SubjectSpec&) = default;
};

/// Object axis: a single item, the items in a collection, or all items.
struct ObjectSpec {
    SpecKind kind = SpecKind::All;
    EntityIndex target = kNoEntity;  // item for One, collection for Some

    static ObjectSpec one(EntityIndex item) { return {SpecKind::One, item}; }
    static ObjectSpec some(EntityIndex collection) { return {SpecKind::Some, collection}; }
    static ObjectSpec all() { return {SpecKind::All, kNoEntity}; }

    friend bool operator==(const ObjectSpec&, const ObjectSpec&) = default;
};

/// A signed permission relation object. `allow=false` is a prohibition.
struct Permission {
    SubjectSpec subject;
    ObjectSpec object;
    std::string ability;
    bool allow = true;
};

/// Subject-only permission carrying a global ability.
struct GlobalPermission {
    SubjectSpec subject;
    std::string ability;
    bool allow = true;
};

/// Precedence level 1..9 of an item permission: subject and object ranks
/// One=1, Some=2, All=3 combined row-major, so OneToOne=1 .. AllToAll=9.
/// Lower numbers take precedence.
inline int permission_level(SpecKind subject, SpecKind object) {
    return 3 * (static_cast<int>(subject) - 1) + static_cast<int>(object);
}

inline int permission_level(const Permission& p) {
    return permission_level(p.subject.kind, p.object.kind);
}

/// Global ladder: One=1, Some=2, All=3.
inline int global_permission_level(SpecKind subject) {
    return static_cast<int>(subject);
}

inline int global_permission_level(const GlobalPermission& p) {
    return global_permission_level(p.subject.kind);
}

/// Table-style name of the permission shape, e.g. "OneToSome".
const char* permission_kind_name(SpecKind subject, SpecKind object);
/// Shape name of a global permission: "GlobalOne", "GlobalSome", "GlobalAll".
const char* global_kind_name(SpecKind subject);

}  // namespace broac
