#include "broac/permission_store.hpp"

#include <algorithm>
#include <functional>

#include "broac/errors.hpp"

namespace broac {

namespace {

const char* kKindNames[3][3] = {
    {"OneToOne", "OneToSome", "OneToAll"},
    {"SomeToOne", "SomeToSome", "SomeToAll"},
    {"AllToOne", "AllToSome", "AllToAll"},
};

std::size_t hash_mix(std::size_t seed, std::size_t v) {
    return seed ^ (v + 0x9e3779b97f4a7c15ull + (seed << 6) + (seed >> 2));
}

}  // namespace

const char* permission_kind_name(SpecKind subject, SpecKind object) {
    return kKindNames[static_cast<int>(subject) - 1][static_cast<int>(object) - 1];
}

const char* global_kind_name(SpecKind subject) {
    switch (subject) {
        case SpecKind::One: return "GlobalOne";
        case SpecKind::Some: return "GlobalSome";
        case SpecKind::All: return "GlobalAll";
    }
    return "GlobalAll";
}

std::size_t PermissionStore::KeyHash::operator()(const Key& k) const {
    std::size_t h = std::hash<std::string>{}(k.ability);
    h = hash_mix(h, k.skind);
    h = hash_mix(h, k.okind);
    h = hash_mix(h, k.starget);
    h = hash_mix(h, k.otarget);
    return h;
}

std::size_t PermissionStore::GlobalKeyHash::operator()(const GlobalKey& k) const {
    std::size_t h = std::hash<std::string>{}(k.ability);
    h = hash_mix(h, k.skind);
    h = hash_mix(h, k.starget);
    return h;
}

PermissionStore::Key PermissionStore::key_of(const Permission& p) {
    return Key{static_cast<std::uint8_t>(p.subject.kind), static_cast<std::uint8_t>(p.object.kind),
               p.subject.target, p.object.target, p.ability};
}

void PermissionStore::validate_subject(const World& world, const SubjectSpec& s) const {
    switch (s.kind) {
        case SpecKind::One:
            if (!world.alive(s.target) || !world.is_agent(s.target))
                throw ValidationError("permission subject must reference a live agent");
            break;
        case SpecKind::Some:
            if (!world.alive(s.target) || !world.is_collection(s.target))
                throw ValidationError("permission subject group must reference a live collection");
            break;
        case SpecKind::All:
            break;
    }
}

const Permission& PermissionStore::put(const World& world, const Permission& p) {
    if (!world.registry().is_known_item_ability(p.ability))
        throw ValidationError("unknown item ability: '" + p.ability + "'");
    validate_subject(world, p.subject);
    switch (p.object.kind) {
        case SpecKind::One:
            if (!world.alive(p.object.target))
                throw ValidationError("permission object must reference a live item");
            break;
        case SpecKind::Some:
            if (!world.alive(p.object.target) || !world.is_collection(p.object.target))
                throw ValidationError("permission object group must reference a live collection");
            break;
        case SpecKind::All:
            break;
    }

    // Same (subject, object, ability) key: the new sign replaces the old one.
    auto [it, inserted] = index_.try_emplace(key_of(p), items_.size());
    if (inserted) {
        items_.push_back(p);
    } else {
        items_[it->second].allow = p.allow;
    }
    return items_[it->second];
}

const GlobalPermission& PermissionStore::put_global(const World& world, const GlobalPermission& p) {
    if (!world.registry().is_global_ability(p.ability))
        throw ValidationError("unknown global ability: '" + p.ability + "'");
    validate_subject(world, p.subject);

    GlobalKey key{static_cast<std::uint8_t>(p.subject.kind), p.subject.target, p.ability};
    auto [it, inserted] = global_index_.try_emplace(key, globals_.size());
    if (inserted) {
        globals_.push_back(p);
    } else {
        globals_[it->second].allow = p.allow;
    }
    return globals_[it->second];
}

bool PermissionStore::contains(const SubjectSpec& s, const ObjectSpec& o,
                               std::string_view ability) const {
    return index_.count(key_of(Permission{s, o, std::string(ability), true})) > 0;
}

void PermissionStore::erase_referencing(EntityIndex e) {
    auto touches = [e](const SubjectSpec& s) { return s.kind != SpecKind::All && s.target == e; };
    std::erase_if(items_, [&](const Permission& p) {
        return touches(p.subject) || (p.object.kind != SpecKind::All && p.object.target == e);
    });
    std::erase_if(globals_, [&](const GlobalPermission& p) { return touches(p.subject); });

    index_.clear();
    for (std::size_t i = 0; i < items_.size(); ++i) index_.emplace(key_of(items_[i]), i);
    global_index_.clear();
    for (std::size_t i = 0; i < globals_.size(); ++i)
        global_index_.emplace(GlobalKey{static_cast<std::uint8_t>(globals_[i].subject.kind),
                                        globals_[i].subject.target, globals_[i].ability},
                              i);
}

bool PermissionStore::subject_matches(const World& world, const SubjectSpec& s, EntityIndex agent) {
    switch (s.kind) {
        case SpecKind::One: return s.target == agent;
        case SpecKind::Some: return world.in_recursive(s.target, agent);
        case SpecKind::All: return true;
    }
    return false;
}

bool PermissionStore::object_matches(const World& world, const ObjectSpec& o, EntityIndex item) {
    switch (o.kind) {
        case SpecKind::One: return o.target == item;
        case SpecKind::Some: return world.in_enabled_recursive(o.target, item);
        case SpecKind::All: return true;
    }
    return false;
}

std::vector<RelevantPermission> PermissionStore::relevant_item_permissions(
    const World& world, EntityIndex agent, EntityIndex item, std::string_view ability) const {
    const Entity& it = world.entity(item);
    if (!world.registry().is_item_ability(it.type, ability))
        throw ValidationError("ability '" + std::string(ability) + "' does not apply to type '" +
                              world.registry().type_name(it.type) + "'");

    std::vector<RelevantPermission> hits;
    for (const Permission& p : items_) {
        if (p.ability != ability && p.ability != kDoAnything) continue;
        if (!subject_matches(world, p.subject, agent)) continue;
        if (!object_matches(world, p.object, item)) continue;
        hits.push_back(RelevantPermission{&p, permission_level(p)});
    }
    return hits;
}

std::vector<RelevantGlobalPermission> PermissionStore::relevant_global_permissions(
    const World& world, EntityIndex agent, std::string_view ability) const {
    if (!world.registry().is_global_ability(ability))
        throw ValidationError("unknown global ability: '" + std::string(ability) + "'");

    std::vector<RelevantGlobalPermission> hits;
    for (const GlobalPermission& p : globals_) {
        if (p.ability != ability && p.ability != kDoAnything) continue;
        if (!subject_matches(world, p.subject, agent)) continue;
        hits.push_back(RelevantGlobalPermission{&p, global_permission_level(p)});
    }
    return hits;
}

}  // namespace broac
