#include "broac/engine.hpp"

#include "broac/errors.hpp"

namespace broac {

Engine::Engine(WorldOptions options) : registry_(), world_(registry_, options) {}

bool Engine::actor_controls(Actor actor, EntityIndex target) const {
    if (actor.is_system) return true;
    return resolver().resolve_item_ability(actor.id, target, kDoAnything).allowed;
}

void Engine::require_item_ability(Actor actor, EntityIndex target, std::string_view ability,
                                  std::string_view action) const {
    if (actor.is_system) return;
    if (!resolver().resolve_item_ability(actor.id, target, ability).allowed)
        throw AuthorizationError("agent '" + world_.entity(actor.id).id + "' may not " +
                                 std::string(action) + " '" + world_.entity(target).id +
                                 "' (needs " + std::string(ability) + ")");
}

EntityIndex Engine::create_entity(const std::string& id, const std::string& type, Actor actor,
                                  CreateOptions options, std::optional<EntityIndex> creator) {
    if (!registry_.has_type(type))
        throw ValidationError("unknown type: " + type);
    if (!actor.is_system) {
        if (!resolver().resolve_global_ability(actor.id, "create " + type).allowed)
            throw AuthorizationError("agent '" + world_.entity(actor.id).id +
                                     "' lacks the global ability 'create " + type + "'");
        if (!creator) creator = actor.id;
    }
    EntityIndex e = world_.add_entity(id, type, creator);
    if (!options.nodefault && creator) {
        store_.put(world_, Permission{SubjectSpec::one(*creator), ObjectSpec::one(e),
                                      std::string(kDoAnything), true});
    }
    return e;
}

void Engine::remove_entity(EntityIndex e, Actor actor) {
    require_item_ability(actor, e, "delete", "delete");
    world_.remove_entity(e);
    store_.erase_referencing(e);
}

void Engine::add_membership(EntityIndex collection, EntityIndex member, Actor actor,
                            std::optional<bool> requested_enabled) {
    if (!actor.is_system) {
        bool may_modify =
            resolver().resolve_item_ability(actor.id, collection, "modify_membership").allowed;
        bool may_add_self =
            member == actor.id &&
            resolver().resolve_item_ability(actor.id, collection, "add_self").allowed;
        if (!may_modify && !may_add_self)
            throw AuthorizationError("agent '" + world_.entity(actor.id).id +
                                     "' may not modify membership of '" +
                                     world_.entity(collection).id + "'");
    }
    // The flag only sticks for actors with power over the member; anyone else
    // gets a disabled edge no matter what they asked for, which is what makes
    // the collect-and-grant loophole dead on arrival.
    bool enabled = requested_enabled.value_or(true) && actor_controls(actor, member);
    world_.add_edge(collection, member, enabled);
}

void Engine::set_permission_enabled(EntityIndex collection, EntityIndex member, bool enabled,
                                    Actor actor) {
    if (!world_.has_edge(collection, member))
        throw ValidationError("no membership of " + world_.entity(member).id + " in " +
                              world_.entity(collection).id);
    if (!actor_controls(actor, member))
        throw AuthorizationError("agent '" + world_.entity(actor.id).id +
                                 "' may not change permission_enabled for '" +
                                 world_.entity(member).id + "' (needs do_anything on the member)");
    world_.set_edge_enabled(collection, member, enabled);
}

void Engine::remove_membership(EntityIndex collection, EntityIndex member, Actor actor) {
    if (!actor.is_system) {
        bool may_modify =
            resolver().resolve_item_ability(actor.id, collection, "modify_membership").allowed;
        // remove_self is honored for direct edges only.
        bool may_remove_self =
            member == actor.id && world_.has_edge(collection, member) &&
            resolver().resolve_item_ability(actor.id, collection, "remove_self").allowed;
        if (!may_modify && !may_remove_self)
            throw AuthorizationError("agent '" + world_.entity(actor.id).id +
                                     "' may not modify membership of '" +
                                     world_.entity(collection).id + "'");
    }
    world_.remove_edge(collection, member);
}

const Permission& Engine::set_permission(const SubjectSpec& subject, const ObjectSpec& object,
                                         const std::string& ability, bool allow, Actor actor) {
    if (!actor.is_system) {
        switch (object.kind) {
            case SpecKind::One:
                require_item_ability(actor, object.target, kDoAnything, "set permissions on");
                break;
            case SpecKind::Some:
                require_item_ability(actor, object.target, kDoAnything, "set permissions on");
                break;
            case SpecKind::All:
                if (!resolver().resolve_global_ability(actor.id, kDoAnything).allowed)
                    throw AuthorizationError("agent '" + world_.entity(actor.id).id +
                                             "' needs the global do_anything ability to set "
                                             "permissions over all items");
                break;
        }
    }
    return store_.put(world_, Permission{subject, object, ability, allow});
}

const GlobalPermission& Engine::set_global_permission(const SubjectSpec& subject,
                                                      const std::string& ability, bool allow,
                                                      Actor actor) {
    if (!actor.is_system && !resolver().resolve_global_ability(actor.id, kDoAnything).allowed)
        throw AuthorizationError("agent '" + world_.entity(actor.id).id +
                                 "' needs the global do_anything ability to set global permissions");
    return store_.put_global(world_, GlobalPermission{subject, ability, allow});
}

}  // namespace broac
