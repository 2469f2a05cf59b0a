#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "broac/permission_store.hpp"
#include "broac/resolver.hpp"
#include "broac/type_registry.hpp"
#include "broac/world.hpp"

namespace broac {

/// Who performs a mutation: the system (bypasses every guard, used for
/// bootstrap and test setup) or an agent subject to the metalevel rules.
struct Actor {
    static Actor system() { return Actor{true, kNoEntity}; }
    static Actor agent(EntityIndex a) { return Actor{false, a}; }

    bool is_system = true;
    EntityIndex id = kNoEntity;
};

struct CreateOptions {
    /// Suppresses the automatic OneToOne do_anything permission between the
    /// creator and the new entity.
    bool nodefault = false;
};

/// Composition root: owns the registry, world and store, and applies the
/// metalevel guards on every mutation:
///   - creating an entity needs the global `create <Type>` ability;
///   - permissions over One(i)/Some(c) need do_anything on i/c, over All the
///     global do_anything, and global permissions the global do_anything;
///   - membership changes need modify_membership on the collection (or
///     add_self/remove_self for oneself, direct edges only);
///   - a new membership is enabled only if its actor could do_anything to
///     the member, and only such actors may flip the flag later.
class Engine {
public:
    explicit Engine(WorldOptions options = {});

    // World keeps a pointer into registry_, so the whole aggregate stays put.
    Engine(const Engine&) = delete;
    Engine& operator=(const Engine&) = delete;

    TypeRegistry& registry() { return registry_; }
    const TypeRegistry& registry() const { return registry_; }
    World& world() { return world_; }
    const World& world() const { return world_; }
    PermissionStore& store() { return store_; }
    const PermissionStore& store() const { return store_; }
    Resolver resolver() const { return Resolver(world_, store_); }

    EntityIndex create_entity(const std::string& id, const std::string& type, Actor actor,
                              CreateOptions options = {},
                              std::optional<EntityIndex> creator = std::nullopt);
    /// Cascades: memberships and permissions referencing the entity go with it.
    void remove_entity(EntityIndex e, Actor actor);

    void add_membership(EntityIndex collection, EntityIndex member, Actor actor,
                        std::optional<bool> requested_enabled = std::nullopt);
    void set_permission_enabled(EntityIndex collection, EntityIndex member, bool enabled,
                                Actor actor);
    void remove_membership(EntityIndex collection, EntityIndex member, Actor actor);

    const Permission& set_permission(const SubjectSpec& subject, const ObjectSpec& object,
                                     const std::string& ability, bool allow, Actor actor);
    const GlobalPermission& set_global_permission(const SubjectSpec& subject,
                                                  const std::string& ability, bool allow,
                                                  Actor actor);

    /// do_anything over a specific entity, as the guards use it.
    bool actor_controls(Actor actor, EntityIndex target) const;

private:
    void require_item_ability(Actor actor, EntityIndex target, std::string_view ability,
                              std::string_view action) const;

    TypeRegistry registry_;
    World world_;
    PermissionStore store_;
};

}  // namespace broac
