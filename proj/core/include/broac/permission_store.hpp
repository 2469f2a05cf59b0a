#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "broac/permission.hpp"
#include "broac/world.hpp"

namespace broac {

/// A permission paired with its precedence level.
struct RelevantPermission {
    const Permission* permission;
    int level;
};

struct RelevantGlobalPermission {
    const GlobalPermission* permission;
    int level;
};

/// Store of signed permission relation objects.
///
/// The key (subject, object, ability) is unique: putting a permission with an
/// existing key replaces the stored sign rather than coexisting with it.
/// Relevance queries answer which stored permissions bear on an
/// (agent, item, ability) request, each with its Table-style level.
class PermissionStore {
public:
    /// Inserts or, when the key exists, overwrites the sign. Validates that
    /// the ability is an item ability of some registered type, that One
    /// subjects are agents, and that Some targets are collections.
    const Permission& put(const World& world, const Permission& p);
    const GlobalPermission& put_global(const World& world, const GlobalPermission& p);

    std::size_t size() const { return items_.size(); }
    std::size_t global_size() const { return globals_.size(); }
    const std::vector<Permission>& item_permissions() const { return items_; }
    const std::vector<GlobalPermission>& global_permissions() const { return globals_; }

    bool contains(const SubjectSpec& s, const ObjectSpec& o, std::string_view ability) const;

    /// Drops every permission whose subject or object references `e`
    /// (entity-deletion cascade).
    void erase_referencing(EntityIndex e);

    /// Permissions bearing on (agent, item, ability): the ability matches
    /// exactly or via `do_anything`; the subject covers the agent (One match,
    /// recursive membership for Some, or All); the object covers the item
    /// (One match, enabled recursive membership for Some, or All).
    std::vector<RelevantPermission> relevant_item_permissions(const World& world,
                                                              EntityIndex agent,
                                                              EntityIndex item,
                                                              std::string_view ability) const;

    /// Global permissions bearing on (agent, ability), levels 1..3.
    std::vector<RelevantGlobalPermission> relevant_global_permissions(const World& world,
                                                                      EntityIndex agent,
                                                                      std::string_view ability) const;

    /// True iff the subject spec covers the agent. Some-subject matching uses
    /// plain recursive membership; the enabled flag gates only the object side.
    static bool subject_matches(const World& world, const SubjectSpec& s, EntityIndex agent);
    /// True iff the object spec covers the item; Some-object matching follows
    /// only all-enabled membership paths.
    static bool object_matches(const World& world, const ObjectSpec& o, EntityIndex item);

private:
    struct Key {
        std::uint8_t skind, okind;
        EntityIndex starget, otarget;
        std::string ability;
        friend bool operator==(const Key&, const Key&) = default;
    };
    struct KeyHash {
        std::size_t operator()(const Key& k) const;
    };
    static Key key_of(const Permission& p);

    struct GlobalKey {
        std::uint8_t skind;
        EntityIndex starget;
        std::string ability;
        friend bool operator==(const GlobalKey&, const GlobalKey&) = default;
    };
    struct GlobalKeyHash {
        std::size_t operator()(const GlobalKey& k) const;
    };

    void validate_subject(const World& world, const SubjectSpec& s) const;

    std::vector<Permission> items_;
    std::unordered_map<Key, std::size_t, KeyHash> index_;
    std::vector<GlobalPermission> globals_;
    std::unordered_map<GlobalKey, std::size_t, GlobalKeyHash> global_index_;
};

}  // namespace broac
