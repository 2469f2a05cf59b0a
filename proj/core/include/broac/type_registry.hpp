#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace broac {

using TypeId = std::uint32_t;

inline constexpr std::string_view kDoAnything = "do_anything";

/// Item-type hierarchy plus the ability vocabulary each type introduces.
///
/// Types form a multiple-inheritance DAG rooted at `Item`. A type's effective
/// item-ability set is the union of its own abilities and every ancestor's.
/// Registering a type `T` also registers the global ability `create T`.
/// The registry is write-once during world construction and read-only after.
class TypeRegistry {
public:
    /// Registers the core built-in types (Item, Agent, Person, Collection,
    /// Group, Document, TextDocument) with their ability rows. Further leaf
    /// types come from scenario files.
    TypeRegistry();

    /// Registers a new type. Parents must already exist; passing no parents
    /// derives from Item. Rejects duplicate names and unknown parents (a
    /// self or forward parent reference is a cycle and reported as such).
    TypeId define_type(const std::string& name,
                       const std::vector<std::string>& parents,
                       const std::vector<std::string>& item_abilities,
                       const std::vector<std::string>& global_abilities);

    bool has_type(std::string_view name) const;
    TypeId type_id(std::string_view name) const;  // throws ValidationError if unknown
    const std::string& type_name(TypeId id) const;
    std::size_t type_count() const { return types_.size(); }

    /// True iff `ability` is in the effective item-ability set of `type`
    /// (own or inherited). Unknown ability strings are simply absent, not
    /// an error; an unknown type is.
    bool is_item_ability(std::string_view type, std::string_view ability) const;
    bool is_item_ability(TypeId type, std::string_view ability) const;

    /// Abilities the type declares itself, without inherited ones.
    const std::set<std::string>& own_item_abilities(std::string_view type) const;
    /// Own plus inherited abilities.
    const std::set<std::string>& effective_item_abilities(std::string_view type) const;
    const std::set<std::string>& effective_item_abilities(TypeId type) const;

    /// True iff `type` equals `ancestor` or derives from it (transitively).
    bool derives_from(TypeId type, TypeId ancestor) const;
    bool derives_from(std::string_view type, std::string_view ancestor) const;

    bool is_global_ability(std::string_view ability) const;
    /// `do_anything`, `create <T>` for every registered T, plus declared extras.
    std::set<std::string> global_ability_vocabulary() const;

    /// True iff `ability` appears in some type's effective item-ability set.
    bool is_known_item_ability(std::string_view ability) const;

    TypeId item_type_id() const { return item_id_; }
    TypeId agent_type_id() const { return agent_id_; }
    TypeId collection_type_id() const { return collection_id_; }

private:
    struct TypeInfo {
        std::string name;
        std::vector<TypeId> parents;
        std::set<std::string> own_item_abilities;
        std::set<std::string> effective_item_abilities;
        std::vector<bool> ancestors;  // indexed by TypeId, includes self
    };

    TypeId register_type(const std::string& name,
                         const std::vector<TypeId>& parents,
                         const std::vector<std::string>& item_abilities,
                         const std::vector<std::string>& global_abilities);
    const TypeInfo& info(std::string_view name) const;

    std::vector<TypeInfo> types_;
    std::unordered_map<std::string, TypeId> by_name_;
    std::set<std::string> global_abilities_;
    std::set<std::string> known_item_abilities_;
    TypeId item_id_ = 0;
    TypeId agent_id_ = 0;
    TypeId collection_id_ = 0;
};

}  // namespace broac
