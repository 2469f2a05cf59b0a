#include "broac/type_registry.hpp"

#include "broac/errors.hpp"

namespace broac {

namespace {

std::vector<std::string> split_abilities(std::initializer_list<const char*> items) {
    std::vector<std::string> out;
    for (const char* s : items) out.emplace_back(s);
    return out;
}

}  // namespace

TypeRegistry::TypeRegistry() {
    item_id_ = register_type("Item", {},
                             split_abilities({"do_anything", "comment_on", "delete",
                                              "view Item.name", "view Item.description",
                                              "view Item.creator", "view Item.created_at",
                                              "edit Item.name", "edit Item.description"}),
                             {});
    agent_id_ = register_type("Agent", {item_id_},
                              split_abilities({"add_contact_method", "add_authentication_method",
                                               "login_as", "view Agent.last_online_at"}),
                              {});
    register_type("Person", {agent_id_},
                  split_abilities({"view Person.first_name", "view Person.middle_names",
                                   "view Person.last_name", "view Person.suffix",
                                   "edit Person.first_name", "edit Person.middle_names",
                                   "edit Person.last_name", "edit Person.suffix"}),
                  {});
    collection_id_ = register_type("Collection", {item_id_},
                                   split_abilities({"modify_membership", "add_self", "remove_self"}),
                                   {});
    register_type("Group", {collection_id_}, {}, {});
    TypeId document = register_type("Document", {item_id_}, {}, {});
    register_type("TextDocument", {document},
                  split_abilities({"view TextDocument.body", "edit TextDocument.body",
                                   "add_transclusion"}),
                  {});
    global_abilities_.insert(std::string(kDoAnything));
}

TypeId TypeRegistry::define_type(const std::string& name,
                                 const std::vector<std::string>& parents,
                                 const std::vector<std::string>& item_abilities,
                                 const std::vector<std::string>& global_abilities) {
    if (name.empty()) throw ValidationError("type name must not be empty");
    if (by_name_.count(name)) throw ValidationError("duplicate type name: " + name);

    std::vector<TypeId> parent_ids;
    for (const auto& p : parents) {
        // Parents must predate the child, so any reference to this type or to
        // an undefined one would introduce a cycle; both are rejected here.
        if (p == name)
            throw ValidationError("type '" + name + "' cannot inherit from itself");
        auto it = by_name_.find(p);
        if (it == by_name_.end())
            throw ValidationError("unknown parent type '" + p + "' for type '" + name + "'");
        parent_ids.push_back(it->second);
    }
    if (parent_ids.empty()) parent_ids.push_back(item_id_);
    return register_type(name, parent_ids, item_abilities, global_abilities);
}

TypeId TypeRegistry::register_type(const std::string& name,
                                   const std::vector<TypeId>& parents,
                                   const std::vector<std::string>& item_abilities,
                                   const std::vector<std::string>& global_abilities) {
    TypeId id = static_cast<TypeId>(types_.size());
    TypeInfo info;
    info.name = name;
    info.parents = parents;
    info.own_item_abilities.insert(item_abilities.begin(), item_abilities.end());
    info.effective_item_abilities = info.own_item_abilities;
    info.ancestors.assign(types_.size() + 1, false);
    info.ancestors[id] = true;
    for (TypeId p : parents) {
        const TypeInfo& pi = types_[p];
        info.effective_item_abilities.insert(pi.effective_item_abilities.begin(),
                                             pi.effective_item_abilities.end());
        for (TypeId a = 0; a < pi.ancestors.size(); ++a)
            if (pi.ancestors[a]) info.ancestors[a] = true;
    }
    known_item_abilities_.insert(info.effective_item_abilities.begin(),
                                 info.effective_item_abilities.end());
    global_abilities_.insert("create " + name);
    global_abilities_.insert(global_abilities.begin(), global_abilities.end());
    by_name_.emplace(name, id);
    types_.push_back(std::move(info));
    return id;
}

bool TypeRegistry::has_type(std::string_view name) const {
    return by_name_.count(std::string(name)) > 0;
}

TypeId TypeRegistry::type_id(std::string_view name) const {
    auto it = by_name_.find(std::string(name));
    if (it == by_name_.end())
        throw ValidationError("unknown type: " + std::string(name));
    return it->second;
}

const std::string& TypeRegistry::type_name(TypeId id) const {
    return types_.at(id).name;
}

const TypeRegistry::TypeInfo& TypeRegistry::info(std::string_view name) const {
    return types_[type_id(name)];
}

bool TypeRegistry::is_item_ability(std::string_view type, std::string_view ability) const {
    return info(type).effective_item_abilities.count(std::string(ability)) > 0;
}

bool TypeRegistry::is_item_ability(TypeId type, std::string_view ability) const {
    return types_.at(type).effective_item_abilities.count(std::string(ability)) > 0;
}

const std::set<std::string>& TypeRegistry::own_item_abilities(std::string_view type) const {
    return info(type).own_item_abilities;
}

const std::set<std::string>& TypeRegistry::effective_item_abilities(std::string_view type) const {
    return info(type).effective_item_abilities;
}

const std::set<std::string>& TypeRegistry::effective_item_abilities(TypeId type) const {
    return types_.at(type).effective_item_abilities;
}

bool TypeRegistry::derives_from(TypeId type, TypeId ancestor) const {
    const auto& anc = types_.at(type).ancestors;
    return ancestor < anc.size() && anc[ancestor];
}

bool TypeRegistry::derives_from(std::string_view type, std::string_view ancestor) const {
    return derives_from(type_id(type), type_id(ancestor));
}

bool TypeRegistry::is_global_ability(std::string_view ability) const {
    return global_abilities_.count(std::string(ability)) > 0;
}

std::set<std::string> TypeRegistry::global_ability_vocabulary() const {
    return global_abilities_;
}

bool TypeRegistry::is_known_item_ability(std::string_view ability) const {
    return known_item_abilities_.count(std::string(ability)) > 0;
}

}  // namespace broac
