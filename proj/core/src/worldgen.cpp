#include "broac/worldgen.hpp"

#include <random>
#include <string>
#include <vector>

#include "broac/errors.hpp"

namespace broac {

namespace {

// Thin wrapper over mt19937_64 with hand-rolled bounded draws, so generated
// worlds do not depend on the standard library's distribution internals.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next() { return gen_(); }
    std::size_t below(std::size_t n) { return n == 0 ? 0 : static_cast<std::size_t>(next() % n); }
    bool chance(double p) { return static_cast<double>(next() >> 11) * 0x1.0p-53 < p; }

    template <typename T>
    const T& pick(const std::vector<T>& v) {
        return v[below(v.size())];
    }

private:
    std::mt19937_64 gen_;
};

const std::vector<std::string>& item_ability_palette() {
    static const std::vector<std::string> palette = {
        "view Item.name",          "edit Item.name", "view Item.description",
        "edit Item.description",   "comment_on",     "delete",
        "do_anything",             "view TextDocument.body",
        "edit TextDocument.body",
    };
    return palette;
}

const std::vector<std::string>& global_ability_palette() {
    static const std::vector<std::string> palette = {
        "do_anything",
        "create TextDocument",
        "create Person",
        "create Collection",
    };
    return palette;
}

SubjectSpec roll_subject(Rng& rng, const std::vector<EntityIndex>& agents,
                         const std::vector<EntityIndex>& collections) {
    const std::size_t r = rng.below(10);
    if (r < 4 || (r < 7 && collections.empty())) return SubjectSpec::one(rng.pick(agents));
    if (r < 7) return SubjectSpec::some(rng.pick(collections));
    return SubjectSpec::all();
}

ObjectSpec roll_object(Rng& rng, const std::vector<EntityIndex>& entities,
                       const std::vector<EntityIndex>& collections) {
    const std::size_t r = rng.below(10);
    if (r < 4 || (r < 7 && collections.empty())) return ObjectSpec::one(rng.pick(entities));
    if (r < 7) return ObjectSpec::some(rng.pick(collections));
    return ObjectSpec::all();
}

}  // namespace

// Each user is generated from a stream seeded by (seed, user) and may only
// reference earlier content, the way a site grows. A smaller user count
// therefore yields a strict prefix of a larger site with the same seed,
// matching how subset copies of one site scale.
std::unique_ptr<Engine> random_world(const WorldGenParams& params) {
    if (params.users == 0 || params.items_per_user == 0 || params.permissions_per_user == 0)
        throw ValidationError("world generation counts must be positive");
    if (params.anonymous_visible_fraction < 0.0 || params.anonymous_visible_fraction > 1.0)
        throw ValidationError("anonymous_visible_fraction must be within [0, 1]");

    auto engine = std::make_unique<Engine>();
    const Actor system = Actor::system();

    const std::size_t collections_per_user =
        params.items_per_user >= 6 ? 2 : (params.items_per_user >= 3 ? 1 : 0);
    const std::size_t docs_per_user = params.items_per_user - 1 - collections_per_user;

    std::vector<EntityIndex> agents, all_collections, all_entities;

    for (std::size_t u = 0; u < params.users; ++u) {
        Rng rng(params.seed ^ (0x9e3779b97f4a7c15ull * (u + 1)));
        const std::string uid = "u" + std::to_string(u);

        EntityIndex agent = engine->create_entity(uid, "Person", system, {.nodefault = true});
        agents.push_back(agent);
        all_entities.push_back(agent);

        std::vector<EntityIndex> owned;
        for (std::size_t k = 0; k < docs_per_user; ++k) {
            EntityIndex d = engine->create_entity(uid + "_d" + std::to_string(k), "TextDocument",
                                                  system, {}, agent);
            owned.push_back(d);
            all_entities.push_back(d);
        }
        std::vector<EntityIndex> own_collections;
        for (std::size_t k = 0; k < collections_per_user; ++k) {
            EntityIndex c = engine->create_entity(uid + "_c" + std::to_string(k), "Collection",
                                                  system, {}, agent);
            owned.push_back(c);
            own_collections.push_back(c);
            all_collections.push_back(c);
            all_entities.push_back(c);
        }

        // Every fifth user opens a team holding agents seen so far, so
        // Some-subject permissions have somebody to cover.
        if (u % 5 == 0) {
            EntityIndex team = engine->create_entity("team" + std::to_string(u / 5), "Group",
                                                     system, {.nodefault = true});
            all_collections.push_back(team);
            all_entities.push_back(team);
            const std::size_t members = 2 + rng.below(4);
            for (std::size_t k = 0; k < members; ++k) {
                EntityIndex a = rng.pick(agents);
                if (!engine->world().has_edge(team, a))
                    engine->add_membership(team, a, system, rng.chance(0.8));
            }
        }

        // The user files documents into their collections; occasionally a
        // foreign item lands there, which only sticks as a disabled edge.
        for (EntityIndex c : own_collections) {
            const std::size_t fill = 2 + rng.below(4);
            for (std::size_t k = 0; k < fill; ++k) {
                bool own = !rng.chance(0.2);
                EntityIndex target = own ? owned[rng.below(owned.size())] : rng.pick(all_entities);
                if (target == c || engine->world().has_edge(c, target)) continue;
                bool enabled = own ? rng.chance(0.85) : rng.chance(0.3);
                engine->add_membership(c, target, system, enabled);
            }
        }

        // Permission budget: the creator defaults above already spent one per
        // owned entity.
        std::size_t budget = params.permissions_per_user > owned.size()
                                 ? params.permissions_per_user - owned.size()
                                 : 0;
        auto put_counted = [&](const SubjectSpec& s, const ObjectSpec& o,
                               const std::string& ability, bool allow) {
            std::size_t before = engine->store().size();
            engine->set_permission(s, o, ability, allow, system);
            if (engine->store().size() > before && budget > 0) --budget;
        };

        if (budget > 0)
            put_counted(SubjectSpec::all(), ObjectSpec::one(agent), "view Item.name", true);
        for (EntityIndex e : owned) {
            if (budget == 0) break;
            if (rng.chance(params.anonymous_visible_fraction))
                put_counted(SubjectSpec::all(), ObjectSpec::one(e), "view Item.name", true);
        }

        std::size_t attempts = 0;
        const std::size_t max_attempts = budget * 8;
        while (budget > 0 && attempts < max_attempts) {
            ++attempts;
            SubjectSpec subject = roll_subject(rng, agents, all_collections);
            ObjectSpec object = roll_object(rng, all_entities, all_collections);
            put_counted(subject, object, rng.pick(item_ability_palette()), !rng.chance(0.3));
        }
    }

    return engine;
}

std::unique_ptr<Engine> random_small_world(std::uint64_t seed, const FuzzParams& params) {
    Rng rng(seed);
    auto engine = std::make_unique<Engine>();
    const Actor system = Actor::system();

    const std::size_t n_agents = 1 + rng.below(params.max_agents);
    const std::size_t n_collections = rng.below(params.max_collections + 1);
    const std::size_t n_items = 1 + rng.below(params.max_items);

    std::vector<EntityIndex> agents, collections, entities;
    if (auto anon = engine->world().anonymous()) {
        agents.push_back(*anon);
        entities.push_back(*anon);
    }
    for (std::size_t i = 0; i < n_agents; ++i) {
        EntityIndex a = engine->create_entity("a" + std::to_string(i),
                                              rng.chance(0.5) ? "Person" : "Agent", system,
                                              {.nodefault = true});
        agents.push_back(a);
        entities.push_back(a);
    }
    for (std::size_t i = 0; i < n_collections; ++i) {
        EntityIndex c = engine->create_entity("c" + std::to_string(i),
                                              rng.chance(0.3) ? "Group" : "Collection", system,
                                              {.nodefault = true});
        collections.push_back(c);
        entities.push_back(c);
    }
    static const std::vector<std::string> item_types = {"TextDocument", "Document", "Item"};
    for (std::size_t i = 0; i < n_items; ++i) {
        EntityIndex it = engine->create_entity("i" + std::to_string(i), rng.pick(item_types),
                                               system, {.nodefault = true});
        entities.push_back(it);
    }

    // Arbitrary membership graph: collections may contain agents, items and
    // other collections; nesting can loop back and flags are mixed.
    for (EntityIndex c : collections) {
        const std::size_t n_edges = rng.below(5);
        for (std::size_t k = 0; k < n_edges; ++k) {
            EntityIndex target = rng.pick(entities);
            if (target == c || engine->world().has_edge(c, target)) continue;
            engine->add_membership(c, target, system, rng.chance(0.5));
        }
    }

    const std::size_t n_perms = rng.below(params.max_permissions + 1);
    for (std::size_t k = 0; k < n_perms; ++k) {
        bool allow = !rng.chance(0.4);
        if (rng.chance(0.2)) {
            engine->set_global_permission(roll_subject(rng, agents, collections),
                                          rng.pick(global_ability_palette()), allow, system);
        } else {
            engine->set_permission(roll_subject(rng, agents, collections),
                                   roll_object(rng, entities, collections),
                                   rng.pick(item_ability_palette()), allow, system);
        }
    }

    return engine;
}

}  // namespace broac
