#include <doctest.h>

#include <algorithm>
#include <random>

#include "broac/engine.hpp"
#include "broac/errors.hpp"
#include "broac/oracle.hpp"
#include "broac/worldgen.hpp"

using namespace broac;

namespace {

const Actor sys = Actor::system();

// The conflict catalogue, staged programmatically: each case pins the verdict
// and the winning level.
struct ConflictCase {
    const char* name;
    bool expect_allowed;
    int expect_level;
};

}  // namespace

TEST_CASE("individual deny on a collection beats group allow (2- over 5+)") {
    Engine e;
    EntityIndex director = e.create_entity("director", "Person", sys, {.nodefault = true});
    EntityIndex board = e.create_entity("board", "Collection", sys, {.nodefault = true});
    EntityIndex hiring = e.create_entity("hiring", "Collection", sys, {.nodefault = true});
    EntityIndex review = e.create_entity("review", "TextDocument", sys, {.nodefault = true});
    e.add_membership(board, director, sys);
    e.add_membership(hiring, review, sys);
    e.set_permission(SubjectSpec::some(board), ObjectSpec::some(hiring),
                     "view TextDocument.body", true, sys);
    e.set_permission(SubjectSpec::one(director), ObjectSpec::some(hiring),
                     "view TextDocument.body", false, sys);

    Decision d = e.resolver().resolve_item_ability(director, review, "view TextDocument.body");
    CHECK_FALSE(d.allowed);
    CHECK(d.reason == Reason::level_comparison);
    CHECK(d.winning_level == 2);
    REQUIRE(d.candidates.size() == 2);
    CHECK(d.candidates[0].level == 2);
    CHECK_FALSE(d.candidates[0].allow);
    CHECK(d.candidates[1].level == 5);
    CHECK(d.candidates[1].allow);
}

TEST_CASE("own allow on one item beats group deny (1+ over 4-)") {
    Engine e;
    EntityIndex alice = e.create_entity("alice", "Person", sys, {.nodefault = true});
    EntityIndex students = e.create_entity("students", "Collection", sys, {.nodefault = true});
    EntityIndex transcript = e.create_entity("transcript", "TextDocument", sys, {.nodefault = true});
    e.add_membership(students, alice, sys);
    e.set_permission(SubjectSpec::some(students), ObjectSpec::one(transcript),
                     "view TextDocument.body", false, sys);
    e.set_permission(SubjectSpec::one(alice), ObjectSpec::one(transcript),
                     "view TextDocument.body", true, sys);

    Decision d = e.resolver().resolve_item_ability(alice, transcript, "view TextDocument.body");
    CHECK(d.allowed);
    CHECK(d.winning_level == 1);
}

TEST_CASE("deny wins a same-level tie (5- over 5+)") {
    Engine e;
    EntityIndex pat = e.create_entity("pat", "Person", sys, {.nodefault = true});
    EntityIndex staff = e.create_entity("staff", "Collection", sys, {.nodefault = true});
    EntityIndex students = e.create_entity("students", "Collection", sys, {.nodefault = true});
    EntityIndex apps = e.create_entity("apps", "Collection", sys, {.nodefault = true});
    EntityIndex app1 = e.create_entity("app1", "TextDocument", sys, {.nodefault = true});
    e.add_membership(staff, pat, sys);
    e.add_membership(students, pat, sys);
    e.add_membership(apps, app1, sys);
    e.set_permission(SubjectSpec::some(staff), ObjectSpec::some(apps), "view TextDocument.body",
                     true, sys);
    e.set_permission(SubjectSpec::some(students), ObjectSpec::some(apps), "view TextDocument.body",
                     false, sys);

    Decision d = e.resolver().resolve_item_ability(pat, app1, "view TextDocument.body");
    CHECK_FALSE(d.allowed);
    CHECK(d.winning_level == 5);
}

TEST_CASE("individual allow on a collection beats group deny (2+ over 5-)") {
    Engine e;
    EntityIndex pm = e.create_entity("pm", "Person", sys, {.nodefault = true});
    EntityIndex staff = e.create_entity("staff", "Collection", sys, {.nodefault = true});
    EntityIndex salaries = e.create_entity("salaries", "Collection", sys, {.nodefault = true});
    EntityIndex sheet = e.create_entity("sheet", "TextDocument", sys, {.nodefault = true});
    e.add_membership(staff, pm, sys);
    e.add_membership(salaries, sheet, sys);
    e.set_permission(SubjectSpec::some(staff), ObjectSpec::some(salaries),
                     "view TextDocument.body", false, sys);
    e.set_permission(SubjectSpec::one(pm), ObjectSpec::some(salaries), "view TextDocument.body",
                     true, sys);

    Decision d = e.resolver().explain(pm, sheet, "view TextDocument.body");
    CHECK(d.allowed);
    CHECK(d.winning_level == 2);
    // Trace order: winning allow at level 2 first, then the beaten deny.
    REQUIRE(d.candidates.size() == 2);
    CHECK(d.candidates[0].kind == "OneToSome");
    CHECK(d.candidates[0].allow);
    CHECK(d.candidates[1].kind == "SomeToSome");
    CHECK_FALSE(d.candidates[1].allow);
}

TEST_CASE("replacement: the later sign overwrites (no 1 vs 1 conflict)") {
    Engine e;
    EntityIndex member = e.create_entity("member1", "Person", sys, {.nodefault = true});
    EntityIndex homepage = e.create_entity("homepage", "TextDocument", sys, {.nodefault = true});
    e.set_permission(SubjectSpec::one(member), ObjectSpec::one(homepage),
                     "edit TextDocument.body", true, sys);
    e.set_permission(SubjectSpec::one(member), ObjectSpec::one(homepage),
                     "edit TextDocument.body", false, sys);

    CHECK(e.store().size() == 1);
    Decision d = e.resolver().resolve_item_ability(member, homepage, "edit TextDocument.body");
    CHECK_FALSE(d.allowed);
    CHECK(d.winning_level == 1);
    REQUIRE(d.candidates.size() == 1);
}

TEST_CASE("item-level do_anything over all items competes at level 3 (3+ over 4-)") {
    Engine e;
    EntityIndex webmaster = e.create_entity("webmaster", "Person", sys, {.nodefault = true});
    EntityIndex staff = e.create_entity("staff", "Collection", sys, {.nodefault = true});
    EntityIndex codes = e.create_entity("codes", "TextDocument", sys, {.nodefault = true});
    e.add_membership(staff, webmaster, sys);
    e.set_permission(SubjectSpec::one(webmaster), ObjectSpec::all(), "do_anything", true, sys);
    e.set_permission(SubjectSpec::some(staff), ObjectSpec::one(codes), "view TextDocument.body",
                     false, sys);

    Decision d = e.resolver().resolve_item_ability(webmaster, codes, "view TextDocument.body");
    CHECK(d.allowed);
    CHECK(d.reason == Reason::level_comparison);  // no global override involved
    CHECK(d.winning_level == 3);
}

TEST_CASE("group allow through a collection beats an all-agents deny (5+ over 7-)") {
    Engine e;
    EntityIndex dave = e.create_entity("dave", "Person", sys, {.nodefault = true});
    EntityIndex friends = e.create_entity("friends", "Collection", sys, {.nodefault = true});
    EntityIndex photos = e.create_entity("photos", "Collection", sys, {.nodefault = true});
    EntityIndex photo = e.create_entity("photo", "Document", sys, {.nodefault = true});
    e.add_membership(friends, dave, sys);
    e.add_membership(photos, photo, sys);
    e.set_permission(SubjectSpec::all(), ObjectSpec::one(photo), "view Item.name", false, sys);
    e.set_permission(SubjectSpec::some(friends), ObjectSpec::some(photos), "view Item.name", true,
                     sys);

    Decision d = e.resolver().resolve_item_ability(dave, photo, "view Item.name");
    CHECK(d.allowed);
    CHECK(d.winning_level == 5);
}

TEST_CASE("all-agents deny ties the all-agents allow at level 8 and wins (8- over 8+)") {
    Engine e;
    EntityIndex eve = e.create_entity("eve", "Person", sys, {.nodefault = true});
    EntityIndex bob = e.create_entity("bob", "Person", sys, {.nodefault = true});
    EntityIndex gallery = e.create_entity("gallery", "Collection", sys, {.nodefault = true});
    EntityIndex vault = e.create_entity("vault", "Collection", sys, {.nodefault = true});
    EntityIndex photo = e.create_entity("photo", "Document", sys, {.nodefault = true});
    e.add_membership(gallery, photo, sys, true);
    e.add_membership(vault, photo, sys, true);
    e.set_permission(SubjectSpec::all(), ObjectSpec::some(gallery), "view Item.name", true, sys);
    e.set_permission(SubjectSpec::all(), ObjectSpec::some(vault), "view Item.name", false, sys);
    e.set_permission(SubjectSpec::one(eve), ObjectSpec::some(vault), "view Item.name", true, sys);

    Decision bob_d = e.resolver().resolve_item_ability(bob, photo, "view Item.name");
    CHECK_FALSE(bob_d.allowed);
    CHECK(bob_d.winning_level == 8);

    Decision eve_d = e.resolver().resolve_item_ability(eve, photo, "view Item.name");
    CHECK(eve_d.allowed);
    CHECK(eve_d.winning_level == 2);

    auto filtered = e.resolver().filter_items(bob, "view Item.name");
    CHECK(std::find(filtered.begin(), filtered.end(), photo) == filtered.end());
    auto eve_filtered = e.resolver().filter_items(eve, "view Item.name");
    CHECK(std::find(eve_filtered.begin(), eve_filtered.end(), photo) != eve_filtered.end());
}

TEST_CASE("closed world: nothing relevant means denied") {
    Engine e;
    EntityIndex a = e.create_entity("a", "Person", sys, {.nodefault = true});
    EntityIndex doc = e.create_entity("doc", "TextDocument", sys, {.nodefault = true});

    Decision d = e.resolver().resolve_item_ability(a, doc, "view TextDocument.body");
    CHECK_FALSE(d.allowed);
    CHECK(d.reason == Reason::closed_world);
    CHECK_FALSE(d.winning_level.has_value());
    CHECK(d.candidates.empty());

    Decision g = e.resolver().resolve_global_ability(a, "create Person");
    CHECK_FALSE(g.allowed);
    CHECK(g.reason == Reason::closed_world);
}

TEST_CASE("global do_anything overrides item-level denies") {
    Engine e;
    EntityIndex admin = e.create_entity("admin", "Person", sys, {.nodefault = true});
    EntityIndex doc = e.create_entity("doc", "TextDocument", sys, {.nodefault = true});
    e.set_permission(SubjectSpec::one(admin), ObjectSpec::one(doc), "view TextDocument.body",
                     false, sys);
    e.set_global_permission(SubjectSpec::all(), "do_anything", true, sys);

    Decision d = e.resolver().resolve_item_ability(admin, doc, "view TextDocument.body");
    CHECK(d.allowed);
    CHECK(d.reason == Reason::global_override);
    CHECK_FALSE(d.winning_level.has_value());

    // Every global ability resolves allowed as well.
    CHECK(e.resolver().resolve_global_ability(admin, "create Person").allowed);
    CHECK(e.resolver().resolve_global_ability(admin, "create Collection").allowed);
}

TEST_CASE("a low-level global deny vetoes a higher-level do_anything grant") {
    Engine e;
    EntityIndex a = e.create_entity("a", "Person", sys, {.nodefault = true});
    EntityIndex doc = e.create_entity("doc", "TextDocument", sys, {.nodefault = true});
    e.set_global_permission(SubjectSpec::all(), "do_anything", true, sys);    // level 3
    e.set_global_permission(SubjectSpec::one(a), "do_anything", false, sys);  // level 1

    CHECK_FALSE(e.resolver().resolve_global_ability(a, "do_anything").allowed);
    // No net grant, hence no override; the item decision falls back to the
    // closed world.
    Decision d = e.resolver().resolve_item_ability(a, doc, "view TextDocument.body");
    CHECK_FALSE(d.allowed);
    CHECK(d.reason == Reason::closed_world);
}

TEST_CASE("global ladder: group deny at level 2 beats an everyone allow at level 3") {
    Engine e;
    EntityIndex a = e.create_entity("a", "Person", sys, {.nodefault = true});
    EntityIndex team = e.create_entity("team", "Collection", sys, {.nodefault = true});
    e.add_membership(team, a, sys);
    e.set_global_permission(SubjectSpec::some(team), "create Person", false, sys);
    e.set_global_permission(SubjectSpec::all(), "create Person", true, sys);

    Decision d = e.resolver().resolve_global_ability(a, "create Person");
    CHECK_FALSE(d.allowed);
    CHECK(d.winning_level == 2);

    // An agent outside the team only sees the allow.
    EntityIndex b = e.create_entity("b", "Person", sys, {.nodefault = true});
    CHECK(e.resolver().resolve_global_ability(b, "create Person").allowed);
}

TEST_CASE("invalid abilities are errors, not denials") {
    Engine e;
    EntityIndex a = e.create_entity("a", "Person", sys, {.nodefault = true});
    EntityIndex doc = e.create_entity("doc", "TextDocument", sys, {.nodefault = true});
    CHECK_THROWS_AS((void)e.resolver().resolve_item_ability(a, doc, "view Person.first_name"),
                    ValidationError);
    CHECK_THROWS_AS((void)e.resolver().resolve_item_ability(a, doc, "not an ability"),
                    ValidationError);
    CHECK_THROWS_AS((void)e.resolver().resolve_global_ability(a, "view Item.name"),
                    ValidationError);
    CHECK_THROWS_AS((void)e.resolver().filter_items(a, "no such ability"), ValidationError);
    // Resolving for a non-agent subject is equally malformed.
    CHECK_THROWS_AS((void)e.resolver().resolve_item_ability(doc, doc, "view Item.name"),
                    ValidationError);
}

TEST_CASE("anonymous is an ordinary agent under All subjects") {
    Engine e;
    EntityIndex doc = e.create_entity("doc", "TextDocument", sys, {.nodefault = true});
    EntityIndex anon = *e.world().anonymous();
    e.set_permission(SubjectSpec::all(), ObjectSpec::one(doc), "view Item.name", true, sys);
    CHECK(e.resolver().resolve_item_ability(anon, doc, "view Item.name").allowed);

    // It can also carry One-level permissions.
    e.set_permission(SubjectSpec::one(anon), ObjectSpec::one(doc), "view Item.name", false, sys);
    CHECK_FALSE(e.resolver().resolve_item_ability(anon, doc, "view Item.name").allowed);
}

TEST_CASE("lint flags the deny-for-agent / allow-for-anonymous inversion") {
    Engine e;
    EntityIndex a = e.create_entity("a", "Person", sys, {.nodefault = true});
    EntityIndex doc = e.create_entity("doc", "TextDocument", sys, {.nodefault = true});
    e.set_permission(SubjectSpec::one(a), ObjectSpec::one(doc), "view Item.name", false, sys);
    e.set_permission(SubjectSpec::all(), ObjectSpec::one(doc), "view Item.name", true, sys);

    LoopholeReport r = e.resolver().lint_anonymous(a, doc, "view Item.name");
    CHECK(r.flagged);
    CHECK_FALSE(r.agent_decision.allowed);
    CHECK(r.anonymous_decision.allowed);

    // Both denied: no flag.
    e.set_permission(SubjectSpec::all(), ObjectSpec::one(doc), "view Item.name", false, sys);
    CHECK_FALSE(e.resolver().lint_anonymous(a, doc, "view Item.name").flagged);

    // Both allowed: no inversion either.
    e.set_permission(SubjectSpec::one(a), ObjectSpec::one(doc), "view Item.name", true, sys);
    e.set_permission(SubjectSpec::all(), ObjectSpec::one(doc), "view Item.name", true, sys);
    CHECK_FALSE(e.resolver().lint_anonymous(a, doc, "view Item.name").flagged);
}

TEST_CASE("lint requires the anonymous agent") {
    Engine e(WorldOptions{.anonymous_enabled = false});
    EntityIndex a = e.create_entity("a", "Person", sys, {.nodefault = true});
    EntityIndex doc = e.create_entity("doc", "TextDocument", sys, {.nodefault = true});
    CHECK_THROWS_AS((void)e.resolver().lint_anonymous(a, doc, "view Item.name"), ValidationError);
}

TEST_CASE("filter equals pointwise resolution on random worlds") {
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
        auto engine = random_small_world(seed * 7919);
        const World& w = engine->world();
        const Resolver r = engine->resolver();
        for (const char* ability : {"view Item.name", "do_anything", "view TextDocument.body"}) {
            for (EntityIndex agent : w.live_entities()) {
                if (!w.is_agent(agent)) continue;
                auto filtered = r.filter_items(agent, ability);
                std::unordered_set<EntityIndex> got(filtered.begin(), filtered.end());
                for (EntityIndex item : w.live_entities()) {
                    if (!w.registry().is_item_ability(w.entity(item).type, ability)) {
                        CHECK(got.count(item) == 0);
                        continue;
                    }
                    CHECK(got.count(item) ==
                          (r.resolve_item_ability(agent, item, ability).allowed ? 1u : 0u));
                }
            }
        }
    }
}

TEST_CASE("sign monotonicity: new allows never revoke, new denies never grant") {
    std::mt19937_64 rng(123456);
    std::size_t pairs_checked = 0;
    for (std::uint64_t seed = 1; pairs_checked < 60; ++seed) {
        auto engine = random_small_world(seed * 104729);
        const World& w = engine->world();

        std::vector<EntityIndex> agents, items;
        for (EntityIndex x : w.live_entities()) {
            if (w.is_agent(x)) agents.push_back(x);
            items.push_back(x);
        }
        std::vector<EntityIndex> collections;
        for (EntityIndex x : items)
            if (w.is_collection(x)) collections.push_back(x);

        const char* ability = "view Item.name";
        auto verdicts = [&] {
            std::vector<bool> out;
            for (EntityIndex a : agents)
                for (EntityIndex i : items)
                    out.push_back(engine->resolver().resolve_item_ability(a, i, ability).allowed);
            return out;
        };

        // Candidate permission with a key not present yet.
        SubjectSpec subj = (rng() % 2 && !collections.empty())
                               ? SubjectSpec::some(collections[rng() % collections.size()])
                               : SubjectSpec::one(agents[rng() % agents.size()]);
        ObjectSpec obj = (rng() % 2) ? ObjectSpec::all()
                                     : ObjectSpec::one(items[rng() % items.size()]);
        bool as_allow = (rng() % 2) != 0;
        if (engine->store().contains(subj, obj, ability)) continue;

        auto before = verdicts();
        engine->set_permission(subj, obj, ability, as_allow, Actor::system());
        auto after = verdicts();
        ++pairs_checked;

        for (std::size_t i = 0; i < before.size(); ++i) {
            if (as_allow)
                CHECK((!before[i] || after[i]));  // allowed stays allowed
            else
                CHECK((before[i] || !after[i]));  // denied stays denied
        }
    }
    CHECK(pairs_checked >= 60);
}

TEST_CASE("verdicts are insertion-order independent") {
    auto build = [](bool flip) {
        auto e = std::make_unique<Engine>();
        EntityIndex a = e->create_entity("a", "Person", sys, {.nodefault = true});
        EntityIndex g = e->create_entity("g", "Collection", sys, {.nodefault = true});
        EntityIndex doc = e->create_entity("doc", "TextDocument", sys, {.nodefault = true});
        e->add_membership(g, a, sys);
        auto p1 = [&] {
            e->set_permission(SubjectSpec::some(g), ObjectSpec::one(doc), "view Item.name", true,
                              sys);
        };
        auto p2 = [&] {
            e->set_permission(SubjectSpec::all(), ObjectSpec::one(doc), "view Item.name", false,
                              sys);
        };
        if (flip) {
            p2();
            p1();
        } else {
            p1();
            p2();
        }
        return e;
    };
    auto e1 = build(false);
    auto e2 = build(true);
    EntityIndex a1 = e1->world().index_of("a"), d1 = e1->world().index_of("doc");
    EntityIndex a2 = e2->world().index_of("a"), d2 = e2->world().index_of("doc");
    Decision r1 = e1->resolver().resolve_item_ability(a1, d1, "view Item.name");
    Decision r2 = e2->resolver().resolve_item_ability(a2, d2, "view Item.name");
    CHECK(r1.allowed == r2.allowed);
    CHECK(r1.winning_level == r2.winning_level);
    CHECK(r1.candidates == r2.candidates);  // sorted identically
}
