#include "broac/resolver.hpp"

#include <algorithm>
#include <limits>
#include <tuple>

#include "broac/errors.hpp"

namespace broac {

namespace {

constexpr int kNoLevel = std::numeric_limits<int>::max();

std::string render_subject(const World& world, const SubjectSpec& s) {
    switch (s.kind) {
        case SpecKind::One: return "agent:" + world.entity(s.target).id;
        case SpecKind::Some: return "group:" + world.entity(s.target).id;
        case SpecKind::All: return "all";
    }
    return "all";
}

std::string render_object(const World& world, const ObjectSpec& o) {
    switch (o.kind) {
        case SpecKind::One: return "item:" + world.entity(o.target).id;
        case SpecKind::Some: return "collection:" + world.entity(o.target).id;
        case SpecKind::All: return "all";
    }
    return "all";
}

void sort_candidates(std::vector<DecisionCandidate>& cands) {
    std::sort(cands.begin(), cands.end(), [](const DecisionCandidate& a, const DecisionCandidate& b) {
        return std::tie(a.level, a.allow, a.kind, a.subject, a.object, a.ability) <
               std::tie(b.level, b.allow, b.kind, b.subject, b.object, b.ability);
    });
}

// Verdict from the assembled candidate list: minimal allow level strictly
// below the minimal deny level wins; ties go to the deny.
Decision decide_by_levels(std::vector<DecisionCandidate> cands) {
    Decision d;
    if (cands.empty()) {
        d.allowed = false;
        d.reason = Reason::closed_world;
        return d;
    }
    int min_allow = kNoLevel;
    int min_deny = kNoLevel;
    for (const DecisionCandidate& c : cands) {
        int& best = c.allow ? min_allow : min_deny;
        best = std::min(best, c.level);
    }
    d.reason = Reason::level_comparison;
    d.allowed = min_allow < min_deny;
    d.winning_level = d.allowed ? min_allow : min_deny;
    sort_candidates(cands);
    d.candidates = std::move(cands);
    return d;
}

}  // namespace

const char* reason_name(Reason r) {
    switch (r) {
        case Reason::closed_world: return "closed_world";
        case Reason::global_override: return "global_override";
        case Reason::level_comparison: return "level_comparison";
    }
    return "closed_world";
}

void Resolver::require_agent(EntityIndex agent) const {
    if (!world_->alive(agent) || !world_->is_agent(agent))
        throw ValidationError("decision subject must be a live agent");
}

Decision Resolver::resolve_global_ability(EntityIndex agent, std::string_view ability) const {
    require_agent(agent);
    std::vector<DecisionCandidate> cands;
    for (const auto& [perm, level] : store_->relevant_global_permissions(*world_, agent, ability)) {
        cands.push_back(DecisionCandidate{level, perm->allow, global_kind_name(perm->subject.kind),
                                          render_subject(*world_, perm->subject), "", perm->ability});
    }
    return decide_by_levels(std::move(cands));
}

Decision Resolver::resolve_item_ability(EntityIndex agent, EntityIndex item,
                                        std::string_view ability) const {
    require_agent(agent);
    const Entity& it = world_->entity(item);
    if (!world_->registry().is_item_ability(it.type, ability))
        throw ValidationError("ability '" + std::string(ability) + "' does not apply to type '" +
                              world_->registry().type_name(it.type) + "'");

    // A net-granted global do_anything carries every item ability at every
    // level; item-level denies cannot touch it.
    if (resolve_global_ability(agent, kDoAnything).allowed) {
        Decision d;
        d.allowed = true;
        d.reason = Reason::global_override;
        return d;
    }

    std::vector<DecisionCandidate> cands;
    for (const auto& [perm, level] : store_->relevant_item_permissions(*world_, agent, item, ability)) {
        cands.push_back(DecisionCandidate{level, perm->allow,
                                          permission_kind_name(perm->subject.kind, perm->object.kind),
                                          render_subject(*world_, perm->subject),
                                          render_object(*world_, perm->object), perm->ability});
    }
    return decide_by_levels(std::move(cands));
}

Decision Resolver::explain(EntityIndex agent, EntityIndex item, std::string_view ability) const {
    return resolve_item_ability(agent, item, ability);
}

std::vector<EntityIndex> Resolver::filter_items(EntityIndex agent, std::string_view ability) const {
    require_agent(agent);
    const TypeRegistry& registry = world_->registry();
    if (!registry.is_known_item_ability(ability))
        throw ValidationError("unknown item ability: '" + std::string(ability) + "'");

    // Applicability of the ability per type, resolved once.
    std::vector<char> type_applies(registry.type_count());
    for (TypeId t = 0; t < type_applies.size(); ++t)
        type_applies[t] = registry.is_item_ability(t, ability);

    std::vector<EntityIndex> result;
    const std::size_t slots = world_->entity_slots();

    if (resolve_global_ability(agent, kDoAnything).allowed) {
        for (EntityIndex e = 0; e < slots; ++e)
            if (world_->alive(e) && type_applies[world_->entity(e).type]) result.push_back(e);
        return result;
    }

    // One pass over the store paints each item's best allow/deny level;
    // object=All permissions fold into two scalars instead of touching every
    // slot. Equivalent to running the level comparison per item.
    std::vector<std::uint8_t> best_allow(slots, 255), best_deny(slots, 255);
    std::uint8_t all_allow = 255, all_deny = 255;
    auto paint = [](std::uint8_t& slot, int level) {
        if (level < slot) slot = static_cast<std::uint8_t>(level);
    };

    for (const Permission& p : store_->item_permissions()) {
        if (p.ability != ability && p.ability != kDoAnything) continue;
        if (!PermissionStore::subject_matches(*world_, p.subject, agent)) continue;
        const int level = permission_level(p);
        auto& plane = p.allow ? best_allow : best_deny;
        switch (p.object.kind) {
            case SpecKind::One:
                paint(plane[p.object.target], level);
                break;
            case SpecKind::Some:
                for (EntityIndex m : world_->enabled_recursive_members(p.object.target))
                    paint(plane[m], level);
                break;
            case SpecKind::All:
                paint(p.allow ? all_allow : all_deny, level);
                break;
        }
    }

    for (EntityIndex e = 0; e < slots; ++e) {
        if (!world_->alive(e) || !type_applies[world_->entity(e).type]) continue;
        const std::uint8_t a = std::min(best_allow[e], all_allow);
        const std::uint8_t n = std::min(best_deny[e], all_deny);
        if (a < n) result.push_back(e);
    }
    return result;
}

LoopholeReport Resolver::lint_anonymous(EntityIndex agent, EntityIndex item,
                                        std::string_view ability) const {
    if (!world_->anonymous_enabled())
        throw ValidationError("anonymous access is disabled; nothing to lint");
    LoopholeReport report;
    report.agent_decision = resolve_item_ability(agent, item, ability);
    report.anonymous_decision = resolve_item_ability(*world_->anonymous(), item, ability);
    report.flagged = !report.agent_decision.allowed && report.anonymous_decision.allowed;
    return report;
}

}  // namespace broac
