#pragma once

#include <string_view>
#include <vector>

#include "broac/decision.hpp"
#include "broac/permission_store.hpp"
#include "broac/world.hpp"

namespace broac {

struct LoopholeReport {
    bool flagged = false;
    Decision agent_decision;
    Decision anonymous_decision;
};

/// Decision procedure over a world snapshot. Pure reads; never mutates.
///
/// Item resolution: a net-granted global do_anything overrides everything;
/// otherwise the relevant permissions compete by precedence level, where the
/// minimal allow level must be strictly lower than the minimal deny level
/// (so denies win ties), and no relevant permission at all means denial.
class Resolver {
public:
    Resolver(const World& world, const PermissionStore& store)
        : world_(&world), store_(&store) {}

    Decision resolve_item_ability(EntityIndex agent, EntityIndex item,
                                  std::string_view ability) const;

    /// Same verdict and trace as resolve_item_ability; kept as the explicit
    /// diagnostic entry point.
    Decision explain(EntityIndex agent, EntityIndex item, std::string_view ability) const;

    Decision resolve_global_ability(EntityIndex agent, std::string_view ability) const;

    /// Items `i` for which the ability applies to i's type and
    /// resolve_item_ability(agent, i, ability) allows. Computed in one pass
    /// over the store but pointwise-equivalent to per-item resolution.
    std::vector<EntityIndex> filter_items(EntityIndex agent, std::string_view ability) const;

    /// Flags the privilege inversion where the agent is denied but the
    /// anonymous agent is allowed the same thing.
    LoopholeReport lint_anonymous(EntityIndex agent, EntityIndex item,
                                  std::string_view ability) const;

private:
    void require_agent(EntityIndex agent) const;

    const World* world_;
    const PermissionStore* store_;
};

}  // namespace broac
