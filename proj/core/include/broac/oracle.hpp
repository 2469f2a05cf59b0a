#pragma once

#include <string_view>

#include "broac/permission_store.hpp"
#include "broac/world.hpp"

namespace broac::oracle {

/// Literal re-statement of the decision rule, kept deliberately naive and
/// separate from the Resolver: membership questions are answered by walking
/// raw edges (no closure tables), and the verdict is "some allow exists with
/// no deny at the same or a lower level number", checked pairwise.
///
/// Used as the independent side of the resolver-equivalence properties.
bool resolve_item_ability(const World& world, const PermissionStore& store, EntityIndex agent,
                          EntityIndex item, std::string_view ability);

bool resolve_global_ability(const World& world, const PermissionStore& store, EntityIndex agent,
                            std::string_view ability);

}  // namespace broac::oracle
