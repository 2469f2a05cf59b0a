#pragma once

#include <optional>
#include <string>
#include <vector>

namespace broac {

enum class Reason { closed_world, global_override, level_comparison };

const char* reason_name(Reason r);

/// One relevant permission as it entered a decision, rendered with the
/// scenario-syntax spellings of its subject and object so traces stay
/// meaningful after the store mutates.
struct DecisionCandidate {
    int level = 0;
    bool allow = false;
    std::string kind;     // "OneToSome", ..., or "GlobalOne".."GlobalAll"
    std::string subject;  // "agent:ID" | "group:ID" | "all"
    std::string object;   // "item:ID" | "collection:ID" | "all"; empty for globals
    std::string ability;

    friend bool operator==(const DecisionCandidate&, const DecisionCandidate&) = default;
};

/// The resolver's verdict for one (agent, item/global, ability) question.
///
/// closed_world: no relevant permission existed, denied.
/// global_override: a net-granted global do_anything decided it, allowed.
/// level_comparison: minimal allow level vs minimal deny level; the lower
/// number wins and a deny wins ties.
struct Decision {
    bool allowed = false;
    Reason reason = Reason::closed_world;
    std::optional<int> winning_level;
    std::vector<DecisionCandidate> candidates;  // sorted by (level, deny first)
};

}  // namespace broac
