#include "broac/fuzz.hpp"

#include <vector>

#include "broac/oracle.hpp"

namespace broac {

EquivalenceReport run_equivalence(std::size_t trials, std::uint64_t seed,
                                  const FuzzParams& params) {
    EquivalenceReport report;

    for (std::size_t t = 0; t < trials; ++t) {
        const std::uint64_t world_seed = seed + t;
        auto engine = random_small_world(world_seed, params);
        const World& world = engine->world();
        const TypeRegistry& registry = engine->registry();
        const Resolver resolver = engine->resolver();
        ++report.worlds;

        std::vector<EntityIndex> agents;
        const std::vector<EntityIndex> entities = world.live_entities();
        for (EntityIndex e : entities)
            if (world.is_agent(e)) agents.push_back(e);

        auto note_divergence = [&](const std::string& where) {
            ++report.divergences;
            if (report.first_divergence.empty())
                report.first_divergence = "seed " + std::to_string(world_seed) + ": " + where;
        };

        for (EntityIndex agent : agents) {
            for (EntityIndex item : entities) {
                for (const std::string& ability :
                     registry.effective_item_abilities(world.entity(item).type)) {
                    bool got = resolver.resolve_item_ability(agent, item, ability).allowed;
                    bool want =
                        oracle::resolve_item_ability(world, engine->store(), agent, item, ability);
                    ++report.decisions;
                    if (got != want)
                        note_divergence("resolve(" + world.entity(agent).id + ", " +
                                        world.entity(item).id + ", \"" + ability + "\") = " +
                                        (got ? "allowed" : "denied") + ", oracle says " +
                                        (want ? "allowed" : "denied"));
                }
            }
            for (const std::string& ability : registry.global_ability_vocabulary()) {
                bool got = resolver.resolve_global_ability(agent, ability).allowed;
                bool want = oracle::resolve_global_ability(world, engine->store(), agent, ability);
                ++report.decisions;
                if (got != want)
                    note_divergence("resolve_global(" + world.entity(agent).id + ", \"" + ability +
                                    "\") = " + (got ? "allowed" : "denied") + ", oracle says " +
                                    (want ? "allowed" : "denied"));
            }
        }
    }
    return report;
}

}  // namespace broac
