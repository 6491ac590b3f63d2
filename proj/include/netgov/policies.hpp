#pragma once

#include "netgov/agents.hpp"

namespace netgov::manager {

/// Two-step hierarchical selection. The returned action carries the selected
/// node in .u and the partner in .v. Nodes without any valid partner are
/// excluded and the node choice re-drawn.
env::ManagerAction hgrl_act(const NodeAgent& node_agent, const LinkAgent& link_agent,
                            const env::EnvState& state, double eps_node, double eps_link,
                            Rng& rng);

env::ManagerAction flat_act(const FlatAgent& agent, const env::EnvState& state, double eps,
                            Rng& rng);

/// Uniform over valid_actions(state.network).
env::ManagerAction random_act(const env::EnvState& state, Rng& rng);

}  // namespace netgov::manager
