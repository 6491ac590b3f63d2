#include "netgov/policies.hpp"

#include "netgov/dqn.hpp"
#include "netgov/errors.hpp"

namespace netgov::manager {

env::ManagerAction hgrl_act(const NodeAgent& node_agent, const LinkAgent& link_agent,
                            const env::EnvState& state, double eps_node, double eps_link,
                            Rng& rng) {
    const nn::Vector node_q = node_agent.q_values(state);
    const std::vector<std::uint8_t> has_partner = node_valid_mask(state.network);
    std::vector<std::uint8_t> selectable(node_q.size(), 1);
    int selected;
    for (;;) {
        selected = rl::epsilon_greedy(node_q, selectable, eps_node, rng);
        if (has_partner[static_cast<std::size_t>(selected)]) break;
        selectable[static_cast<std::size_t>(selected)] = 0;
    }
    const nn::Vector link_q = link_agent.q_values({state, selected});
    const std::vector<std::uint8_t> mask = link_valid_mask(state.network, selected);
    const int partner = rl::epsilon_greedy(link_q, mask, eps_link, rng);
    return {selected, partner};
}

env::ManagerAction flat_act(const FlatAgent& agent, const env::EnvState& state, double eps,
                            Rng& rng) {
    const nn::Vector q = agent.q_values(state);
    const std::vector<std::uint8_t> mask = flat_valid_mask(state.network);
    return pair_action(rl::epsilon_greedy(q, mask, eps, rng), agent.n);
}

env::ManagerAction random_act(const env::EnvState& state, Rng& rng) {
    const std::vector<env::ManagerAction> actions = env::valid_actions(state.network);
    if (actions.empty()) throw NoValidActionError("no valid intervention in state");
    return actions[rng.uniform_int(actions.size())];
}

}  // namespace netgov::manager
