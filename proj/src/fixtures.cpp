#include "riskdp/fixtures.hpp"

#include <cmath>
#include <numeric>

namespace riskdp::fixtures {

std::vector<double> random_probabilities(Rng& rng, std::size_t n) {
    std::uniform_real_distribution<double> w(0.05, 1.0);
    std::vector<double> p(n);
    for (auto& x : p)
        x = w(rng);
    const double total = std::accumulate(p.begin(), p.end(), 0.0);
    for (auto& x : p)
        x /= total;
    return p;
}

DiscreteDistribution random_distribution(Rng& rng, std::size_t max_atoms) {
    std::uniform_int_distribution<std::size_t> count(1, max_atoms);
    std::uniform_real_distribution<double> value(-10.0, 10.0);
    std::bernoulli_distribution round(0.2);
    const std::size_t n = count(rng);
    const auto probs = random_probabilities(rng, n);
    std::vector<Atom> atoms(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double v = value(rng);
        atoms[i] = {round(rng) ? std::round(v / 4.0) : v, probs[i]};
    }
    return DiscreteDistribution(std::move(atoms));
}

MarkovModel random_tabular_model(Rng& rng, std::size_t num_states, std::size_t num_actions,
                                 double discount) {
    std::uniform_real_distribution<double> weight(0.05, 1.0);
    std::uniform_real_distribution<double> cost(0.0, 10.0);
    std::bernoulli_distribution zero(0.3);
    std::uniform_int_distribution<std::size_t> pick(0, num_states - 1);

    TabularKernel kernel;
    std::vector<std::vector<double>> costs(num_states, std::vector<double>(num_actions));
    kernel.rows.assign(num_states, std::vector<std::vector<double>>(num_actions));
    for (std::size_t s = 0; s < num_states; ++s)
        for (std::size_t a = 0; a < num_actions; ++a) {
            auto& row = kernel.rows[s][a];
            row.assign(num_states, 0.0);
            for (auto& x : row)
                x = zero(rng) ? 0.0 : weight(rng);
            if (std::accumulate(row.begin(), row.end(), 0.0) == 0.0)
                row[pick(rng)] = 1.0;
            const double total = std::accumulate(row.begin(), row.end(), 0.0);
            for (auto& x : row)
                x /= total;
            costs[s][a] = cost(rng);
        }
    return build_tabular(std::move(kernel), costs, discount);
}

Policy random_policy(Rng& rng, const MarkovModel& model, std::size_t depth) {
    Policy p;
    p.repeat_last = false;
    for (std::size_t k = 0; k <= depth; ++k) {
        StagePolicy rule(model.num_states());
        for (std::size_t s = 0; s < rule.size(); ++s) {
            const auto& adm = model.actions().admissible(s);
            std::uniform_int_distribution<std::size_t> pick(0, adm.size() - 1);
            rule[s] = adm[pick(rng)];
        }
        p.stages.push_back(std::move(rule));
    }
    return p;
}

} // namespace riskdp::fixtures
