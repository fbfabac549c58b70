#include "tou/sim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tou {

SimResult simulate(const Contract& contract, const std::vector<User>& users,
                   const SystemParams& params,
                   const std::vector<PeriodDemand>* type_aggregates) {
    params.validate();
    SimResult r;
    double peak_gross = 0.0, offpeak_gross = 0.0, shifted = 0.0;

    for (const User& u : users) {
        double cost[3];
        for (int i = 0; i < 3; ++i) cost[i] = user_cost_under_item(u, contract.items[i]);
        const double scale =
            std::max({1.0, std::abs(cost[0]), std::abs(cost[1]), std::abs(cost[2])});
        const double tol = 1e-12 * scale;
        const double min_cost = std::min({cost[0], cost[1], cost[2]});

        int pick = -1;
        const auto it = contract.intended.find(u.id);
        if (it != contract.intended.end()) {
            for (int i = 0; i < 3; ++i)
                if (contract.items[i].label == it->second && cost[i] <= min_cost + tol) pick = i;
        }
        if (pick < 0) {
            for (int i = 0; i < 3; ++i)
                if (cost[i] <= min_cost + tol &&
                    (pick < 0 || contract.items[i].eta < contract.items[pick].eta))
                    pick = i;
        }

        const TariffItem& item = contract.items[pick];
        UserDecision d = solve_ucm(u, item.p_delta, item.eta);
        d.shift = std::min(d.shift, u.d_peak);  // realized peak demand caps discharge

        r.decisions.push_back({u.id, item.label, d.capacity, d.shift, cost[pick]});
        r.class_counts[item.label]++;
        r.cost_storage += u.theta * d.capacity;
        peak_gross += u.d_peak;
        offpeak_gross += u.d_offpeak;
        shifted += d.shift;
    }

    r.peak_load = std::max(0.0, peak_gross - shifted);
    r.offpeak_load = offpeak_gross + shifted;
    r.cost_peak = supply_cost_peak(r.peak_load, params);
    r.cost_offpeak = supply_cost_offpeak(r.offpeak_load, params);
    r.total = r.cost_storage + r.cost_peak + r.cost_offpeak;

    if (type_aggregates) {
        std::vector<PeriodDemand> agg(type_aggregates->size());
        for (const User& u : users) {
            if (u.type_k >= agg.size()) continue;
            agg[u.type_k].d_peak += u.d_peak;
            agg[u.type_k].d_offpeak += u.d_offpeak;
        }
        for (std::size_t k = 0; k < agg.size(); ++k) {
            const PeriodDemand& want = (*type_aggregates)[k];
            const double s = std::max({1.0, want.d_peak, want.d_offpeak});
            if (std::abs(agg[k].d_peak - want.d_peak) > 1e-9 * s ||
                std::abs(agg[k].d_offpeak - want.d_offpeak) > 1e-9 * s)
                r.warnings.push_back("type " + std::to_string(k) +
                                     ": user demands do not sum to the scenario aggregate");
        }
    }
    return r;
}

std::vector<User> users_with_demands(const std::vector<User>& users,
                                     const std::vector<PeriodDemand>& demand) {
    if (demand.size() != users.size())
        throw std::invalid_argument("users_with_demands: demand entries != users");
    std::vector<User> out = users;
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i].d_peak = demand[i].d_peak;
        out[i].d_offpeak = demand[i].d_offpeak;
    }
    return out;
}

double no_storage_cost(const std::vector<User>& users, const SystemParams& params) {
    double peak = 0.0, offpeak = 0.0;
    for (const User& u : users) {
        peak += u.d_peak;
        offpeak += u.d_offpeak;
    }
    return supply_cost_peak(peak, params) + supply_cost_offpeak(offpeak, params);
}

ExpectedSimResult simulate_expected(const Contract& contract, const std::vector<User>& users,
                                    const SystemParams& params,
                                    const std::vector<UserDemandScenario>& scenarios) {
    if (scenarios.empty()) throw std::invalid_argument("simulate_expected: no scenarios");
    ExpectedSimResult r;
    for (const UserDemandScenario& sc : scenarios) {
        const std::vector<User> realized = users_with_demands(users, sc.demand);
        const SimResult sim = simulate(contract, realized, params);
        r.per_scenario_cost.push_back(sim.total);
        r.expected_cost += sc.weight * sim.total;
        r.expected_no_storage_cost += sc.weight * no_storage_cost(realized, params);
    }
    if (!(r.expected_cost > 0.0))
        throw std::domain_error("simulate_expected: expected cost is not positive");
    r.kappa_no = r.expected_no_storage_cost / r.expected_cost;
    return r;
}

double kappa_no(const Contract& contract, const std::vector<User>& users,
                const SystemParams& params, const std::vector<UserDemandScenario>& scenarios) {
    return simulate_expected(contract, users, params, scenarios).kappa_no;
}

}  // namespace tou
