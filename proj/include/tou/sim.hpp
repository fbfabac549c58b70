#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "tou/contract.hpp"
#include "tou/model.hpp"

namespace tou {

struct UserSimDecision {
    std::string user_id;
    char item = 'N';
    double capacity = 0.0;
    double shift = 0.0;
    double cost = 0.0;  // bill plus storage cost
};

struct SimResult {
    double peak_load = 0.0;     // MWh after shifting
    double offpeak_load = 0.0;  // MWh after shifting
    double cost_storage = 0.0;
    double cost_peak = 0.0;
    double cost_offpeak = 0.0;
    double total = 0.0;
    std::vector<UserSimDecision> decisions;
    std::map<char, std::size_t> class_counts;  // chosen items
    std::vector<std::string> warnings;
};

/// One realization of every user's daily demand, aligned with a user vector.
struct UserDemandScenario {
    double weight = 1.0;
    std::vector<PeriodDemand> demand;  // one entry per user, same order
};

/// Decentralized outcome for one demand realization: every user picks the
/// cost-minimizing item (ties resolve to the intended item when it is among
/// the minimizers, otherwise to the minimizer with the lowest cap) and
/// invests per the all-or-nothing rule. The users' own demands are used;
/// type_aggregates, when given, are cross-checked and mismatches reported
/// as warnings only.
SimResult simulate(const Contract& contract, const std::vector<User>& users,
                   const SystemParams& params,
                   const std::vector<PeriodDemand>* type_aggregates = nullptr);

/// Copy of users with demands replaced by one scenario's realization.
std::vector<User> users_with_demands(const std::vector<User>& users,
                                     const std::vector<PeriodDemand>& demand);

/// Social cost with no storage at all for the given users' demands.
double no_storage_cost(const std::vector<User>& users, const SystemParams& params);

struct ExpectedSimResult {
    double expected_cost = 0.0;             // contract outcome
    double expected_no_storage_cost = 0.0;  // same demands, zero investment
    double kappa_no = 1.0;
    std::vector<double> per_scenario_cost;
};

/// Expected simulated social cost over a set of per-user demand scenarios.
/// Weights are applied in scenario order for deterministic summation.
ExpectedSimResult simulate_expected(const Contract& contract, const std::vector<User>& users,
                                    const SystemParams& params,
                                    const std::vector<UserDemandScenario>& scenarios);

/// Ratio of the expected no-storage social cost to the expected social cost
/// under the contract. Above one whenever the contract reduces cost.
double kappa_no(const Contract& contract, const std::vector<User>& users,
                const SystemParams& params, const std::vector<UserDemandScenario>& scenarios);

}  // namespace tou
