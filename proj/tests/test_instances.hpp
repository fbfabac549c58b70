#pragma once

// Seeded random instance builders shared by the unit and acceptance suites.

#include <random>
#include <string>
#include <vector>

#include "tou/model.hpp"
#include "tou/planner.hpp"
#include "tou/rng.hpp"
#include "tou/sim.hpp"

namespace tou::testing {

inline SystemParams random_params(std::mt19937_64& rng) {
    SystemParams p;
    p.alpha = uniform_range(rng, 0.2, 3.0);
    p.beta = uniform_range(rng, 0.0, 5.0);
    p.gamma = uniform_range(rng, 0.0, 3.0);
    p.hours_peak = 1 + static_cast<int>(uniform_u64_below(rng, 23));
    p.hours_offpeak = 24 - p.hours_peak;
    return p;
}

// strictly increasing thetas with a guaranteed gap
inline std::vector<double> random_thetas(std::mt19937_64& rng, std::size_t K, double lo = 0.2,
                                         double step_min = 0.15, double step_max = 6.0) {
    std::vector<double> thetas(K);
    double t = uniform_range(rng, lo, lo + 2.0);
    for (std::size_t k = 0; k < K; ++k) {
        thetas[k] = t;
        t += uniform_range(rng, step_min, step_max);
    }
    return thetas;
}

inline std::vector<StorageType> random_catalog(std::mt19937_64& rng, std::size_t K,
                                               double demand_max = 10.0) {
    const std::vector<double> thetas = random_thetas(rng, K);
    std::vector<StorageType> catalog(K);
    for (std::size_t k = 0; k < K; ++k)
        catalog[k] = {k, thetas[k], uniform_range(rng, 0.05, demand_max),
                      uniform_range(rng, 0.05, demand_max)};
    return catalog;
}

// users whose per-type demand sums reproduce the catalog aggregates exactly:
// each type's aggregate is split across a few users by random proportions
struct InstanceWithUsers {
    std::vector<StorageType> catalog;
    std::vector<User> users;
};

inline InstanceWithUsers random_instance_with_users(std::mt19937_64& rng, std::size_t K,
                                                    std::size_t users_per_type = 3,
                                                    double demand_max = 10.0) {
    InstanceWithUsers inst;
    const std::vector<double> thetas = random_thetas(rng, K);
    inst.catalog.resize(K);
    for (std::size_t k = 0; k < K; ++k) {
        std::vector<double> wp(users_per_type), wo(users_per_type);
        double sp = 0.0, so = 0.0;
        for (std::size_t i = 0; i < users_per_type; ++i) {
            wp[i] = uniform_range(rng, 0.05, 1.0);
            wo[i] = uniform_range(rng, 0.05, 1.0);
            sp += wp[i];
            so += wo[i];
        }
        double d_peak = 0.0, d_off = 0.0;
        for (std::size_t i = 0; i < users_per_type; ++i) {
            User u;
            u.id = "t" + std::to_string(k) + "u" + std::to_string(i);
            u.type_k = k;
            u.theta = thetas[k];
            u.d_peak = uniform_range(rng, 0.1, demand_max) * wp[i] / sp;
            u.d_offpeak = uniform_range(rng, 0.1, demand_max) * wo[i] / so;
            d_peak += u.d_peak;
            d_off += u.d_offpeak;
            inst.users.push_back(std::move(u));
        }
        inst.catalog[k] = {k, thetas[k], d_peak, d_off};
    }
    return inst;
}

// per-user demand scenarios plus the matching per-type scenario set
struct StochasticInstance {
    std::vector<StorageType> catalog;  // aggregates = expected demands
    std::vector<User> users;           // demands = expected demands
    ScenarioSet scenarios;             // per-type
    std::vector<UserDemandScenario> user_scenarios;
};

inline StochasticInstance random_stochastic_instance(std::mt19937_64& rng, std::size_t K,
                                                     std::size_t num_scenarios,
                                                     std::size_t users_per_type = 2) {
    StochasticInstance inst;
    const std::vector<double> thetas = random_thetas(rng, K);
    const std::size_t n_users = K * users_per_type;

    std::vector<double> base_peak(n_users), base_off(n_users);
    std::vector<std::size_t> type_of(n_users);
    for (std::size_t u = 0; u < n_users; ++u) {
        type_of[u] = u % K;
        base_peak[u] = uniform_range(rng, 0.3, 8.0);
        base_off[u] = uniform_range(rng, 0.3, 8.0);
    }

    std::vector<double> weights(num_scenarios);
    double wsum = 0.0;
    for (double& w : weights) {
        w = uniform_range(rng, 0.2, 1.0);
        wsum += w;
    }
    for (double& w : weights) w /= wsum;
    // renormalize exactly so validate() accepts
    double acc = 0.0;
    for (std::size_t s = 0; s + 1 < num_scenarios; ++s) acc += weights[s];
    weights[num_scenarios - 1] = 1.0 - acc;

    inst.scenarios.num_types = K;
    std::vector<PeriodDemand> expected(n_users);
    for (std::size_t s = 0; s < num_scenarios; ++s) {
        UserDemandScenario us;
        us.weight = weights[s];
        us.demand.resize(n_users);
        Scenario sc;
        sc.weight = weights[s];
        sc.demand.resize(K);
        for (std::size_t u = 0; u < n_users; ++u) {
            us.demand[u].d_peak = base_peak[u] * uniform_range(rng, 0.4, 1.6);
            us.demand[u].d_offpeak = base_off[u] * uniform_range(rng, 0.4, 1.6);
            sc.demand[type_of[u]].d_peak += us.demand[u].d_peak;
            sc.demand[type_of[u]].d_offpeak += us.demand[u].d_offpeak;
            expected[u].d_peak += weights[s] * us.demand[u].d_peak;
            expected[u].d_offpeak += weights[s] * us.demand[u].d_offpeak;
        }
        inst.user_scenarios.push_back(std::move(us));
        inst.scenarios.scenarios.push_back(std::move(sc));
    }

    inst.catalog.resize(K);
    for (std::size_t u = 0; u < n_users; ++u) {
        inst.catalog[type_of[u]].d_peak_agg += expected[u].d_peak;
        inst.catalog[type_of[u]].d_offpeak_agg += expected[u].d_offpeak;
    }
    for (std::size_t k = 0; k < K; ++k) {
        inst.catalog[k].k = k;
        inst.catalog[k].theta = thetas[k];
    }
    for (std::size_t u = 0; u < n_users; ++u) {
        User usr;
        usr.id = "u" + std::to_string(u);
        usr.type_k = type_of[u];
        usr.theta = thetas[type_of[u]];
        usr.d_peak = expected[u].d_peak;
        usr.d_offpeak = expected[u].d_offpeak;
        inst.users.push_back(std::move(usr));
    }
    return inst;
}

}  // namespace tou::testing
