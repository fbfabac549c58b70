#pragma once

#include <cstddef>
#include <vector>

#include "tou/model.hpp"
#include "tou/scm.hpp"

namespace tou {

/// One joint realization of all types' peak/off-peak demands.
struct Scenario {
    double weight = 1.0;
    std::vector<PeriodDemand> demand;  // indexed by type
};

/// Finite-support demand distribution: weights sum to one, every scenario
/// carries an entry for each of the num_types types.
struct ScenarioSet {
    std::size_t num_types = 0;
    std::vector<Scenario> scenarios;

    void validate() const;  // throws std::invalid_argument
};

/// Boundary-partition plan: types below boundary_type invest fully, types
/// above invest nothing, the boundary type invests the ratio eta_b of its
/// peak demand in every realization.
struct BoundaryPlan {
    double expected_cost = 0.0;  // Sym^c
    std::size_t boundary_type = 0;
    double eta_b = 0.0;  // in [0,1]
};

struct PlanResult {
    double sym_b = 0.0;   // ESCM optimum
    double sym_c = 0.0;   // ESCM-C optimum
    std::size_t boundary_type = 0;
    double eta_b = 0.0;
    double kappa = 1.0;   // sym_c / sym_b
};

/// First-best benchmark under incomplete information: the expectation
/// decouples into one deterministic social cost minimization per realization.
/// Only the thetas of the catalog matter; demands come from the scenarios.
double solve_escm(const ScenarioSet& scenarios, const std::vector<StorageType>& catalog,
                  const SystemParams& params);

/// Contract-constrained optimum: exhaustive search over the boundary type,
/// with the inner minimization over eta_b solved in closed form (the expected
/// cost is a convex quadratic in eta_b). Ties between boundary candidates
/// break toward the smaller index.
BoundaryPlan solve_escm_c(const ScenarioSet& scenarios, const std::vector<StorageType>& catalog,
                          const SystemParams& params);

/// Expected cost of a fixed boundary plan (b, eta) — the ESCM-C objective
/// without the minimization. Exposed for tests and the market simulator.
double boundary_plan_cost(const ScenarioSet& scenarios, const std::vector<StorageType>& catalog,
                          const SystemParams& params, std::size_t boundary_type, double eta);

/// Ratio of the contract-constrained to the first-best expected cost.
/// Throws std::domain_error when sym_b is not positive.
double kappa(double sym_c, double sym_b);

/// Convenience wrapper running both problems and forming kappa.
PlanResult plan(const ScenarioSet& scenarios, const std::vector<StorageType>& catalog,
                const SystemParams& params);

/// Classification induced by a boundary plan, for contract building.
/// eta snapping: >= 1-tol joins the boundary type to F, <= tol to N.
Classification classification_from_boundary(const std::vector<StorageType>& catalog,
                                            std::size_t boundary_type, double eta,
                                            double snap_tol = kClassifySnapTol);

}  // namespace tou
