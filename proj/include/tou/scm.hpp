#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "tou/model.hpp"

namespace tou {

/// Aggregate solution of the social cost minimization: per-type capacity and
/// shift plus the decomposed cost. At the optimum capacity == shift.
struct SocialOutcome {
    std::vector<double> capacity;  // c^k, MWh
    std::vector<double> shift;     // s^k, MWh/day
    double cost_storage = 0.0;
    double cost_peak = 0.0;
    double cost_offpeak = 0.0;
    double total = 0.0;

    double total_shift() const;
};

/// Partition of the catalog into fully-investing types F, at most one
/// partially-investing type, and non-investing types N. Types with zero
/// aggregate peak demand are placed in N by convention.
struct Classification {
    std::vector<std::size_t> full;
    std::optional<std::size_t> partial;
    double partial_ratio = 0.0;  // c^b / D^{b,p}, in (0,1) when partial is set
    std::vector<std::size_t> none;
};

/// Relative tolerance for snapping a shift to the full/none boundaries when
/// classifying; stationarity residuals make exact comparisons meaningless.
inline constexpr double kClassifySnapTol = 1e-7;

/// Solves the deterministic social cost minimization over per-type aggregate
/// storage. Exploits that at the optimum c^k == s^k and the supply costs
/// depend on the shifts only through their sum: types are processed in
/// increasing theta, each shifted until its peak demand is exhausted or the
/// marginal condition
///   theta^k = g^p'(D^p_tot - S) - g^o'(D^o_tot + S)
/// binds, which identifies the unique partial type.
/// Throws std::invalid_argument on empty or non-strictly-ordered catalogs.
std::pair<SocialOutcome, Classification> solve_scm(const std::vector<StorageType>& catalog,
                                                   const SystemParams& params);

/// Exhaustive grid search over (s^1..s^K) in the box [0, D^{k,p}]^K with
/// grid_points points per axis. Validation oracle for solve_scm; not meant
/// for production use. Throws when K * grid_points^K exceeds eval_budget.
SocialOutcome scm_oracle(const std::vector<StorageType>& catalog, const SystemParams& params,
                         std::size_t grid_points, double eval_budget = 2.5e8);

/// Derives the three-class partition from a solved outcome.
/// Throws std::logic_error if more than one type is interior after snapping.
Classification classify(const SocialOutcome& outcome, const std::vector<StorageType>& catalog,
                        double rel_tol = kClassifySnapTol);

/// Objective value of an arbitrary feasible shift vector with c == s.
double scm_objective(const std::vector<double>& shift, const std::vector<StorageType>& catalog,
                     const SystemParams& params);

}  // namespace tou
