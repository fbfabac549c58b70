#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

namespace tou {

/// Quadratic supply-cost coefficients and the two-period split of the day.
/// Period supply cost for total demand L over H hours is
///   (alpha/H) L^2 + beta L + gamma H.
struct SystemParams {
    double alpha = 1.0;   // $/(MW^2 h), must be > 0
    double beta = 0.0;    // $/MWh
    double gamma = 0.0;   // $/h
    int hours_peak = 7;   // H^p
    int hours_offpeak = 17;  // H^o, H^p + H^o == 24

    void validate() const;  // throws std::invalid_argument
};

/// One storage-cost class. theta is the daily-amortized unit capacity cost;
/// the aggregate demands are the sums over all users of the type.
struct StorageType {
    std::size_t k = 0;          // position in the catalog, ascending theta
    double theta = 0.0;         // $/MWh-day
    double d_peak_agg = 0.0;    // MWh/day
    double d_offpeak_agg = 0.0; // MWh/day
};

/// Catalog = strictly theta-increasing list of storage types.
/// Throws std::invalid_argument on empty catalogs, non-strict ordering,
/// negative values, or k fields not matching positions.
void validate_catalog(const std::vector<StorageType>& catalog);

struct User {
    std::string id;
    double theta = 0.0;      // private storage unit cost, equals catalog theta of type_k
    double d_peak = 0.0;     // MWh/day
    double d_offpeak = 0.0;  // MWh/day
    std::size_t type_k = 0;  // index into the catalog
};

void validate_users(const std::vector<User>& users, const std::vector<StorageType>& catalog);

/// Peak/off-peak demand of one entity (user or type) for one day.
struct PeriodDemand {
    double d_peak = 0.0;
    double d_offpeak = 0.0;
};

/// Invested capacity and daily shifted energy of one user.
/// Feasible decisions satisfy 0 <= shift <= capacity and shift <= d_peak.
struct UserDecision {
    double capacity = 0.0;  // MWh
    double shift = 0.0;     // MWh/day
};

struct PricePair {
    double peak = 0.0;     // $/MWh
    double offpeak = 0.0;  // $/MWh
};

/// One contract item: the price difference, the cap on invested capacity as
/// a ratio of the user's peak demand, and the per-user absolute price levels
/// synthesized under payment equalization (peak - offpeak == p_delta for
/// every user).
struct TariffItem {
    char label = 'N';  // 'F', 'P' or 'N'
    double p_delta = 0.0;
    double eta = 0.0;  // in [0,1]
    std::map<std::string, PricePair> price_levels;  // keyed by user id
};

/// Total supply cost of the peak period at load L (MWh).
double supply_cost_peak(double load, const SystemParams& params);

/// Total supply cost of the off-peak period at load L (MWh).
double supply_cost_offpeak(double load, const SystemParams& params);

/// d/dL of the period supply costs; used by the social-cost solver.
double supply_marginal_peak(double load, const SystemParams& params);
double supply_marginal_offpeak(double load, const SystemParams& params);

/// Optimal storage decision of a single user facing price difference p_delta
/// with investment capped at eta_cap * d_peak. All-or-nothing: invest the cap
/// when theta < p_delta, nothing when theta > p_delta, ties resolve to zero.
UserDecision solve_ucm(const User& user, double p_delta, double eta_cap);

/// The user's daily bill if he invests nothing, at the given price levels.
double no_storage_payment(const User& user, const PricePair& prices);

/// The user's minimized daily cost (bill plus storage) under the item,
/// using the item's price levels for this user.
/// Throws std::invalid_argument when the item has no prices for the user.
double user_cost_under_item(const User& user, const TariffItem& item);

/// Price levels for one user such that the non-investing bill equals the
/// reference payment B = p_o_ref*(d_peak+d_offpeak) + p_delta_ref*d_peak and
/// peak - offpeak == p_delta. Users with zero total demand get
/// (p_o_ref + p_delta, p_o_ref).
/// Throws InfeasibleError when the implied off-peak price is negative.
PricePair equalized_price_levels(const User& user, double p_delta, double p_delta_ref,
                                 double p_o_ref);

}  // namespace tou
