#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "tou/model.hpp"
#include "tou/scm.hpp"

namespace tou {

struct Interval {
    double lo = 0.0;
    double hi = 0.0;  // open on both ends; hi may be +inf
    bool contains(double x) const { return x > lo && x < hi; }
    double width() const { return hi - lo; }
};

/// Feasible price-difference region for the three contract items, derived
/// from the classification's boundary costs. The p_F and p_P conditions are
/// coupled, so the region is parameterized: pick p_P in p_p_interval(), then
/// p_F in p_f_interval(p_P). theta_c is +inf when class N is empty. When
/// class F is empty the F item must attract nobody, so its interval drops
/// below every catalog theta instead.
struct PriceDifferenceIntervals {
    double theta_a = 0.0;    // highest cost in F, 0 when F empty
    double theta_b = 0.0;    // partial type's cost, theta_c when P empty
    double theta_c = 0.0;    // lowest cost in N, +inf when N empty
    double eta_p = 0.0;      // partial ratio, 0 when P empty
    bool f_empty = false;
    bool p_empty = false;
    bool n_empty = false;
    double theta_floor = 0.0;  // smallest theta in the catalog

    Interval p_p_interval() const;            // (theta_b, theta_c); empty-width when P empty
    Interval p_f_interval(double p_p) const;  // induced by the chosen p_P
    double p_n_lower() const { return 0.0; }

    /// Membership test for a full price-difference point.
    bool contains(double p_f, double p_p, double p_n) const;
};

struct PricePoint {
    double p_f = 0.0;
    double p_p = 0.0;
    double p_n = 0.0;
};

/// The three-item menu plus the per-user intended classes.
struct Contract {
    std::array<TariffItem, 3> items;  // F, P, N in that order
    std::map<std::string, char> intended;  // user id -> 'F' | 'P' | 'N'
    bool f_class_missing = false;     // menu still carries an (inert) F item
    double p_o_ref = 0.0;

    const TariffItem& item(char label) const;
};

/// Per-user incentive-compatibility check result. A user whose cost is
/// identical across all items (class-N users, zero-demand users) passes
/// vacuously: the tie-break sends him to the intended item and his induced
/// investment is the same everywhere.
struct IcEntry {
    std::string user_id;
    char intended = 'N';
    char best = 'N';
    double margin = 0.0;  // min over other items of (their cost - intended cost)
    bool vacuous = false;
    bool invests_at_cap = true;  // requirement (ii) for F/P users
    bool pass = false;
};

struct IcReport {
    std::vector<IcEntry> entries;
    bool all_pass = true;
    double min_strict_margin = 0.0;  // over non-vacuous entries; 0 when none
    std::size_t num_vacuous = 0;
};

/// Builds the feasible price-difference region of the classification.
/// Requires theta_a < theta_b < theta_c after sentinel substitution; the
/// strict catalog ordering guarantees this, so an empty region indicates a
/// bug upstream (throws InfeasibleError).
PriceDifferenceIntervals theorem1_intervals(const Classification& cls,
                                            const std::vector<StorageType>& catalog);

/// Deterministic interior point: p_P at the midpoint of its outer interval
/// (unbounded ends capped at 2*lo + 1), then p_F at the midpoint of the
/// induced interval, p_N = 0. Throws InfeasibleError when the region is
/// empty beyond the degenerate theta_floor == 0 case.
PricePoint select_point(const PriceDifferenceIntervals& intervals);

/// Assembles the full contract: eta values from the classification, price
/// differences from select_point, per-user price levels from the payment
/// equalization system anchored at p_o_ref.
Contract build_contract(const Classification& cls, const std::vector<StorageType>& catalog,
                        const std::vector<User>& users, double p_o_ref = 20.0);

/// Checks Definition-1 incentive compatibility plus full investment at the
/// cap for every user against the contract's intended classes.
IcReport verify_ic(const Contract& contract, const std::vector<User>& users);

/// Flat key-value rendering of a contract (one record per line).
std::string contract_to_text(const Contract& contract);

}  // namespace tou
