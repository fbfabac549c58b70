#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "tou/model.hpp"
#include "tou/planner.hpp"

namespace tou {

/// Complete 24-hour load/solar series of one user on one day, in MWh.
struct UserDayRecord {
    std::string user_id;
    int date_key = 0;  // YYYYMMDD
    std::array<double, 24> load_mwh{};
    std::array<double, 24> solar_mwh{};
};

struct IngestResult {
    std::vector<UserDayRecord> records;  // sorted by (user_id, date_key)
    std::size_t dropped_user_days = 0;   // incomplete (user, day) series
    std::vector<std::string> drop_log;
};

/// Parses hourly CSV data with header
///   timestamp,user_id,load_kwh,solar_kwh
/// Timestamps are ISO-8601 on the hour. kWh converts to MWh here. A (user,
/// day) missing any hour is dropped and logged; malformed rows and duplicate
/// (user, hour) entries raise DataError with the line number.
IngestResult ingest_csv(std::istream& in);
IngestResult ingest_csv_file(const std::string& path);

/// Hourly net load: load minus solar (scaled by solar_scale), floored at
/// zero when curtail is set (surplus generation is curtailed).
std::array<double, 24> net_load(const std::array<double, 24>& load,
                                const std::array<double, 24>& solar, bool curtail,
                                double solar_scale = 1.0);

/// The set of hours belonging to the peak period. Must be a non-empty
/// strict subset of the 24 hours.
struct PeakWindow {
    std::array<bool, 24> in_peak{};

    int hours_peak() const;
    void validate() const;  // throws ConfigError

    static PeakWindow from_hours(const std::vector<int>& hours);
    /// Default window per the evening-peak setup: 18:00 through 00:59.
    static PeakWindow evening_default();
};

/// Sums a net-load series into (peak, off-peak) daily demands.
PeriodDemand aggregate_periods(const std::array<double, 24>& net, const PeakWindow& window);

/// Per-user, per-day demand panel over the days on which every user has a
/// complete series. Scenario weights are uniform over these days.
struct UserDayTable {
    std::vector<std::string> user_ids;            // sorted
    std::vector<int> days;                        // sorted date keys
    std::vector<std::vector<PeriodDemand>> demand;  // [day][user]
    std::size_t days_dropped_incomplete = 0;

    std::size_t num_users() const { return user_ids.size(); }
    std::size_t num_days() const { return days.size(); }
};

/// Full transform: net loads, period aggregation, panel assembly.
/// demand_scale multiplies every demand (household-scale data meets
/// utility-scale cost coefficients through this knob).
UserDayTable build_table(const IngestResult& ingest, const PeakWindow& window, bool curtail,
                         double solar_scale, double demand_scale);

/// Per-type scenario set for the planner under a user->type grouping.
ScenarioSet build_scenarios(const UserDayTable& table, const std::vector<std::size_t>& grouping,
                            std::size_t num_types);

/// Per-user demand scenarios for the market simulator (same days/weights).
std::vector<UserDemandScenario> user_demand_scenarios(const UserDayTable& table);

/// Expected (weighted-mean) demand per user across the table's days.
std::vector<PeriodDemand> mean_demands(const UserDayTable& table);

/// count independent uniform partitions of num_users users into num_types
/// non-empty types, deterministic under the seed.
std::vector<std::vector<std::size_t>> sample_type_groupings(std::size_t num_users,
                                                            std::size_t num_types,
                                                            std::size_t count,
                                                            std::uint64_t seed);

/// The four-type storage-cost spread around theta_bar:
///   theta_bar * (1 - 1.5 l, 1 - 0.5 l, 1 + 0.5 l, 1 + 1.5 l).
/// Requires 0 < lambda_s < 2/3 so the list is positive and strictly
/// increasing.
std::vector<double> build_theta_catalog(double theta_bar, double lambda_s);

/// Catalog from explicit thetas and per-type aggregate demands.
std::vector<StorageType> make_catalog(const std::vector<double>& thetas,
                                      const std::vector<PeriodDemand>& aggregates);

/// Users for a table snapshot: demands from one realization (often the
/// mean), theta and type from the grouping and catalog.
std::vector<User> make_users(const UserDayTable& table, const std::vector<std::size_t>& grouping,
                             const std::vector<StorageType>& catalog,
                             const std::vector<PeriodDemand>& demands);

/// Versioned structured-text round-trip for scenario sets.
std::string serialize_scenarios(const ScenarioSet& set);
ScenarioSet parse_scenarios(const std::string& text);

}  // namespace tou
