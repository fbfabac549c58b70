#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "tou/data.hpp"

namespace tou {

/// Synthetic household panel with an evening demand peak and midday solar,
/// shaped like a year of smart-meter data. Deterministic under the seed.
struct SynthParams {
    std::size_t num_users = 40;
    std::size_t num_days = 40;
    std::uint64_t seed = 1;
    int start_date = 20240101;
    double base_load_kwh = 1.0;      // per-user hourly scale
    double solar_peak_kwh = 2.7;     // per-user midday solar at weather 1.0
    double day_swing = 0.18;         // seasonal modulation of load
    double hour_noise = 0.12;        // multiplicative per-hour jitter
    double weather_min = 0.25;       // daily solar availability range
    double weather_max = 1.0;
};

/// In-memory generation: complete hourly series per (user, day).
IngestResult generate_synth(const SynthParams& params);

/// Same data rendered as the ingestion CSV schema.
void write_synth_csv(std::ostream& out, const SynthParams& params);
void write_synth_csv_file(const std::string& path, const SynthParams& params);

}  // namespace tou
