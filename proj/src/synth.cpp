#include "tou/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "tou/errors.hpp"
#include "tou/rng.hpp"

namespace tou {

namespace {

// relative hourly load profile: overnight trough, morning bump, evening peak
constexpr double kLoadShape[24] = {1.5, 1.0, 0.8, 0.7, 0.7, 0.8, 1.0, 1.2, 1.1, 1.0, 0.9, 0.9,
                                   0.95, 0.9, 0.9, 1.0, 1.2, 1.6, 2.4, 2.8, 2.9, 2.7, 2.2, 1.8};

double solar_shape(int hour) {
    const double x = (static_cast<double>(hour) - 12.2) / 2.6;
    const double v = std::exp(-0.5 * x * x);
    return v < 1e-3 ? 0.0 : v;
}

// advance the date key by one calendar day (Gregorian)
int next_date(int date_key) {
    int y = date_key / 10000, m = (date_key / 100) % 100, d = date_key % 100;
    static const int mdays[12] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    int dim = mdays[m - 1];
    if (m == 2 && (y % 4 == 0 && (y % 100 != 0 || y % 400 == 0))) dim = 29;
    if (++d > dim) {
        d = 1;
        if (++m > 12) {
            m = 1;
            ++y;
        }
    }
    return y * 10000 + m * 100 + d;
}

}  // namespace

IngestResult generate_synth(const SynthParams& p) {
    if (p.num_users == 0 || p.num_days == 0)
        throw ConfigError("synthetic data: need at least one user and one day");
    std::mt19937_64 rng(p.seed);

    // per-user scale and seasonal phase
    std::vector<double> user_scale(p.num_users), user_phase(p.num_users), user_solar(p.num_users);
    for (std::size_t u = 0; u < p.num_users; ++u) {
        user_scale[u] = uniform_range(rng, 0.55, 1.9);
        user_phase[u] = uniform_range(rng, 0.0, 6.283185307179586);
        user_solar[u] = p.solar_peak_kwh * uniform_range(rng, 0.6, 1.4);
    }

    IngestResult out;
    int date = p.start_date;
    for (std::size_t d = 0; d < p.num_days; ++d) {
        const double season = std::sin(6.283185307179586 * static_cast<double>(d) /
                                       static_cast<double>(p.num_days));
        const double weather = uniform_range(rng, p.weather_min, p.weather_max);
        for (std::size_t u = 0; u < p.num_users; ++u) {
            UserDayRecord rec;
            rec.user_id = "u" + std::string(3 - std::to_string(u + 1).size(), '0') +
                          std::to_string(u + 1);
            rec.date_key = date;
            const double day_level =
                1.0 + p.day_swing * (season * std::cos(user_phase[u]) + uniform_range(rng, -0.5, 0.5));
            for (int h = 0; h < 24; ++h) {
                const double jitter = uniform_range(rng, 1.0 - p.hour_noise, 1.0 + p.hour_noise);
                const double load = p.base_load_kwh * user_scale[u] * kLoadShape[h] *
                                    std::max(0.1, day_level) * jitter;
                const double solar = user_solar[u] * weather * solar_shape(h) *
                                     uniform_range(rng, 0.9, 1.1);
                rec.load_mwh[h] = load / 1000.0;
                rec.solar_mwh[h] = solar / 1000.0;
            }
            out.records.push_back(std::move(rec));
        }
        date = next_date(date);
    }
    // match ingest_csv ordering: (user_id, date_key)
    std::sort(out.records.begin(), out.records.end(),
              [](const UserDayRecord& a, const UserDayRecord& b) {
                  return a.user_id != b.user_id ? a.user_id < b.user_id
                                                : a.date_key < b.date_key;
              });
    return out;
}

void write_synth_csv(std::ostream& os, const SynthParams& p) {
    const IngestResult data = generate_synth(p);
    os << "timestamp,user_id,load_kwh,solar_kwh\n";
    char ts[32], num[32];
    for (const UserDayRecord& rec : data.records) {
        const int y = rec.date_key / 10000, m = (rec.date_key / 100) % 100,
                  d = rec.date_key % 100;
        for (int h = 0; h < 24; ++h) {
            std::snprintf(ts, sizeof(ts), "%04d-%02d-%02dT%02d:00:00", y, m, d, h);
            os << ts << "," << rec.user_id << ",";
            std::snprintf(num, sizeof(num), "%.6f", rec.load_mwh[h] * 1000.0);
            os << num << ",";
            std::snprintf(num, sizeof(num), "%.6f", rec.solar_mwh[h] * 1000.0);
            os << num << "\n";
        }
    }
}

void write_synth_csv_file(const std::string& path, const SynthParams& params) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write synthetic data file: " + path);
    write_synth_csv(out, params);
}

}  // namespace tou
