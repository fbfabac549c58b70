#include "tou/data.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "tou/errors.hpp"
#include "tou/report.hpp"
#include "tou/rng.hpp"

namespace tou {

namespace {

struct ParsedRow {
    int date_key = 0;
    int hour = 0;
    std::string user_id;
    double load_kwh = 0.0;
    double solar_kwh = 0.0;
};

bool parse_double(const std::string& s, double& out) {
    if (s.empty()) return false;
    std::size_t pos = 0;
    try {
        out = std::stod(s, &pos);
    } catch (const std::exception&) {
        return false;
    }
    return pos == s.size() && std::isfinite(out);
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

// "YYYY-MM-DD[T ]HH:00[:00][Z]" -> date key and hour
bool parse_timestamp(const std::string& ts, int& date_key, int& hour) {
    if (ts.size() < 16) return false;
    const auto digits = [&](std::size_t pos, std::size_t n, int& out) {
        out = 0;
        for (std::size_t i = pos; i < pos + n; ++i) {
            if (ts[i] < '0' || ts[i] > '9') return false;
            out = out * 10 + (ts[i] - '0');
        }
        return true;
    };
    int y, mo, d, h, mi;
    if (!digits(0, 4, y) || ts[4] != '-' || !digits(5, 2, mo) || ts[7] != '-' ||
        !digits(8, 2, d) || (ts[10] != 'T' && ts[10] != ' ') || !digits(11, 2, h) ||
        ts[13] != ':' || !digits(14, 2, mi))
        return false;
    if (ts.size() > 16) {
        const std::string rest = ts.substr(16);
        int sec;
        if (rest == "Z") {
            // ok
        } else if (rest.size() >= 3 && rest[0] == ':' && digits(17, 2, sec)) {
            if (sec != 0) return false;
            if (ts.size() > 19 && ts.substr(19) != "Z") return false;
        } else {
            return false;
        }
    }
    if (mo < 1 || mo > 12 || d < 1 || d > 31 || h < 0 || h > 23 || mi != 0) return false;
    date_key = y * 10000 + mo * 100 + d;
    hour = h;
    return true;
}

}  // namespace

IngestResult ingest_csv(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;

    if (!std::getline(in, line)) throw DataError("csv: empty input");
    ++line_no;
    {
        std::istringstream hs(line);
        std::string col;
        std::vector<std::string> cols;
        while (std::getline(hs, col, ',')) cols.push_back(trim(col));
        const std::vector<std::string> want = {"timestamp", "user_id", "load_kwh", "solar_kwh"};
        if (cols != want)
            throw DataError("csv line 1: header must be timestamp,user_id,load_kwh,solar_kwh");
    }

    // (user, day) -> per-hour slots
    struct DaySlots {
        std::array<double, 24> load{}, solar{};
        std::array<bool, 24> seen{};
    };
    std::map<std::pair<std::string, int>, DaySlots> slots;

    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        std::istringstream ls(line);
        std::string f0, f1, f2, f3, extra;
        if (!std::getline(ls, f0, ',') || !std::getline(ls, f1, ',') ||
            !std::getline(ls, f2, ',') || !std::getline(ls, f3, ','))
            throw DataError("csv line " + std::to_string(line_no) + ": expected 4 columns");
        if (std::getline(ls, extra, ','))
            throw DataError("csv line " + std::to_string(line_no) + ": too many columns");

        ParsedRow row;
        if (!parse_timestamp(trim(f0), row.date_key, row.hour))
            throw DataError("csv line " + std::to_string(line_no) + ": bad timestamp '" +
                            trim(f0) + "'");
        row.user_id = trim(f1);
        if (row.user_id.empty())
            throw DataError("csv line " + std::to_string(line_no) + ": empty user_id");
        if (!parse_double(trim(f2), row.load_kwh) || !parse_double(trim(f3), row.solar_kwh))
            throw DataError("csv line " + std::to_string(line_no) + ": bad numeric field");
        if (row.load_kwh < 0.0 || row.solar_kwh < 0.0)
            throw DataError("csv line " + std::to_string(line_no) + ": negative energy");

        DaySlots& ds = slots[{row.user_id, row.date_key}];
        if (ds.seen[row.hour])
            throw DataError("csv line " + std::to_string(line_no) + ": duplicate (user,hour) " +
                            row.user_id + " " + std::to_string(row.date_key) + "h" +
                            std::to_string(row.hour));
        ds.seen[row.hour] = true;
        ds.load[row.hour] = row.load_kwh / 1000.0;   // kWh -> MWh
        ds.solar[row.hour] = row.solar_kwh / 1000.0;
    }

    IngestResult result;
    for (const auto& [key, ds] : slots) {
        int missing = 0;
        for (bool s : ds.seen)
            if (!s) ++missing;
        if (missing > 0) {
            ++result.dropped_user_days;
            result.drop_log.push_back("drop user=" + key.first +
                                      " day=" + std::to_string(key.second) +
                                      " missing_hours=" + std::to_string(missing));
            continue;
        }
        UserDayRecord rec;
        rec.user_id = key.first;
        rec.date_key = key.second;
        rec.load_mwh = ds.load;
        rec.solar_mwh = ds.solar;
        result.records.push_back(std::move(rec));
    }
    // std::map iteration already sorted by (user_id, date_key)
    return result;
}

IngestResult ingest_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open data file: " + path);
    return ingest_csv(in);
}

std::array<double, 24> net_load(const std::array<double, 24>& load,
                                const std::array<double, 24>& solar, bool curtail,
                                double solar_scale) {
    std::array<double, 24> net{};
    for (int h = 0; h < 24; ++h) {
        net[h] = load[h] - solar_scale * solar[h];
        if (curtail && net[h] < 0.0) net[h] = 0.0;
    }
    return net;
}

int PeakWindow::hours_peak() const {
    int n = 0;
    for (bool b : in_peak)
        if (b) ++n;
    return n;
}

void PeakWindow::validate() const {
    const int n = hours_peak();
    if (n == 0) throw ConfigError("peak window: empty");
    if (n == 24) throw ConfigError("peak window: covers the whole day");
}

PeakWindow PeakWindow::from_hours(const std::vector<int>& hours) {
    PeakWindow w;
    for (int h : hours) {
        if (h < 0 || h > 23) throw ConfigError("peak window: hour out of range");
        if (w.in_peak[h]) throw ConfigError("peak window: duplicate hour");
        w.in_peak[h] = true;
    }
    w.validate();
    return w;
}

PeakWindow PeakWindow::evening_default() {
    return from_hours({18, 19, 20, 21, 22, 23, 0});
}

PeriodDemand aggregate_periods(const std::array<double, 24>& net, const PeakWindow& window) {
    window.validate();
    PeriodDemand d;
    for (int h = 0; h < 24; ++h) {
        if (window.in_peak[h]) d.d_peak += net[h];
        else d.d_offpeak += net[h];
    }
    return d;
}

UserDayTable build_table(const IngestResult& ingest, const PeakWindow& window, bool curtail,
                         double solar_scale, double demand_scale) {
    window.validate();
    if (!(demand_scale > 0.0)) throw ConfigError("demand_scale must be positive");

    std::set<std::string> users;
    std::set<int> all_days;
    std::map<std::pair<std::string, int>, const UserDayRecord*> by_key;
    for (const UserDayRecord& r : ingest.records) {
        users.insert(r.user_id);
        all_days.insert(r.date_key);
        by_key[{r.user_id, r.date_key}] = &r;
    }
    if (users.empty()) throw DataError("no complete (user, day) series in input");

    UserDayTable table;
    table.user_ids.assign(users.begin(), users.end());
    for (int day : all_days) {
        bool complete = true;
        for (const std::string& u : table.user_ids)
            if (!by_key.count({u, day})) {
                complete = false;
                break;
            }
        if (!complete) {
            ++table.days_dropped_incomplete;
            continue;
        }
        std::vector<PeriodDemand> row;
        row.reserve(table.user_ids.size());
        for (const std::string& u : table.user_ids) {
            const UserDayRecord* rec = by_key[{u, day}];
            const auto net = net_load(rec->load_mwh, rec->solar_mwh, curtail, solar_scale);
            PeriodDemand d = aggregate_periods(net, window);
            d.d_peak *= demand_scale;
            d.d_offpeak *= demand_scale;
            row.push_back(d);
        }
        table.days.push_back(day);
        table.demand.push_back(std::move(row));
    }
    if (table.days.empty()) throw DataError("no day is complete for every user");
    return table;
}

ScenarioSet build_scenarios(const UserDayTable& table, const std::vector<std::size_t>& grouping,
                            std::size_t num_types) {
    if (grouping.size() != table.num_users())
        throw std::invalid_argument("build_scenarios: grouping size != users");
    for (std::size_t t : grouping)
        if (t >= num_types) throw std::invalid_argument("build_scenarios: type out of range");

    ScenarioSet set;
    set.num_types = num_types;
    const double w = 1.0 / static_cast<double>(table.num_days());
    for (std::size_t d = 0; d < table.num_days(); ++d) {
        Scenario sc;
        sc.weight = w;
        sc.demand.resize(num_types);
        for (std::size_t u = 0; u < table.num_users(); ++u) {
            sc.demand[grouping[u]].d_peak += table.demand[d][u].d_peak;
            sc.demand[grouping[u]].d_offpeak += table.demand[d][u].d_offpeak;
        }
        set.scenarios.push_back(std::move(sc));
    }
    return set;
}

std::vector<UserDemandScenario> user_demand_scenarios(const UserDayTable& table) {
    std::vector<UserDemandScenario> out;
    const double w = 1.0 / static_cast<double>(table.num_days());
    for (std::size_t d = 0; d < table.num_days(); ++d) out.push_back({w, table.demand[d]});
    return out;
}

std::vector<PeriodDemand> mean_demands(const UserDayTable& table) {
    std::vector<PeriodDemand> mean(table.num_users());
    const double w = 1.0 / static_cast<double>(table.num_days());
    for (std::size_t d = 0; d < table.num_days(); ++d)
        for (std::size_t u = 0; u < table.num_users(); ++u) {
            mean[u].d_peak += w * table.demand[d][u].d_peak;
            mean[u].d_offpeak += w * table.demand[d][u].d_offpeak;
        }
    return mean;
}

std::vector<std::vector<std::size_t>> sample_type_groupings(std::size_t num_users,
                                                            std::size_t num_types,
                                                            std::size_t count,
                                                            std::uint64_t seed) {
    if (num_types == 0 || num_types > num_users)
        throw std::invalid_argument("sample_type_groupings: need 1 <= types <= users");
    std::mt19937_64 rng(seed);
    std::vector<std::vector<std::size_t>> groupings;
    groupings.reserve(count);
    std::vector<std::size_t> g(num_users);
    while (groupings.size() < count) {
        std::vector<bool> used(num_types, false);
        for (std::size_t u = 0; u < num_users; ++u) {
            g[u] = static_cast<std::size_t>(uniform_u64_below(rng, num_types));
            used[g[u]] = true;
        }
        // uniform over assignments conditioned on every type being non-empty
        if (std::all_of(used.begin(), used.end(), [](bool b) { return b; }))
            groupings.push_back(g);
    }
    return groupings;
}

std::vector<double> build_theta_catalog(double theta_bar, double lambda_s) {
    if (!(theta_bar > 0.0)) throw ConfigError("theta_bar must be positive");
    if (!(lambda_s > 0.0) || !(lambda_s < 2.0 / 3.0))
        throw ConfigError("lambda_s must lie in (0, 2/3): spread of zero breaks the strict "
                          "ordering and 2/3 or more drives the cheapest cost non-positive");
    return {theta_bar * (1.0 - 1.5 * lambda_s), theta_bar * (1.0 - 0.5 * lambda_s),
            theta_bar * (1.0 + 0.5 * lambda_s), theta_bar * (1.0 + 1.5 * lambda_s)};
}

std::vector<StorageType> make_catalog(const std::vector<double>& thetas,
                                      const std::vector<PeriodDemand>& aggregates) {
    if (thetas.size() != aggregates.size())
        throw std::invalid_argument("make_catalog: thetas/aggregates size mismatch");
    std::vector<StorageType> catalog(thetas.size());
    for (std::size_t k = 0; k < thetas.size(); ++k)
        catalog[k] = {k, thetas[k], aggregates[k].d_peak, aggregates[k].d_offpeak};
    validate_catalog(catalog);
    return catalog;
}

std::vector<User> make_users(const UserDayTable& table, const std::vector<std::size_t>& grouping,
                             const std::vector<StorageType>& catalog,
                             const std::vector<PeriodDemand>& demands) {
    if (grouping.size() != table.num_users() || demands.size() != table.num_users())
        throw std::invalid_argument("make_users: size mismatch");
    std::vector<User> users(table.num_users());
    for (std::size_t u = 0; u < users.size(); ++u) {
        users[u].id = table.user_ids[u];
        users[u].type_k = grouping[u];
        users[u].theta = catalog.at(grouping[u]).theta;
        users[u].d_peak = demands[u].d_peak;
        users[u].d_offpeak = demands[u].d_offpeak;
    }
    return users;
}

std::string serialize_scenarios(const ScenarioSet& set) {
    std::ostringstream os;
    os << "touscen v1\n";
    os << "types " << set.num_types << "\n";
    os << "scenarios " << set.scenarios.size() << "\n";
    for (const Scenario& s : set.scenarios) {
        os << "w " << fmt_g17(s.weight);
        for (const PeriodDemand& d : s.demand)
            os << " " << fmt_g17(d.d_peak) << " " << fmt_g17(d.d_offpeak);
        os << "\n";
    }
    return os.str();
}

ScenarioSet parse_scenarios(const std::string& text) {
    std::istringstream in(text);
    std::string header;
    if (!std::getline(in, header) || header != "touscen v1")
        throw DataError("scenario file: bad or missing version header");
    std::string key;
    std::size_t num_types = 0, count = 0;
    if (!(in >> key >> num_types) || key != "types")
        throw DataError("scenario file: expected 'types N'");
    if (!(in >> key >> count) || key != "scenarios")
        throw DataError("scenario file: expected 'scenarios N'");
    ScenarioSet set;
    set.num_types = num_types;
    for (std::size_t i = 0; i < count; ++i) {
        Scenario s;
        if (!(in >> key >> s.weight) || key != "w")
            throw DataError("scenario file: expected 'w ...' record");
        s.demand.resize(num_types);
        for (std::size_t k = 0; k < num_types; ++k)
            if (!(in >> s.demand[k].d_peak >> s.demand[k].d_offpeak))
                throw DataError("scenario file: truncated demand row");
        set.scenarios.push_back(std::move(s));
    }
    set.validate();
    return set;
}

}  // namespace tou
