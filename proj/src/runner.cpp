#include "tou/runner.hpp"

#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "tou/contract.hpp"
#include "tou/errors.hpp"
#include "tou/planner.hpp"
#include "tou/report.hpp"
#include "tou/scm.hpp"
#include "tou/sim.hpp"

namespace tou {

namespace {

template <typename T>
std::string join(const std::vector<T>& v) {
    std::ostringstream os;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) os << ",";
        if constexpr (std::is_same_v<T, double>) os << fmt_g17(v[i]);
        else os << v[i];
    }
    return os.str();
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

double to_double(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("config: bad number for '" + key + "': " + v);
    }
}

long to_long(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const long x = std::stol(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("config: bad integer for '" + key + "': " + v);
    }
}

bool to_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "on") return true;
    if (v == "false" || v == "0" || v == "off") return false;
    throw ConfigError("config: bad boolean for '" + key + "': " + v);
}

void write_file(const std::string& dir, const std::string& name, const std::string& content,
                std::vector<std::string>& written) {
    std::filesystem::create_directories(dir);
    const std::string path = (std::filesystem::path(dir) / name).string();
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write report file: " + path);
    out << content;
    written.push_back(path);
}

struct MeanStd {
    double mean = 0.0, std = 0.0;
};

MeanStd mean_std(const std::vector<double>& v) {
    MeanStd r;
    if (v.empty()) return r;
    for (double x : v) r.mean += x;
    r.mean /= static_cast<double>(v.size());
    for (double x : v) r.std += (x - r.mean) * (x - r.mean);
    r.std = std::sqrt(r.std / static_cast<double>(v.size()));
    return r;
}

// bounded worker pool; jobs write into preallocated slots so the reduction
// order never depends on scheduling
void run_jobs(std::size_t count, int workers, const std::function<void(std::size_t)>& job) {
    if (workers <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) job(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    std::exception_ptr error;
    std::mutex error_mu;
    const std::size_t n_threads = std::min<std::size_t>(static_cast<std::size_t>(workers), count);
    for (std::size_t t = 0; t < n_threads; ++t)
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= count) return;
                try {
                    job(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mu);
                    if (!error) error = std::current_exception();
                    return;
                }
            }
        });
    for (std::thread& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

SystemParams params_from(const RunConfig& c, const PeakWindow& window) {
    SystemParams p;
    p.alpha = c.alpha;
    p.beta = c.beta;
    p.gamma = c.gamma;
    p.hours_peak = window.hours_peak();
    p.hours_offpeak = 24 - p.hours_peak;
    try {
        p.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    return p;
}

std::vector<PeriodDemand> type_aggregates(const UserDayTable& table,
                                          const std::vector<std::size_t>& grouping,
                                          std::size_t num_types,
                                          const std::vector<PeriodDemand>& user_means) {
    std::vector<PeriodDemand> agg(num_types);
    for (std::size_t u = 0; u < grouping.size(); ++u) {
        agg[grouping[u]].d_peak += user_means[u].d_peak;
        agg[grouping[u]].d_offpeak += user_means[u].d_offpeak;
    }
    (void)table;
    return agg;
}

}  // namespace

std::string RunConfig::canonical_text() const {
    std::map<std::string, std::string> kv;
    kv["mode"] = mode;
    kv["data"] = data_path;
    kv["seed"] = std::to_string(seed);
    kv["alpha"] = fmt_g17(alpha);
    kv["beta"] = fmt_g17(beta);
    kv["gamma"] = fmt_g17(gamma);
    kv["peak_hours"] = join(peak_hours);
    kv["curtail"] = curtail ? "true" : "false";
    kv["demand_scale"] = fmt_g17(demand_scale);
    kv["solar_scale"] = fmt_g17(solar_scale);
    kv["solar_scales"] = join(solar_scales);
    kv["num_types"] = std::to_string(num_types);
    kv["lambda_s"] = fmt_g17(lambda_s);
    kv["theta_bar"] = fmt_g17(theta_bar);
    kv["theta_bar_grid"] = join(theta_bar_grid);
    kv["num_groupings"] = std::to_string(num_groupings);
    kv["p_o_ref"] = fmt_g17(p_o_ref);
    std::ostringstream os;
    for (const auto& [k, v] : kv) os << k << " " << v << "\n";
    return os.str();
}

std::string RunConfig::config_hash() const {
    return hash_hex(fnv1a64(canonical_text()));
}

RunConfig parse_config_text(const std::string& text) {
    RunConfig c;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        // strip comments and surrounding whitespace
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        std::istringstream ls(line);
        std::string key, value;
        if (!(ls >> key)) continue;
        if (!(ls >> value))
            throw ConfigError("config line " + std::to_string(line_no) + ": key '" + key +
                              "' has no value");
        std::string extra;
        if (ls >> extra)
            throw ConfigError("config line " + std::to_string(line_no) + ": trailing tokens");

        if (key == "mode") {
            if (value != "complete" && value != "incomplete")
                throw ConfigError("config: mode must be complete or incomplete");
            c.mode = value;
        } else if (key == "data") {
            c.data_path = value;
        } else if (key == "out") {
            c.out_dir = value;
        } else if (key == "seed") {
            c.seed = static_cast<std::uint64_t>(to_long(key, value));
        } else if (key == "workers") {
            c.workers = static_cast<int>(to_long(key, value));
            if (c.workers < 1) throw ConfigError("config: workers must be >= 1");
        } else if (key == "alpha") {
            c.alpha = to_double(key, value);
        } else if (key == "beta") {
            c.beta = to_double(key, value);
        } else if (key == "gamma") {
            c.gamma = to_double(key, value);
        } else if (key == "peak_hours") {
            c.peak_hours.clear();
            for (const std::string& tok : split_list(value))
                c.peak_hours.push_back(static_cast<int>(to_long(key, tok)));
        } else if (key == "curtail") {
            c.curtail = to_bool(key, value);
        } else if (key == "demand_scale") {
            c.demand_scale = to_double(key, value);
        } else if (key == "solar_scale") {
            c.solar_scale = to_double(key, value);
        } else if (key == "solar_scales") {
            c.solar_scales.clear();
            for (const std::string& tok : split_list(value))
                c.solar_scales.push_back(to_double(key, tok));
        } else if (key == "num_types") {
            const long n = to_long(key, value);
            if (n < 1) throw ConfigError("config: num_types must be >= 1");
            c.num_types = static_cast<std::size_t>(n);
        } else if (key == "lambda_s") {
            c.lambda_s = to_double(key, value);
        } else if (key == "theta_bar") {
            c.theta_bar = to_double(key, value);
        } else if (key == "theta_bar_grid") {
            c.theta_bar_grid.clear();
            for (const std::string& tok : split_list(value))
                c.theta_bar_grid.push_back(to_double(key, tok));
        } else if (key == "num_groupings") {
            const long n = to_long(key, value);
            if (n < 1) throw ConfigError("config: num_groupings must be >= 1");
            c.num_groupings = static_cast<std::size_t>(n);
        } else if (key == "p_o_ref") {
            c.p_o_ref = to_double(key, value);
        } else {
            throw ConfigError("config line " + std::to_string(line_no) + ": unknown key '" +
                              key + "'");
        }
    }
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return parse_config_text(os.str());
}

CompleteInfoResult run_complete_info(const RunConfig& config) {
    const PeakWindow window = PeakWindow::from_hours(config.peak_hours);
    const SystemParams params = params_from(config, window);
    if (config.data_path.empty()) throw ConfigError("config: no data file given");

    const IngestResult ingest = ingest_csv_file(config.data_path);
    const UserDayTable table =
        build_table(ingest, window, config.curtail, config.solar_scale, config.demand_scale);

    // complete information: collapse the panel to its mean demands
    if (config.num_types != 4)
        throw ConfigError("the theta_bar/lambda_s catalog defines exactly four types");
    const std::vector<PeriodDemand> means = mean_demands(table);
    const auto grouping =
        sample_type_groupings(table.num_users(), config.num_types, 1, config.seed).front();
    const std::vector<double> thetas = build_theta_catalog(config.theta_bar, config.lambda_s);
    const std::vector<StorageType> catalog =
        make_catalog(thetas, type_aggregates(table, grouping, config.num_types, means));
    const std::vector<User> users = make_users(table, grouping, catalog, means);

    const auto [outcome, cls] = solve_scm(catalog, params);
    const Contract contract = build_contract(cls, catalog, users, config.p_o_ref);
    const IcReport ic = verify_ic(contract, users);
    const SimResult sim = simulate(contract, users, params);

    CompleteInfoResult res;
    res.scm_total = outcome.total;
    res.realized_total = sim.total;
    res.realized_over_optimal = sim.total / outcome.total;
    res.ic_all_pass = ic.all_pass;
    res.num_users = users.size();

    std::ostringstream os;
    os << "format tou-summary v1\n";
    os << "config.hash " << config.config_hash() << "\n";
    os << "config.seed " << config.seed << "\n";
    os << "mode complete\n";
    os << "users " << users.size() << "\n";
    os << "days " << table.num_days() << "\n";
    os << "scm.total " << fmt_g17(outcome.total) << "\n";
    os << "scm.cost_storage " << fmt_g17(outcome.cost_storage) << "\n";
    os << "scm.cost_peak " << fmt_g17(outcome.cost_peak) << "\n";
    os << "scm.cost_offpeak " << fmt_g17(outcome.cost_offpeak) << "\n";
    os << "classes.full " << cls.full.size() << "\n";
    os << "classes.partial " << (cls.partial ? 1 : 0) << "\n";
    os << "classes.none " << cls.none.size() << "\n";
    if (cls.partial) os << "classes.partial_ratio " << fmt_g17(cls.partial_ratio) << "\n";
    os << "realized.total " << fmt_g17(sim.total) << "\n";
    os << "realized.over_optimal " << fmt_g17(res.realized_over_optimal) << "\n";
    os << "realized.peak_load " << fmt_g17(sim.peak_load) << "\n";
    os << "realized.offpeak_load " << fmt_g17(sim.offpeak_load) << "\n";
    os << "ic.all_pass " << (ic.all_pass ? 1 : 0) << "\n";
    os << "ic.min_strict_margin " << fmt_g17(ic.min_strict_margin) << "\n";
    os << "ic.vacuous " << ic.num_vacuous << "\n";

    std::ostringstream ic_os;
    ic_os << "format tou-ic v1\n";
    for (const IcEntry& e : ic.entries)
        ic_os << "user " << e.user_id << " intended " << e.intended << " best " << e.best
              << " margin " << fmt_g17(e.margin) << " vacuous " << (e.vacuous ? 1 : 0)
              << " invests_at_cap " << (e.invests_at_cap ? 1 : 0) << " pass "
              << (e.pass ? 1 : 0) << "\n";
    ic_os << "summary all_pass " << (ic.all_pass ? 1 : 0) << " min_strict_margin "
          << fmt_g17(ic.min_strict_margin) << " vacuous " << ic.num_vacuous << "\n";

    write_file(config.out_dir, "summary.txt", os.str(), res.files_written);
    write_file(config.out_dir, "contract.txt", contract_to_text(contract), res.files_written);
    write_file(config.out_dir, "ic_report.txt", ic_os.str(), res.files_written);
    return res;
}

IncompleteInfoResult run_incomplete_info(const RunConfig& config) {
    const PeakWindow window = PeakWindow::from_hours(config.peak_hours);
    const SystemParams params = params_from(config, window);
    if (config.data_path.empty()) throw ConfigError("config: no data file given");
    if (config.num_types != 4)
        throw ConfigError("incomplete mode uses the four-type storage-cost spread");

    const IngestResult ingest = ingest_csv_file(config.data_path);

    // the same groupings are reused at every sweep point so that curves are
    // comparable across theta_bar and solar level
    struct Point {
        double theta_bar, solar_scale;
    };
    std::vector<Point> points;
    for (double scale : config.solar_scales)
        for (double tb : config.theta_bar_grid) points.push_back({tb, scale});

    IncompleteInfoResult res;
    res.rows.resize(points.size());

    run_jobs(points.size(), config.workers, [&](std::size_t pi) {
        const Point& pt = points[pi];
        const UserDayTable table =
            build_table(ingest, window, config.curtail, pt.solar_scale, config.demand_scale);
        const auto groupings = sample_type_groupings(table.num_users(), config.num_types,
                                                     config.num_groupings, config.seed);
        const std::vector<double> thetas = build_theta_catalog(pt.theta_bar, config.lambda_s);
        const std::vector<PeriodDemand> means = mean_demands(table);
        const std::vector<UserDemandScenario> user_scenarios = user_demand_scenarios(table);

        std::vector<double> kappas, kappa_nos, sym_bs, sym_cs;
        double resid_max = 0.0;
        for (const auto& grouping : groupings) {
            const std::vector<StorageType> catalog =
                make_catalog(thetas, type_aggregates(table, grouping, config.num_types, means));
            const ScenarioSet scen = build_scenarios(table, grouping, config.num_types);
            const PlanResult pr = plan(scen, catalog, params);
            const Classification cls =
                classification_from_boundary(catalog, pr.boundary_type, pr.eta_b);
            const std::vector<User> users = make_users(table, grouping, catalog, means);
            const Contract contract = build_contract(cls, catalog, users, config.p_o_ref);
            const ExpectedSimResult sim = simulate_expected(contract, users, params, user_scenarios);

            kappas.push_back(pr.kappa);
            kappa_nos.push_back(sim.kappa_no);
            sym_bs.push_back(pr.sym_b);
            sym_cs.push_back(pr.sym_c);
            resid_max = std::max(resid_max, std::abs(sim.expected_cost - pr.sym_c) / pr.sym_c);
        }

        SweepRow row;
        row.theta_bar = pt.theta_bar;
        row.solar_scale = pt.solar_scale;
        const MeanStd k = mean_std(kappas), kn = mean_std(kappa_nos);
        const MeanStd sb = mean_std(sym_bs), sc = mean_std(sym_cs);
        row.kappa_mean = k.mean;
        row.kappa_std = k.std;
        row.kappa_no_mean = kn.mean;
        row.kappa_no_std = kn.std;
        row.sym_b_mean = sb.mean;
        row.sym_c_mean = sc.mean;
        row.theorem2_resid_max = resid_max;
        row.groupings = groupings.size();
        row.scenarios = table.num_days();
        res.rows[pi] = row;
    });

    Table sweep;
    sweep.header = {"theta_bar", "solar_scale", "kappa_mean", "kappa_std", "kappa_no_mean",
                    "kappa_no_std", "sym_b_mean", "sym_c_mean", "theorem2_resid_max",
                    "groupings", "scenarios"};
    for (const SweepRow& r : res.rows)
        sweep.rows.push_back({fmt_g17(r.theta_bar), fmt_g17(r.solar_scale), fmt_g17(r.kappa_mean),
                              fmt_g17(r.kappa_std), fmt_g17(r.kappa_no_mean),
                              fmt_g17(r.kappa_no_std), fmt_g17(r.sym_b_mean),
                              fmt_g17(r.sym_c_mean), fmt_g17(r.theorem2_resid_max),
                              std::to_string(r.groupings), std::to_string(r.scenarios)});

    std::ostringstream os;
    os << "format tou-summary v1\n";
    os << "config.hash " << config.config_hash() << "\n";
    os << "config.seed " << config.seed << "\n";
    os << "mode incomplete\n";
    os << "sweep.points " << res.rows.size() << "\n";
    double kmax = 0.0, knmax = 0.0, residmax = 0.0;
    for (const SweepRow& r : res.rows) {
        kmax = std::max(kmax, r.kappa_mean);
        knmax = std::max(knmax, r.kappa_no_mean);
        residmax = std::max(residmax, r.theorem2_resid_max);
    }
    os << "sweep.kappa_mean_max " << fmt_g17(kmax) << "\n";
    os << "sweep.kappa_no_mean_max " << fmt_g17(knmax) << "\n";
    os << "sweep.theorem2_resid_max " << fmt_g17(residmax) << "\n";

    write_file(config.out_dir, "sweep.tsv", sweep.to_tsv(), res.files_written);
    write_file(config.out_dir, "summary.txt", os.str(), res.files_written);
    return res;
}

}  // namespace tou
