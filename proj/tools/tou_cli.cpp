// Experiment runner: ingest hourly demand data, design the tariff contract,
// simulate the market response, and write plot-ready reports.
#include <cstdlib>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "tou/errors.hpp"
#include "tou/report.hpp"
#include "tou/runner.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitInfeasible = 4;

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"tou-design: time-of-use storage contract designer"};

    std::string config_path, data_path, out_dir, mode;
    long long seed = -1;
    int workers = 0;

    app.add_option("--config", config_path, "experiment config file (key value lines)");
    app.add_option("--data", data_path, "hourly load/solar CSV (overrides config)");
    app.add_option("--out", out_dir, "output directory (overrides config)");
    app.add_option("--seed", seed, "random seed (overrides config)");
    app.add_option("--workers", workers, "worker threads (overrides config and TOU_WORKERS)");
    app.add_option("--mode", mode, "complete | incomplete (overrides config)")
        ->check(CLI::IsMember({"complete", "incomplete"}));

    CLI11_PARSE(app, argc, argv);

    try {
        tou::RunConfig config =
            config_path.empty() ? tou::RunConfig{} : tou::load_config(config_path);
        if (!data_path.empty()) config.data_path = data_path;
        if (!out_dir.empty()) config.out_dir = out_dir;
        if (seed >= 0) config.seed = static_cast<std::uint64_t>(seed);
        if (!mode.empty()) config.mode = mode;
        if (const char* env = std::getenv("TOU_WORKERS"); env && *env)
            config.workers = std::max(1, std::atoi(env));
        if (workers > 0) config.workers = workers;

        if (config.mode == "complete") {
            const tou::CompleteInfoResult r = tou::run_complete_info(config);
            std::cout << "scm_total " << tou::fmt_g17(r.scm_total) << "\n"
                      << "realized_total " << tou::fmt_g17(r.realized_total) << "\n"
                      << "realized_over_optimal " << tou::fmt_g17(r.realized_over_optimal)
                      << "\n"
                      << "ic_all_pass " << (r.ic_all_pass ? 1 : 0) << "\n";
            for (const std::string& f : r.files_written) std::cout << "wrote " << f << "\n";
        } else {
            const tou::IncompleteInfoResult r = tou::run_incomplete_info(config);
            std::cout << "sweep_points " << r.rows.size() << "\n";
            for (const std::string& f : r.files_written) std::cout << "wrote " << f << "\n";
        }
    } catch (const tou::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const tou::DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return kExitData;
    } catch (const tou::InfeasibleError& e) {
        std::cerr << "infeasible: " << e.what() << "\n";
        return kExitInfeasible;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
