#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tou/data.hpp"
#include "tou/model.hpp"

namespace tou {

/// Flat key-value experiment configuration. One "key value" pair per line,
/// '#' comments. CLI flags override data/out/seed/workers/mode.
struct RunConfig {
    std::string mode = "complete";  // complete | incomplete
    std::string data_path;
    std::string out_dir = ".";
    std::uint64_t seed = 1;
    int workers = 1;

    // supply cost and period split
    double alpha = 1.0;
    double beta = 0.0;
    double gamma = 0.0;
    std::vector<int> peak_hours = {18, 19, 20, 21, 22, 23, 0};

    // pipeline
    bool curtail = true;
    double demand_scale = 1.0;
    double solar_scale = 1.0;               // complete mode
    std::vector<double> solar_scales = {0.0, 1.0, 2.0};  // incomplete-mode sweep

    // type model
    std::size_t num_types = 4;
    double lambda_s = 1.0 / 3.0;
    double theta_bar = 60.0;                // complete mode
    std::vector<double> theta_bar_grid = {2, 5, 10, 15, 20, 30, 50, 80, 130};

    std::size_t num_groupings = 100;        // incomplete mode
    double p_o_ref = 20.0;

    /// Canonical serialization (sorted keys); hashed into every report.
    std::string canonical_text() const;
    std::string config_hash() const;
};

RunConfig parse_config_text(const std::string& text);
RunConfig load_config(const std::string& path);

struct CompleteInfoResult {
    double scm_total = 0.0;
    double realized_total = 0.0;
    double realized_over_optimal = 1.0;
    bool ic_all_pass = false;
    std::size_t num_users = 0;
    std::vector<std::string> files_written;
};

struct SweepRow {
    double theta_bar = 0.0;
    double solar_scale = 0.0;
    double kappa_mean = 0.0, kappa_std = 0.0;
    double kappa_no_mean = 0.0, kappa_no_std = 0.0;
    double sym_b_mean = 0.0, sym_c_mean = 0.0;
    double theorem2_resid_max = 0.0;  // |E[simulated] - Sym^c| / Sym^c
    std::size_t groupings = 0;
    std::size_t scenarios = 0;
};

struct IncompleteInfoResult {
    std::vector<SweepRow> rows;
    std::vector<std::string> files_written;
};

/// Complete-information study: collapse the panel to mean demands, solve the
/// social cost minimization, build and verify the contract, simulate, and
/// check that the realized cost reproduces the optimum. Writes summary.txt,
/// contract.txt, ic_report.txt under out_dir.
CompleteInfoResult run_complete_info(const RunConfig& config);

/// Incomplete-information sweep over (theta_bar, solar scale): per grouping
/// plan both benchmarks, build the boundary contract, simulate scenarios,
/// aggregate kappa and kappa_no. Writes sweep.tsv and summary.txt.
IncompleteInfoResult run_incomplete_info(const RunConfig& config);

}  // namespace tou
