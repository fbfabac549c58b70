// Generates a synthetic household load/solar CSV shaped like a year of
// smart-meter data, for demos and tests of the full pipeline.
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "tou/errors.hpp"
#include "tou/synth.hpp"

int main(int argc, char** argv) {
    CLI::App app{"tou-synth: synthetic hourly load/solar CSV generator"};

    tou::SynthParams p;
    std::string out_path = "synth.csv";
    app.add_option("--out", out_path, "output CSV path");
    app.add_option("--users", p.num_users, "number of households");
    app.add_option("--days", p.num_days, "number of days");
    app.add_option("--seed", p.seed, "random seed");
    app.add_option("--base-load", p.base_load_kwh, "per-user hourly load scale (kWh)");
    app.add_option("--solar-peak", p.solar_peak_kwh, "per-user midday solar at clear sky (kWh)");

    CLI11_PARSE(app, argc, argv);

    try {
        tou::write_synth_csv_file(out_path, p);
        std::cout << "wrote " << out_path << " (" << p.num_users << " users, " << p.num_days
                  << " days)\n";
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
