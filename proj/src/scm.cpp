#include "tou/scm.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace tou {

double SocialOutcome::total_shift() const {
    return std::accumulate(shift.begin(), shift.end(), 0.0);
}

namespace {

SocialOutcome outcome_from_shift(std::vector<double> shift,
                                 const std::vector<StorageType>& catalog,
                                 const SystemParams& params) {
    SocialOutcome out;
    out.shift = std::move(shift);
    out.capacity = out.shift;
    double total_shift = 0.0;
    double d_peak_tot = 0.0;
    double d_offpeak_tot = 0.0;
    for (std::size_t k = 0; k < catalog.size(); ++k) {
        out.cost_storage += catalog[k].theta * out.capacity[k];
        total_shift += out.shift[k];
        d_peak_tot += catalog[k].d_peak_agg;
        d_offpeak_tot += catalog[k].d_offpeak_agg;
    }
    // guard the peak load against a rounding-level overshoot of total demand
    const double peak_load = std::max(0.0, d_peak_tot - total_shift);
    out.cost_peak = supply_cost_peak(peak_load, params);
    out.cost_offpeak = supply_cost_offpeak(d_offpeak_tot + total_shift, params);
    out.total = out.cost_storage + out.cost_peak + out.cost_offpeak;
    return out;
}

}  // namespace

double scm_objective(const std::vector<double>& shift, const std::vector<StorageType>& catalog,
                     const SystemParams& params) {
    return outcome_from_shift(shift, catalog, params).total;
}

std::pair<SocialOutcome, Classification> solve_scm(const std::vector<StorageType>& catalog,
                                                   const SystemParams& params) {
    validate_catalog(catalog);
    params.validate();

    double d_peak_tot = 0.0;
    double d_offpeak_tot = 0.0;
    for (const StorageType& t : catalog) {
        d_peak_tot += t.d_peak_agg;
        d_offpeak_tot += t.d_offpeak_agg;
    }

    // marginal value of one more shifted unit at total shift S:
    //   phi(S) = g^p'(D^p_tot - S) - g^o'(D^o_tot + S)
    // affine in S with slope -slope below
    const double slope = 2.0 * params.alpha * (1.0 / params.hours_peak + 1.0 / params.hours_offpeak);
    const auto phi = [&](double s) {
        return supply_marginal_peak(d_peak_tot - s, params) -
               supply_marginal_offpeak(d_offpeak_tot + s, params);
    };

    std::vector<double> shift(catalog.size(), 0.0);
    double s_total = 0.0;
    for (std::size_t k = 0; k < catalog.size(); ++k) {
        const double cap = catalog[k].d_peak_agg;
        if (cap == 0.0) continue;
        const double gain = phi(s_total);
        if (gain <= catalog[k].theta) break;  // this and all costlier types stay at zero
        const double interior = (gain - catalog[k].theta) / slope;
        if (interior >= cap) {
            shift[k] = cap;
            s_total += cap;
        } else {
            shift[k] = interior;
            s_total += interior;
            break;  // marginal condition binds; no cheaper capacity remains
        }
    }

    SocialOutcome out = outcome_from_shift(std::move(shift), catalog, params);
    Classification cls = classify(out, catalog);
    return {std::move(out), std::move(cls)};
}

SocialOutcome scm_oracle(const std::vector<StorageType>& catalog, const SystemParams& params,
                         std::size_t grid_points, double eval_budget) {
    validate_catalog(catalog);
    params.validate();
    if (grid_points < 2) throw std::invalid_argument("scm_oracle: need at least 2 grid points");

    const std::size_t K = catalog.size();
    double evals = static_cast<double>(K);
    for (std::size_t k = 0; k < K; ++k) evals *= static_cast<double>(grid_points);
    if (evals > eval_budget)
        throw std::invalid_argument("scm_oracle: " + std::to_string(evals) +
                                    " evaluations exceed budget " + std::to_string(eval_budget));

    std::vector<double> step(K);
    for (std::size_t k = 0; k < K; ++k)
        step[k] = catalog[k].d_peak_agg / static_cast<double>(grid_points - 1);

    std::vector<std::size_t> idx(K, 0);
    std::vector<double> shift(K, 0.0);
    std::vector<double> best_shift(K, 0.0);
    double best = scm_objective(best_shift, catalog, params);
    for (;;) {
        // advance the mixed-radix counter
        std::size_t pos = 0;
        while (pos < K && ++idx[pos] == grid_points) {
            idx[pos] = 0;
            shift[pos] = 0.0;
            ++pos;
        }
        if (pos == K) break;
        shift[pos] = static_cast<double>(idx[pos]) * step[pos];
        const double val = scm_objective(shift, catalog, params);
        if (val < best) {
            best = val;
            best_shift = shift;
        }
    }
    return outcome_from_shift(std::move(best_shift), catalog, params);
}

Classification classify(const SocialOutcome& outcome, const std::vector<StorageType>& catalog,
                        double rel_tol) {
    if (outcome.capacity.size() != catalog.size())
        throw std::invalid_argument("classify: outcome/catalog size mismatch");
    Classification cls;
    for (std::size_t k = 0; k < catalog.size(); ++k) {
        const double cap = catalog[k].d_peak_agg;
        const double c = outcome.capacity[k];
        if (cap <= 0.0 || c <= rel_tol * cap) {
            cls.none.push_back(k);
        } else if (c >= (1.0 - rel_tol) * cap) {
            cls.full.push_back(k);
        } else {
            if (cls.partial)
                throw std::logic_error("classify: more than one partially investing type");
            cls.partial = k;
            cls.partial_ratio = c / cap;
        }
    }
    return cls;
}

}  // namespace tou
