#include "tou/planner.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tou {

void ScenarioSet::validate() const {
    if (scenarios.empty()) throw std::invalid_argument("scenario set: empty");
    if (num_types == 0) throw std::invalid_argument("scenario set: no types");
    double weight_sum = 0.0;
    for (const Scenario& s : scenarios) {
        if (s.weight < 0.0 || !std::isfinite(s.weight))
            throw std::invalid_argument("scenario set: negative or non-finite weight");
        if (s.demand.size() != num_types)
            throw std::invalid_argument("scenario set: scenario missing type entries");
        for (const PeriodDemand& d : s.demand)
            if (d.d_peak < 0.0 || d.d_offpeak < 0.0 || !std::isfinite(d.d_peak) ||
                !std::isfinite(d.d_offpeak))
                throw std::invalid_argument("scenario set: negative or non-finite demand");
        weight_sum += s.weight;
    }
    if (std::abs(weight_sum - 1.0) > 1e-12)
        throw std::invalid_argument("scenario set: weights must sum to 1");
}

namespace {

std::vector<StorageType> catalog_with_demands(const std::vector<StorageType>& catalog,
                                              const std::vector<PeriodDemand>& demand) {
    std::vector<StorageType> c = catalog;
    for (std::size_t k = 0; k < c.size(); ++k) {
        c[k].d_peak_agg = demand[k].d_peak;
        c[k].d_offpeak_agg = demand[k].d_offpeak;
    }
    return c;
}

}  // namespace

double solve_escm(const ScenarioSet& scenarios, const std::vector<StorageType>& catalog,
                  const SystemParams& params) {
    scenarios.validate();
    validate_catalog(catalog);
    if (scenarios.num_types != catalog.size())
        throw std::invalid_argument("solve_escm: scenario/catalog type count mismatch");
    double expected = 0.0;
    for (const Scenario& s : scenarios.scenarios) {
        const auto [outcome, cls] = solve_scm(catalog_with_demands(catalog, s.demand), params);
        expected += s.weight * outcome.total;
    }
    return expected;
}

double boundary_plan_cost(const ScenarioSet& scenarios, const std::vector<StorageType>& catalog,
                          const SystemParams& params, std::size_t boundary_type, double eta) {
    if (boundary_type >= catalog.size())
        throw std::invalid_argument("boundary_plan_cost: boundary type out of range");
    if (eta < 0.0 || eta > 1.0) throw std::invalid_argument("boundary_plan_cost: eta outside [0,1]");
    double expected = 0.0;
    for (const Scenario& s : scenarios.scenarios) {
        double storage = 0.0, peak = 0.0, offpeak = 0.0, shifted = 0.0;
        for (std::size_t k = 0; k < catalog.size(); ++k) {
            peak += s.demand[k].d_peak;
            offpeak += s.demand[k].d_offpeak;
            double ratio = 0.0;
            if (k < boundary_type) ratio = 1.0;
            else if (k == boundary_type) ratio = eta;
            const double c = ratio * s.demand[k].d_peak;
            storage += catalog[k].theta * c;
            shifted += c;
        }
        expected += s.weight * (storage + supply_cost_peak(peak - shifted, params) +
                                supply_cost_offpeak(offpeak + shifted, params));
    }
    return expected;
}

BoundaryPlan solve_escm_c(const ScenarioSet& scenarios, const std::vector<StorageType>& catalog,
                          const SystemParams& params) {
    scenarios.validate();
    validate_catalog(catalog);
    params.validate();
    if (scenarios.num_types != catalog.size())
        throw std::invalid_argument("solve_escm_c: scenario/catalog type count mismatch");

    const double curvature_unit = params.alpha * (1.0 / params.hours_peak + 1.0 / params.hours_offpeak);

    BoundaryPlan best;
    bool have_best = false;
    for (std::size_t b = 0; b < catalog.size(); ++b) {
        // expected cost as a function of x = eta^b:  A x^2 + B x + C
        double A = 0.0, B = 0.0, C = 0.0;
        for (const Scenario& s : scenarios.scenarios) {
            double peak_tot = 0.0, offpeak_tot = 0.0, below = 0.0, storage_below = 0.0;
            for (std::size_t k = 0; k < catalog.size(); ++k) {
                peak_tot += s.demand[k].d_peak;
                offpeak_tot += s.demand[k].d_offpeak;
                if (k < b) {
                    below += s.demand[k].d_peak;
                    storage_below += catalog[k].theta * s.demand[k].d_peak;
                }
            }
            const double d_b = s.demand[b].d_peak;
            const double peak0 = peak_tot - below;      // peak load at x = 0
            const double off0 = offpeak_tot + below;    // off-peak load at x = 0
            A += s.weight * curvature_unit * d_b * d_b;
            B += s.weight * d_b *
                 (catalog[b].theta - supply_marginal_peak(peak0, params) +
                  supply_marginal_offpeak(off0, params));
            C += s.weight * (storage_below + supply_cost_peak(peak0, params) +
                             supply_cost_offpeak(off0, params));
        }
        double x = 0.0;
        if (A > 0.0) x = std::clamp(-B / (2.0 * A), 0.0, 1.0);
        else if (B < 0.0) x = 1.0;
        const double cost = (A * x + B) * x + C;
        if (!have_best || cost < best.expected_cost) {
            best = {cost, b, x};
            have_best = true;
        }
    }
    return best;
}

double kappa(double sym_c, double sym_b) {
    if (!(sym_b > 0.0))
        throw std::domain_error("kappa: benchmark cost must be positive");
    return sym_c / sym_b;
}

PlanResult plan(const ScenarioSet& scenarios, const std::vector<StorageType>& catalog,
                const SystemParams& params) {
    PlanResult r;
    r.sym_b = solve_escm(scenarios, catalog, params);
    const BoundaryPlan bp = solve_escm_c(scenarios, catalog, params);
    r.sym_c = bp.expected_cost;
    r.boundary_type = bp.boundary_type;
    r.eta_b = bp.eta_b;
    r.kappa = kappa(r.sym_c, r.sym_b);
    return r;
}

Classification classification_from_boundary(const std::vector<StorageType>& catalog,
                                            std::size_t boundary_type, double eta,
                                            double snap_tol) {
    if (boundary_type >= catalog.size())
        throw std::invalid_argument("classification_from_boundary: boundary type out of range");
    Classification cls;
    for (std::size_t k = 0; k < boundary_type; ++k) cls.full.push_back(k);
    if (eta >= 1.0 - snap_tol) {
        cls.full.push_back(boundary_type);
    } else if (eta > snap_tol) {
        cls.partial = boundary_type;
        cls.partial_ratio = eta;
    } else {
        cls.none.push_back(boundary_type);
    }
    for (std::size_t k = boundary_type + 1; k < catalog.size(); ++k) cls.none.push_back(k);
    return cls;
}

}  // namespace tou
