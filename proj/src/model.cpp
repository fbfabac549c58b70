#include "tou/model.hpp"

#include <cmath>
#include <stdexcept>

#include "tou/errors.hpp"

namespace tou {

void SystemParams::validate() const {
    if (!(alpha > 0.0) || !std::isfinite(alpha))
        throw std::invalid_argument("SystemParams: alpha must be positive");
    if (beta < 0.0 || gamma < 0.0 || !std::isfinite(beta) || !std::isfinite(gamma))
        throw std::invalid_argument("SystemParams: beta and gamma must be non-negative");
    if (hours_peak <= 0 || hours_offpeak <= 0 || hours_peak + hours_offpeak != 24)
        throw std::invalid_argument("SystemParams: peak/off-peak hours must be positive and sum to 24");
}

void validate_catalog(const std::vector<StorageType>& catalog) {
    if (catalog.empty()) throw std::invalid_argument("catalog: empty");
    for (std::size_t k = 0; k < catalog.size(); ++k) {
        const StorageType& t = catalog[k];
        if (t.k != k) throw std::invalid_argument("catalog: type index does not match position");
        if (t.theta < 0.0 || !std::isfinite(t.theta))
            throw std::invalid_argument("catalog: theta must be finite and non-negative");
        if (t.d_peak_agg < 0.0 || t.d_offpeak_agg < 0.0 ||
            !std::isfinite(t.d_peak_agg) || !std::isfinite(t.d_offpeak_agg))
            throw std::invalid_argument("catalog: demands must be finite and non-negative");
        if (k > 0 && !(catalog[k - 1].theta < t.theta))
            throw std::invalid_argument("catalog: storage costs must be strictly increasing");
    }
}

void validate_users(const std::vector<User>& users, const std::vector<StorageType>& catalog) {
    for (const User& u : users) {
        if (u.type_k >= catalog.size())
            throw std::invalid_argument("user " + u.id + ": type index out of range");
        if (u.theta != catalog[u.type_k].theta)
            throw std::invalid_argument("user " + u.id + ": theta differs from its type's theta");
        if (u.d_peak < 0.0 || u.d_offpeak < 0.0)
            throw std::invalid_argument("user " + u.id + ": negative demand");
    }
}

double supply_cost_peak(double load, const SystemParams& params) {
    if (load < 0.0) throw std::invalid_argument("supply_cost_peak: negative load");
    const double h = static_cast<double>(params.hours_peak);
    return params.alpha / h * load * load + params.beta * load + params.gamma * h;
}

double supply_cost_offpeak(double load, const SystemParams& params) {
    if (load < 0.0) throw std::invalid_argument("supply_cost_offpeak: negative load");
    const double h = static_cast<double>(params.hours_offpeak);
    return params.alpha / h * load * load + params.beta * load + params.gamma * h;
}

double supply_marginal_peak(double load, const SystemParams& params) {
    return 2.0 * params.alpha / static_cast<double>(params.hours_peak) * load + params.beta;
}

double supply_marginal_offpeak(double load, const SystemParams& params) {
    return 2.0 * params.alpha / static_cast<double>(params.hours_offpeak) * load + params.beta;
}

UserDecision solve_ucm(const User& user, double p_delta, double eta_cap) {
    if (p_delta < 0.0) throw std::invalid_argument("solve_ucm: negative price difference");
    if (eta_cap < 0.0 || eta_cap > 1.0)
        throw std::invalid_argument("solve_ucm: eta cap outside [0,1]");
    UserDecision d;
    if (user.theta < p_delta) {
        d.capacity = d.shift = eta_cap * user.d_peak;
    }
    // theta >= p_delta: invest nothing (ties resolve to zero)
    return d;
}

double no_storage_payment(const User& user, const PricePair& prices) {
    return prices.peak * user.d_peak + prices.offpeak * user.d_offpeak;
}

double user_cost_under_item(const User& user, const TariffItem& item) {
    const auto it = item.price_levels.find(user.id);
    if (it == item.price_levels.end())
        throw std::invalid_argument("item " + std::string(1, item.label) +
                                    ": no price levels for user " + user.id);
    const PricePair& p = it->second;
    const UserDecision d = solve_ucm(user, item.p_delta, item.eta);
    return p.peak * (user.d_peak - d.shift) + p.offpeak * (user.d_offpeak + d.shift) +
           user.theta * d.capacity;
}

PricePair equalized_price_levels(const User& user, double p_delta, double p_delta_ref,
                                 double p_o_ref) {
    const double total = user.d_peak + user.d_offpeak;
    if (total == 0.0) return {p_o_ref + p_delta, p_o_ref};
    const double payment = p_o_ref * total + p_delta_ref * user.d_peak;
    const double offpeak = (payment - p_delta * user.d_peak) / total;
    if (offpeak < 0.0)
        throw InfeasibleError("price levels for user " + user.id +
                              ": implied off-peak price is negative; increase p_o_ref");
    return {offpeak + p_delta, offpeak};
}

}  // namespace tou
