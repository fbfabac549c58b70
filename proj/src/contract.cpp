#include "tou/contract.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "tou/errors.hpp"
#include "tou/report.hpp"

namespace tou {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double cap_unbounded(double lo, double hi) {
    return std::isinf(hi) ? 2.0 * lo + 1.0 : hi;
}

}  // namespace

Interval PriceDifferenceIntervals::p_p_interval() const {
    if (p_empty) return {0.0, 0.0};
    return {theta_b, theta_c};
}

Interval PriceDifferenceIntervals::p_f_interval(double p_p) const {
    if (f_empty) {
        // no class-F users exist; the F item only has to stay unattractive,
        // which any p_F below the cheapest investable storage cost guarantees
        return {0.0, theta_floor};
    }
    if (p_empty) return {theta_a, theta_c};
    // both Theorem-1 couplings, at the chosen p_P:
    //   type-a users prefer F over P:   p_F > eta_P p_P + (1-eta_P) theta_a
    //   the partial type prefers P over F:  p_F < eta_P p_P + (1-eta_P) theta_b
    return {eta_p * p_p + (1.0 - eta_p) * theta_a, eta_p * p_p + (1.0 - eta_p) * theta_b};
}

bool PriceDifferenceIntervals::contains(double p_f, double p_p, double p_n) const {
    if (p_n < p_n_lower()) return false;
    if (!p_empty && !p_p_interval().contains(p_p)) return false;
    const Interval f = p_f_interval(p_p);
    if (f_empty && f.hi == 0.0) return p_f == 0.0;  // degenerate: cheapest theta is 0
    return f.contains(p_f);
}

const TariffItem& Contract::item(char label) const {
    for (const TariffItem& it : items)
        if (it.label == label) return it;
    throw std::invalid_argument("contract: unknown item label");
}

PriceDifferenceIntervals theorem1_intervals(const Classification& cls,
                                            const std::vector<StorageType>& catalog) {
    validate_catalog(catalog);
    PriceDifferenceIntervals iv;

    // Types with zero aggregate peak demand cannot invest and constrain no
    // price bound; they are ignored when forming the boundary costs.
    const auto has_demand = [&](std::size_t k) { return catalog.at(k).d_peak_agg > 0.0; };

    iv.theta_a = 0.0;
    iv.f_empty = true;
    for (std::size_t k : cls.full)
        if (has_demand(k)) {
            iv.theta_a = std::max(iv.theta_a, catalog[k].theta);
            iv.f_empty = false;
        }

    iv.theta_c = kInf;
    iv.n_empty = true;
    for (std::size_t k : cls.none)
        if (has_demand(k)) {
            iv.theta_c = std::min(iv.theta_c, catalog[k].theta);
            iv.n_empty = false;
        }

    iv.p_empty = !(cls.partial.has_value() && has_demand(*cls.partial));
    if (!iv.p_empty) {
        iv.theta_b = catalog[*cls.partial].theta;
        iv.eta_p = cls.partial_ratio;
        if (!(iv.eta_p > 0.0 && iv.eta_p < 1.0))
            throw InfeasibleError("theorem1_intervals: partial ratio outside (0,1)");
    } else {
        iv.theta_b = iv.theta_c;
        iv.eta_p = 0.0;
    }

    iv.theta_floor = kInf;
    for (const StorageType& t : catalog)
        if (t.d_peak_agg > 0.0) iv.theta_floor = std::min(iv.theta_floor, t.theta);

    // Theorem 1 guarantees a non-empty region for strictly ordered boundary
    // costs; a violation means the classification is inconsistent.
    if (!iv.f_empty && !iv.p_empty && !(iv.theta_a < iv.theta_b))
        throw InfeasibleError("theorem1_intervals: theta_a >= theta_b");
    if (!iv.p_empty && !iv.n_empty && !(iv.theta_b < iv.theta_c))
        throw InfeasibleError("theorem1_intervals: theta_b >= theta_c");
    if (iv.p_empty && !iv.f_empty && !iv.n_empty && !(iv.theta_a < iv.theta_c))
        throw InfeasibleError("theorem1_intervals: theta_a >= theta_c");
    return iv;
}

PricePoint select_point(const PriceDifferenceIntervals& intervals) {
    PricePoint pt;
    pt.p_n = intervals.p_n_lower();

    if (!intervals.p_empty) {
        const Interval pp = intervals.p_p_interval();
        const double hi = cap_unbounded(pp.lo, pp.hi);
        if (!(hi > pp.lo)) throw InfeasibleError("select_point: empty p_P interval");
        pt.p_p = 0.5 * (pp.lo + hi);
    } else {
        pt.p_p = 0.0;  // eta_P == 0, the item is inert
    }

    const Interval pf = intervals.p_f_interval(pt.p_p);
    const double pf_hi = cap_unbounded(pf.lo, pf.hi);
    if (!(pf_hi > pf.lo)) {
        if (intervals.f_empty && pf_hi <= 0.0) {
            pt.p_f = 0.0;  // cheapest theta is 0: the inert F item sits at 0
            return pt;
        }
        throw InfeasibleError("select_point: empty p_F interval");
    }
    pt.p_f = 0.5 * (pf.lo + pf_hi);

    // midpoints of open intervals are interior by construction; the checks
    // below only catch float collapse of razor-thin regions
    if (!(pt.p_f > pf.lo && pt.p_f < pf_hi))
        throw InfeasibleError("select_point: p_F interval collapsed");
    if (!intervals.contains(pt.p_f, pt.p_p, pt.p_n))
        throw InfeasibleError("select_point: selected point failed self-validation");
    return pt;
}

Contract build_contract(const Classification& cls, const std::vector<StorageType>& catalog,
                        const std::vector<User>& users, double p_o_ref) {
    validate_catalog(catalog);
    validate_users(users, catalog);

    const PriceDifferenceIntervals intervals = theorem1_intervals(cls, catalog);
    const PricePoint pt = select_point(intervals);

    Contract c;
    c.p_o_ref = p_o_ref;
    c.f_class_missing = intervals.f_empty;
    c.items[0] = {'F', pt.p_f, 1.0, {}};
    c.items[1] = {'P', pt.p_p, intervals.p_empty ? 0.0 : intervals.eta_p, {}};
    c.items[2] = {'N', pt.p_n, 0.0, {}};

    std::vector<char> class_of_type(catalog.size(), 'N');
    for (std::size_t k : cls.full) class_of_type.at(k) = 'F';
    if (cls.partial) class_of_type.at(*cls.partial) = 'P';

    for (const User& u : users) {
        c.intended[u.id] = class_of_type.at(u.type_k);
        for (TariffItem& item : c.items)
            item.price_levels[u.id] = equalized_price_levels(u, item.p_delta, pt.p_n, p_o_ref);
    }
    return c;
}

IcReport verify_ic(const Contract& contract, const std::vector<User>& users) {
    IcReport report;
    report.min_strict_margin = kInf;
    for (const User& u : users) {
        IcEntry e;
        e.user_id = u.id;
        e.intended = contract.intended.at(u.id);

        double cost[3];
        UserDecision dec[3];
        for (int i = 0; i < 3; ++i) {
            cost[i] = user_cost_under_item(u, contract.items[i]);
            dec[i] = solve_ucm(u, contract.items[i].p_delta, contract.items[i].eta);
        }
        const double scale =
            std::max({1.0, std::abs(cost[0]), std::abs(cost[1]), std::abs(cost[2])});
        const double tol = 1e-12 * scale;

        int intended_idx = 0;
        while (contract.items[intended_idx].label != e.intended) ++intended_idx;

        const double min_cost = std::min({cost[0], cost[1], cost[2]});
        if (cost[intended_idx] <= min_cost + tol) {
            e.best = e.intended;
        } else {
            int best = -1;
            for (int i = 0; i < 3; ++i)
                if (cost[i] <= min_cost + tol &&
                    (best < 0 || contract.items[i].eta < contract.items[best].eta))
                    best = i;
            e.best = contract.items[best].label;
        }

        e.margin = kInf;
        for (int i = 0; i < 3; ++i)
            if (i != intended_idx) e.margin = std::min(e.margin, cost[i] - cost[intended_idx]);

        // vacuous: every item leaves both his cost and his investment
        // unchanged, so misselection cannot distort the outcome
        e.vacuous = true;
        for (int i = 0; i < 3 && e.vacuous; ++i)
            if (std::abs(cost[i] - cost[intended_idx]) > tol ||
                std::abs(dec[i].capacity - dec[intended_idx].capacity) > tol)
                e.vacuous = false;

        // requirement (ii): invest exactly at the item's cap
        const double cap = contract.items[intended_idx].eta * u.d_peak;
        e.invests_at_cap = std::abs(dec[intended_idx].capacity - cap) <= tol;

        e.pass = e.invests_at_cap && (e.margin > tol || e.vacuous);
        if (e.vacuous) ++report.num_vacuous;
        else report.min_strict_margin = std::min(report.min_strict_margin, e.margin);
        report.all_pass = report.all_pass && e.pass;
        report.entries.push_back(std::move(e));
    }
    if (std::isinf(report.min_strict_margin)) report.min_strict_margin = 0.0;
    return report;
}

std::string contract_to_text(const Contract& contract) {
    std::ostringstream os;
    os << "format tou-contract v1\n";
    os << "p_o_ref " << fmt_g17(contract.p_o_ref) << "\n";
    os << "f_class_missing " << (contract.f_class_missing ? 1 : 0) << "\n";
    for (const TariffItem& item : contract.items)
        os << "item " << item.label << " p_delta " << fmt_g17(item.p_delta) << " eta "
           << fmt_g17(item.eta) << "\n";
    for (const auto& [id, label] : contract.intended) {
        os << "user " << id << " class " << label;
        for (const TariffItem& item : contract.items) {
            const PricePair& p = item.price_levels.at(id);
            os << " p_peak." << item.label << " " << fmt_g17(p.peak) << " p_offpeak."
               << item.label << " " << fmt_g17(p.offpeak);
        }
        os << "\n";
    }
    return os.str();
}

}  // namespace tou
