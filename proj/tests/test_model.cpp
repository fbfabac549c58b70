#include <cmath>
#include <random>

#include "doctest.h"
#include "test_instances.hpp"
#include "tou/errors.hpp"
#include "tou/model.hpp"
#include "tou/rng.hpp"

using namespace tou;

namespace {

// independent re-evaluation of the period cost polynomial (Horner form on
// the expanded per-hour rate), used as the second implementation
double period_cost_reference(double load, double alpha, double beta, double gamma, int hours) {
    const double h = static_cast<double>(hours);
    const double rate = load / h;  // average MW over the period
    return h * ((alpha * rate + beta) * rate + gamma);
}

// brute-force single-user optimum: scan shift over a fine grid
double best_cost_by_grid(const User& u, const PricePair& p, double p_delta, double eta,
                         int points = 20001) {
    double best = 1e300;
    const double cap = eta * u.d_peak;
    for (int i = 0; i < points; ++i) {
        const double s = cap * static_cast<double>(i) / static_cast<double>(points - 1);
        const double cost =
            p.peak * (u.d_peak - s) + p.offpeak * (u.d_offpeak + s) + u.theta * s;
        if (cost < best) best = cost;
    }
    return best;
}

}  // namespace

TEST_CASE("supply cost: zero load and zero gamma is free") {
    SystemParams p{1.0, 0.0, 0.0, 7, 17};
    CHECK(supply_cost_peak(0.0, p) == 0.0);
    CHECK(supply_cost_offpeak(0.0, p) == 0.0);
}

TEST_CASE("supply cost: unit-coefficient arithmetic") {
    SystemParams p{1.0, 1.0, 1.0, 7, 17};
    CHECK(supply_cost_peak(7.0, p) == doctest::Approx(21.0));
    CHECK(supply_cost_offpeak(17.0, p) == doctest::Approx(51.0));
}

TEST_CASE("supply cost: matches the independent polynomial evaluation") {
    // generation-cost-like fixture
    SystemParams p{0.0035, 28.5, 120.0, 7, 17};
    const double expect = period_cost_reference(12.0, 0.0035, 28.5, 120.0, 7);
    CHECK(supply_cost_peak(12.0, p) == doctest::Approx(expect).epsilon(1e-14));
    CHECK(supply_cost_peak(12.0, p) == doctest::Approx(1182.072).epsilon(1e-12));
}

TEST_CASE("supply cost: symmetric periods cost the same") {
    SystemParams p{2.0, 3.0, 1.0, 12, 12};
    CHECK(supply_cost_peak(5.5, p) == doctest::Approx(supply_cost_offpeak(5.5, p)));
}

TEST_CASE("supply cost: negative load is a domain error") {
    SystemParams p{1.0, 0.0, 0.0, 7, 17};
    CHECK_THROWS_AS(supply_cost_peak(-1.0, p), std::invalid_argument);
    CHECK_THROWS_AS(supply_cost_offpeak(-0.5, p), std::invalid_argument);
}

TEST_CASE("system params validation") {
    CHECK_NOTHROW(SystemParams{1.0, 0.0, 0.0, 7, 17}.validate());
    CHECK_THROWS_AS(SystemParams{0.0, 0.0, 0.0, 7, 17}.validate(), std::invalid_argument);
    CHECK_THROWS_AS(SystemParams{1.0, -1.0, 0.0, 7, 17}.validate(), std::invalid_argument);
    CHECK_THROWS_AS(SystemParams{1.0, 0.0, 0.0, 8, 17}.validate(), std::invalid_argument);
    CHECK_THROWS_AS(SystemParams{1.0, 0.0, 0.0, 24, 0}.validate(), std::invalid_argument);
}

TEST_CASE("solve_ucm: all-or-nothing cases") {
    User u{"a", 1.0, 3.0, 5.0, 0};
    SUBCASE("cheap storage invests the cap") {
        const UserDecision d = solve_ucm(u, 2.0, 1.0);
        CHECK(d.capacity == doctest::Approx(3.0));
        CHECK(d.shift == doctest::Approx(3.0));
    }
    SUBCASE("expensive storage invests nothing") {
        u.theta = 5.0;
        const UserDecision d = solve_ucm(u, 2.0, 1.0);
        CHECK(d.capacity == 0.0);
        CHECK(d.shift == 0.0);
    }
    SUBCASE("tie resolves to zero") {
        u.theta = 2.0;
        const UserDecision d = solve_ucm(u, 2.0, 1.0);
        CHECK(d.capacity == 0.0);
    }
}

TEST_CASE("solve_ucm: cap binds and the capped point is grid-optimal") {
    User u{"a", 1.0, 3.0, 5.0, 0};
    const UserDecision d = solve_ucm(u, 2.0, 0.4);
    CHECK(d.capacity == doctest::Approx(1.2));
    CHECK(d.shift == doctest::Approx(1.2));

    const PricePair prices{22.0, 20.0};
    const double grid_best = best_cost_by_grid(u, prices, 2.0, 0.4);
    const double at_solution =
        prices.peak * (u.d_peak - d.shift) + prices.offpeak * (u.d_offpeak + d.shift) +
        u.theta * d.capacity;
    CHECK(at_solution == doctest::Approx(grid_best).epsilon(1e-9));
}

TEST_CASE("user_cost_under_item: closed form and edge cases") {
    User u{"a", 1.0, 3.0, 5.0, 0};
    TariffItem item{'F', 2.0, 1.0, {{"a", {22.0, 20.0}}}};
    const double base = no_storage_payment(u, {22.0, 20.0});

    SUBCASE("saving equals (p_delta - theta) * eta * d_peak") {
        // base = 22*3 + 20*5 = 166; saving = (2-1)*1*3 = 3
        CHECK(base == doctest::Approx(166.0));
        CHECK(user_cost_under_item(u, item) == doctest::Approx(163.0));
        const double grid_best = best_cost_by_grid(u, {22.0, 20.0}, 2.0, 1.0);
        CHECK(user_cost_under_item(u, item) == doctest::Approx(grid_best).epsilon(1e-12));
    }
    SUBCASE("zero cap disables storage") {
        item.eta = 0.0;
        CHECK(user_cost_under_item(u, item) == doctest::Approx(base));
    }
    SUBCASE("theta at or above the price difference leaves the bill alone") {
        u.theta = 2.0;
        CHECK(user_cost_under_item(u, item) == doctest::Approx(base));
        u.theta = 7.5;
        CHECK(user_cost_under_item(u, item) == doctest::Approx(base));
    }
    SUBCASE("missing price levels raise") {
        item.price_levels.clear();
        CHECK_THROWS_AS(user_cost_under_item(u, item), std::invalid_argument);
    }
}

TEST_CASE("equalized price levels solve the 2x2 system") {
    User u{"a", 0.0, 3.0, 5.0, 0};
    const double p_o_ref = 20.0;
    for (double p_delta : {0.0, 1.5, 4.0, 30.0}) {
        const PricePair p = equalized_price_levels(u, p_delta, 0.0, p_o_ref);
        CHECK(p.peak - p.offpeak == doctest::Approx(p_delta).epsilon(1e-12));
        CHECK(no_storage_payment(u, p) ==
              doctest::Approx(p_o_ref * (u.d_peak + u.d_offpeak)).epsilon(1e-12));
        CHECK(p.offpeak >= 0.0);
    }
    SUBCASE("zero-demand user gets reference prices") {
        User z{"z", 0.0, 0.0, 0.0, 0};
        const PricePair p = equalized_price_levels(z, 3.0, 0.0, 20.0);
        CHECK(p.offpeak == 20.0);
        CHECK(p.peak == 23.0);
    }
    SUBCASE("too small a reference price is rejected") {
        User heavy{"h", 0.0, 10.0, 0.5, 0};
        CHECK_THROWS_AS(equalized_price_levels(heavy, 100.0, 0.0, 5.0), InfeasibleError);
    }
}

TEST_CASE("ucm invariants hold on random instances") {
    std::mt19937_64 rng(20240811);
    for (int trial = 0; trial < 300; ++trial) {
        User u{"r", uniform_range(rng, 0.0, 8.0), uniform_range(rng, 0.0, 10.0),
               uniform_range(rng, 0.0, 10.0), 0};
        const double p_delta = uniform_range(rng, 0.0, 8.0);
        const double eta = uniform01(rng);
        const UserDecision d = solve_ucm(u, p_delta, eta);

        // decision invariants
        CHECK(d.shift >= 0.0);
        CHECK(d.shift <= d.capacity + 1e-15);
        CHECK(d.shift <= u.d_peak + 1e-15);
        // all-or-nothing away from the tie
        if (u.theta != p_delta) {
            const bool at_zero = d.shift == 0.0;
            const bool at_cap = std::abs(d.shift - eta * u.d_peak) <= 1e-15;
            CHECK((at_zero || at_cap));
        }

        // no feasible shift beats the chosen one
        const PricePair prices{30.0 + p_delta, 30.0};
        const double chosen =
            prices.peak * (u.d_peak - d.shift) + prices.offpeak * (u.d_offpeak + d.shift) +
            u.theta * d.capacity;
        for (int i = 0; i < 20; ++i) {
            const double s = uniform_range(rng, 0.0, eta * u.d_peak);
            const double cost =
                prices.peak * (u.d_peak - s) + prices.offpeak * (u.d_offpeak + s) + u.theta * s;
            CHECK(chosen <= cost + 1e-9 * std::max(1.0, std::abs(cost)));
        }
    }
}

TEST_CASE("user cost is non-increasing in p_delta and eta") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 100; ++trial) {
        User u{"m", uniform_range(rng, 0.0, 6.0), uniform_range(rng, 0.0, 10.0),
               uniform_range(rng, 0.0, 10.0), 0};
        const double d1 = uniform_range(rng, 0.0, 6.0);
        const double d2 = d1 + uniform_range(rng, 0.0, 3.0);
        const double e1 = uniform01(rng);
        const double e2 = std::min(1.0, e1 + uniform01(rng));
        const double ref = 40.0;

        const auto cost = [&](double p_delta, double eta) {
            TariffItem item{'F', p_delta, eta,
                            {{u.id, equalized_price_levels(u, p_delta, 0.0, ref)}}};
            return user_cost_under_item(u, item);
        };
        CHECK(cost(d2, e1) <= cost(d1, e1) + 1e-9);
        CHECK(cost(d1, e2) <= cost(d1, e1) + 1e-9);
    }
}
