#include <doctest.h>

#include <vector>

#include "pemc/errors.hpp"
#include "pemc/pricing.hpp"
#include "pemc/rng.hpp"
#include "pemc/schedule.hpp"
#include "support/fixtures.hpp"

using namespace pemc;
using pemc::testing::make_load;

TEST_CASE("internal sell price") {
	CHECK(internal_sell_price({0.57, 0.06, 0.0}) == doctest::Approx(0.57));
	CHECK(internal_sell_price({0.57, 0.06, 1.0}) == doctest::Approx(0.06));

	// Qs*Qb / ((Qb - Qs) R + Qs) by hand: 0.0342 / 0.315
	const double qs = 0.06;
	const double qb = 0.57;
	const double expected = (qs * qb) / ((qb - qs) * 0.5 + qs);
	CHECK(expected == doctest::Approx(0.108571).epsilon(1e-5));
	CHECK(internal_sell_price({qb, qs, 0.5}) == doctest::Approx(expected).epsilon(1e-12));

	// Outside [0, 1] the feed-in price applies.
	CHECK(internal_sell_price({qb, qs, 1.7}) == qs);
}

TEST_CASE("internal buy price") {
	const TariffSlot r0{0.57, 0.06, 0.0};
	CHECK(internal_buy_price(r0, internal_sell_price(r0)) == doctest::Approx(0.57));
	const TariffSlot r1{0.57, 0.06, 1.0};
	CHECK(internal_buy_price(r1, internal_sell_price(r1)) == doctest::Approx(0.06));

	const TariffSlot half{0.57, 0.06, 0.5};
	const double p_sell = 0.0342 / 0.315;
	const double expected = 0.5 * p_sell + 0.5 * 0.57;
	CHECK(expected == doctest::Approx(0.339286).epsilon(1e-5));
	CHECK(internal_buy_price(half, internal_sell_price(half)) == doctest::Approx(expected).epsilon(1e-12));

	const TariffSlot high{0.57, 0.06, 1.2};
	CHECK(internal_buy_price(high, internal_sell_price(high)) == 0.06);
}

TEST_CASE("tariff validation") {
	CHECK_THROWS_AS(validate_tariff({1.0, 0.0, 0.5}), InvariantError);
	CHECK_THROWS_AS(validate_tariff({1.0, 2.0, 0.5}), InvariantError);
	CHECK_THROWS_AS(validate_tariff({1.0, 0.5, -0.1}), InvariantError);
	CHECK_NOTHROW(validate_tariff({1.0, 1.0, 0.0}));
}

TEST_CASE("derived demand/supply ratio") {
	CHECK(derived_ds_ratio(3.0, 0.0) == 1.0);
	CHECK(derived_ds_ratio(1.0, 4.0) == doctest::Approx(0.25));
	CHECK(derived_ds_ratio(0.0, 2.0) == 0.0);
}

TEST_CASE("slot transaction") {
	const InternalPrices p{0.5, 0.3};
	const auto balanced = slot_transaction(2.0, 1.0, 1.0, p);
	CHECK(balanced.buy_cost_cents == 0.0);
	CHECK(balanced.sell_revenue_cents == 0.0);

	const auto deficit = slot_transaction(3.0, 1.0, 1.0, p);
	CHECK(deficit.bought_kwh == doctest::Approx(1.0));
	CHECK(deficit.buy_cost_cents == doctest::Approx(0.5 * 1.0));
	CHECK(deficit.sell_revenue_cents == 0.0);

	const auto surplus = slot_transaction(1.0, 2.0, 1.0, p);
	CHECK(surplus.sold_kwh == doctest::Approx(2.0));
	CHECK(surplus.sell_revenue_cents == doctest::Approx(0.3 * 2.0));
	CHECK(surplus.buy_cost_cents == 0.0);

	const auto swapped = slot_transaction(3.0, 1.0, 1.0, p, true);
	CHECK(swapped.buy_cost_cents == doctest::Approx(0.3));
}

TEST_CASE("average transaction cost") {
	const std::vector<TransactionRecord> none(3);
	CHECK(average_transaction_cost(none, 3) == 0.0);

	std::vector<TransactionRecord> r(2);
	r[0].sell_revenue_cents = 10.0;
	r[1].buy_cost_cents = 4.0;
	CHECK(average_transaction_cost(r, 2) == doctest::Approx((10.0 - 4.0) / 2.0));

	std::vector<TransactionRecord> even(1);
	even[0].sell_revenue_cents = 5.0;
	even[0].buy_cost_cents = 5.0;
	CHECK(average_transaction_cost(even, 1) == 0.0);
}

TEST_CASE("schedule constraints") {
	const std::vector<Load> loads{make_load("a", 1, 2, 2, 0.5, 4)};
	const auto immediate = immediate_schedule(loads, 6);
	const auto ok = validate_schedule_constraints(immediate, loads, 5.0);
	CHECK(ok.feasible());
	CHECK(ok.total_magnitude() == 0.0);

	// Drop the second ON slot: one slot of 2 packets missing. The row also
	// falls below the per-slot packet minimum once min_packets is raised.
	ScheduleMatrix short_run(1, 6);
	short_run.set(0, 1, true);
	const auto gap = validate_schedule_constraints(short_run, loads, 5.0);
	CHECK(gap.demand_gap == doctest::Approx(1.0));

	// One packet dropped from a 1-packet load.
	const std::vector<Load> single{make_load("b", 0, 2, 1, 0.5, 4)};
	ScheduleMatrix one_slot(1, 6);
	one_slot.set(0, 0, true);
	CHECK(validate_schedule_constraints(one_slot, single, 5.0).demand_gap == doctest::Approx(0.5));

	// 6 kWh per slot declared, none scheduled in that slot, cap 5.
	const std::vector<Load> big{make_load("c", 0, 1, 12, 0.5, 3)};
	ScheduleMatrix shifted(1, 4);
	shifted.set(0, 1, true);
	const auto cap = validate_schedule_constraints(shifted, big, 5.0);
	REQUIRE(cap.cap_violations.size() == 1);
	CHECK(cap.cap_violations[0].slot == 0);
	CHECK(cap.cap_violations[0].amount == doctest::Approx(6.0 - 5.0));
}

TEST_CASE("property: internal prices stay inside the utility band") {
	Rng rng(3);
	for (int trial = 0; trial < 2000; ++trial) {
		const double qs = rng.uniform(0.01, 1.0);
		const double qb = qs + rng.uniform(0.0, 4.0);
		const double r = rng.uniform(0.0, 2.0);
		const TariffSlot slot{qb, qs, r};
		const double ps = internal_sell_price(slot);
		CHECK(ps >= qs * (1 - 1e-12));
		CHECK(ps <= qb * (1 + 1e-12));
		if (r <= 1.0) {
			CHECK(internal_buy_price(slot, ps) >= ps * (1 - 1e-12));
		}
	}
}

TEST_CASE("property: sell price falls as the ratio rises") {
	Rng rng(5);
	for (int trial = 0; trial < 200; ++trial) {
		const double qs = rng.uniform(0.01, 1.0);
		const double qb = qs + rng.uniform(0.01, 4.0);
		double prev = internal_sell_price({qb, qs, 0.0});
		for (int k = 1; k <= 50; ++k) {
			const double p = internal_sell_price({qb, qs, k / 50.0});
			CHECK(p <= prev);
			prev = p;
		}
	}
}

TEST_CASE("property: a slot never buys and sells at once") {
	Rng rng(9);
	for (int trial = 0; trial < 2000; ++trial) {
		const auto r = slot_transaction(rng.uniform(0.0, 5.0), rng.uniform(0.0, 5.0), rng.uniform(0.0, 5.0),
			{rng.uniform(0.1, 3.0), rng.uniform(0.1, 3.0)}, rng.below(2) == 1);
		CHECK_FALSE((r.buy_cost_cents > 0.0 && r.sell_revenue_cents > 0.0));
		CHECK_FALSE((r.bought_kwh > 0.0 && r.sold_kwh > 0.0));
	}
}

TEST_CASE("property: average transaction cost is linear") {
	Rng rng(17);
	for (int trial = 0; trial < 200; ++trial) {
		std::vector<TransactionRecord> r(1 + rng.below(24));
		for (auto& x : r) {
			x.sell_revenue_cents = rng.uniform(0.0, 10.0);
			x.buy_cost_cents = rng.uniform(0.0, 10.0);
		}
		const int horizon = static_cast<int>(r.size());
		const double c = rng.uniform(-3.0, 3.0);
		const double base = average_transaction_cost(r, horizon);
		for (auto& x : r) {
			x.sell_revenue_cents *= c;
			x.buy_cost_cents *= c;
		}
		CHECK(average_transaction_cost(r, horizon) == doctest::Approx(c * base).epsilon(1e-9));
	}
}
