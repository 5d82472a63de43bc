#include <doctest.h>

#include <cmath>

#include "pemc/errors.hpp"
#include "pemc/rng.hpp"
#include "pemc/storage.hpp"

using namespace pemc;

namespace {

BatterySpec spec_with(double cap_min, double cap_max) {
	BatterySpec s;
	s.capacity_min = cap_min;
	s.capacity_max = cap_max;
	return s;
}

} // namespace

TEST_CASE("feasible actions") {
	const BatterySpec full = spec_with(0.0, 20.0);
	const auto f = feasible_actions(full, {20.0});
	CHECK(f.charge.min == 0.0);
	CHECK(f.charge.max == 0.0);

	const auto d = feasible_actions(spec_with(2.0, 20.0), {10.0});
	CHECK(d.discharge.min == 0.0);
	CHECK(d.discharge.max == doctest::Approx(5.0));

	const auto c = feasible_actions(spec_with(0.0, 12.0), {10.0});
	CHECK(c.charge.min == 0.0);
	CHECK(c.charge.max == doctest::Approx(12.0 - 10.0));

	// Discharge range is bounded by the energy above the floor.
	const auto low = feasible_actions(spec_with(2.0, 20.0), {3.0});
	CHECK(low.discharge.max == doctest::Approx(1.0));
}

TEST_CASE("step") {
	BatterySpec s = spec_with(0.0, 20.0);
	CHECK(step(s, {7.0}, 0.0, 0.0).stored == 7.0);

	CHECK(step(s, {5.0}, 2.0, 0.0).stored == doctest::Approx(1.0 * 5.0 + 0.95 * 2.0).epsilon(1e-12));
	CHECK(step(s, {5.0}, 2.0, 0.0).stored == doctest::Approx(6.9).epsilon(1e-12));

	s.decay = 0.99;
	s.eff_discharge = 1.0;
	CHECK(step(s, {10.0}, 0.0, 1.0).stored == doctest::Approx(0.99 * 10.0 - 1.0).epsilon(1e-12));
	CHECK(step(s, {10.0}, 0.0, 1.0).stored == doctest::Approx(8.9).epsilon(1e-12));
}

TEST_CASE("step rejects infeasible actions") {
	const BatterySpec s = spec_with(2.0, 20.0);
	CHECK_THROWS_AS(step(s, {10.0}, 1.0, 1.0), InfeasibleActionError);
	CHECK_THROWS_AS(step(s, {10.0}, 6.0, 0.0), InfeasibleActionError);
	CHECK_THROWS_AS(step(s, {10.0}, 0.0, 6.0), InfeasibleActionError);
	CHECK_THROWS_AS(step(s, {19.0}, 3.0, 0.0), InfeasibleActionError);
	CHECK_THROWS_AS(step(s, {3.0}, 0.0, 2.0), InfeasibleActionError);
	CHECK_THROWS_AS(step(s, {10.0}, -1.0, 0.0), InfeasibleActionError);
}

TEST_CASE("battery validation") {
	BatterySpec s = spec_with(5.0, 5.0);
	CHECK_THROWS_AS(validate_battery(s), InvariantError);
	s = spec_with(0.0, 20.0);
	s.rated_charge = 6.0;
	CHECK_THROWS_AS(validate_battery(s), InvariantError);
	s.rated_charge = 2.5;
	s.max_discharge_per_slot = 0.0;
	CHECK_THROWS_AS(validate_battery(s), InvariantError);
	s.max_discharge_per_slot = 5.0;
	CHECK_NOTHROW(validate_battery(s));
	CHECK_THROWS_AS(validate_battery_state(s, {21.0}), InvariantError);
}

TEST_CASE("degradation cost") {
	BatterySpec s = spec_with(0.0, 20.0);
	CHECK(degradation_cost(s, 0.0, 0.0) == 0.0);
	CHECK(degradation_cost(s, s.rated_charge, 0.0) == doctest::Approx(s.cost_scale));
	CHECK(degradation_cost(s, 0.0, s.rated_discharge) == doctest::Approx(s.cost_scale));

	s.rated_charge = 2.0;
	const double expected = std::pow(2.0 / 1.0, 1.3) * std::exp(0.9 * (1.0 / 2.0 - 1.0));
	CHECK(expected == doctest::Approx(1.5700).epsilon(1e-4));
	CHECK(degradation_cost(s, 1.0, 0.0) == doctest::Approx(expected).epsilon(1e-12));

	s.cost_scale = 3.0;
	CHECK(degradation_cost(s, 1.0, 0.0) == doctest::Approx(3.0 * expected).epsilon(1e-12));
}

TEST_CASE("average degradation cost") {
	const std::vector<double> idle(4, 0.0);
	CHECK(average_degradation_cost(idle, 4) == 0.0);
	const std::vector<double> c{2.0, 0.0, 0.0, 2.0};
	CHECK(average_degradation_cost(c, 4) == doctest::Approx((2.0 + 2.0) / 4.0));
	const std::vector<double> one{3.5};
	CHECK(average_degradation_cost(one, 1) == 3.5);
}

TEST_CASE("property: random feasible trajectories stay in bounds") {
	Rng rng(29);
	for (int trial = 0; trial < 1000; ++trial) {
		BatterySpec s = spec_with(rng.uniform(0.0, 3.0), rng.uniform(5.0, 25.0));
		s.decay = 1.0;
		s.eff_charge = rng.uniform(0.8, 1.0);
		s.eff_discharge = rng.uniform(0.8, 1.0);
		BatteryState state{rng.uniform(s.capacity_min, s.capacity_max)};
		for (int t = 0; t < 24; ++t) {
			const auto a = feasible_actions(s, state);
			const bool charge = rng.below(2) == 0;
			const double amount = rng.uniform(0.0, charge ? a.charge.max : a.discharge.max);
			state = step(s, state, charge ? amount : 0.0, charge ? 0.0 : amount);
			CHECK(state.stored >= s.capacity_min - kEnergyTolerance);
			CHECK(state.stored <= s.capacity_max + kEnergyTolerance);
		}
	}
}

TEST_CASE("property: lossless steps conserve energy") {
	Rng rng(31);
	BatterySpec s = spec_with(0.0, 50.0);
	s.decay = 1.0;
	s.eff_charge = 1.0;
	s.eff_discharge = 1.0;
	for (int trial = 0; trial < 1000; ++trial) {
		const BatteryState start{rng.uniform(0.0, 50.0)};
		BatteryState state = start;
		double net = 0.0;
		for (int t = 0; t < 24; ++t) {
			const auto a = feasible_actions(s, state);
			if (rng.below(2) == 0) {
				const double c = rng.uniform(0.0, a.charge.max);
				state = step(s, state, c, 0.0);
				net += c;
			} else {
				const double k = rng.uniform(0.0, a.discharge.max);
				state = step(s, state, 0.0, k);
				net -= k;
			}
		}
		CHECK(std::abs((state.stored - start.stored) - net) <= 1e-9);
	}
}

TEST_CASE("property: wear cost is positive and dips once over the charge range") {
	const BatterySpec s = spec_with(0.0, 20.0);
	// Minimum of (r/x)^w0 exp(w1 (x/r - 1)) sits at x = r w0 / w1.
	const double x_min = s.rated_charge * s.w0 / s.w1;
	double prev = degradation_cost(s, 0.01, 0.0);
	for (int k = 2; k <= 500; ++k) {
		const double x = 0.01 * k;
		const double c = degradation_cost(s, x, 0.0);
		CHECK(c > 0.0);
		if (x <= x_min - 0.01) {
			CHECK(c < prev);
		} else if (x >= x_min + 0.01) {
			CHECK(c > prev);
		}
		prev = c;
	}
}
