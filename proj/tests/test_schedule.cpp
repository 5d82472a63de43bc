#include <doctest.h>

#include <vector>

#include "pemc/errors.hpp"
#include "pemc/rng.hpp"
#include "pemc/schedule.hpp"
#include "support/fixtures.hpp"

using namespace pemc;
using pemc::testing::make_load;

TEST_CASE("start window") {
	const Load l = make_load("a", 2, 2, 1, 0.5, 5);
	const auto w = start_window(l, 24);
	CHECK(w.earliest == 2);
	CHECK(w.latest == 2 + 5 - 2);
	// The horizon end cuts the window.
	const auto cut = start_window(l, 6);
	CHECK(cut.latest == 4);
	CHECK_THROWS_AS(start_window(make_load("b", 5, 2, 1, 0.5, 4), 6), InfeasibleScheduleError);
}

TEST_CASE("decode: all zeros falls back to arrival") {
	const std::vector<Load> loads{make_load("a", 1, 2, 1, 0.5, 4), make_load("b", 0, 1, 1, 0.5, 3)};
	const std::vector<double> genome(2 * 6, 0.0);
	const auto s = decode_schedule(genome, loads, 6);
	CHECK(s == immediate_schedule(loads, 6));
}

TEST_CASE("decode: a clean admissible run is kept") {
	const std::vector<Load> loads{make_load("a", 1, 2, 1, 0.5, 4)};
	const std::vector<double> genome{0, 0, 1, 1, 0, 0};
	const auto s = decode_schedule(genome, loads, 6);
	CHECK(s.single_run_start(0) == 2);
	CHECK(s.to_genome() == genome);
}

TEST_CASE("decode: threshold then nearest admissible run") {
	const std::vector<Load> loads{make_load("a", 0, 1, 1, 0.5, 2)};
	const std::vector<double> genome{0.7, 0.2, 0.9, 0.4};
	const auto s = decode_schedule(genome, loads, 4);
	const std::vector<double> want{1, 0, 0, 0};
	CHECK(s.to_genome() == want);
}

TEST_CASE("decode rejects a genome of the wrong size") {
	const std::vector<Load> loads{make_load("a", 0, 1, 1, 0.5, 2)};
	const std::vector<double> genome(3, 0.0);
	CHECK_THROWS_AS(decode_schedule(genome, loads, 4), ValidationError);
}

TEST_CASE("schedule starts") {
	const std::vector<Load> loads{make_load("a", 1, 2, 1, 0.5, 4), make_load("b", 0, 1, 1, 0.5, 3)};
	const std::vector<int> starts{3, 1};
	const auto s = ScheduleMatrix::from_starts(loads, starts, 6);
	CHECK(schedule_starts(s, loads) == starts);

	ScheduleMatrix broken(2, 6);
	broken.set(0, 1, true);
	broken.set(0, 3, true);
	broken.set(1, 0, true);
	CHECK_THROWS_AS(schedule_starts(broken, loads), InfeasibleScheduleError);
}

TEST_CASE("property: every decoded genome is admissible") {
	Rng rng(37);
	for (int trial = 0; trial < 500; ++trial) {
		const int horizon = 4 + static_cast<int>(rng.below(21));
		std::vector<Load> loads;
		const int count = 1 + static_cast<int>(rng.below(4));
		for (int i = 0; i < count; ++i) {
			const int duration = 1 + static_cast<int>(rng.below(3));
			const int arrival = static_cast<int>(rng.below(static_cast<std::size_t>(horizon - duration + 1)));
			loads.push_back(make_load("l" + std::to_string(i), arrival, duration, 1, 0.5,
				duration + 1 + static_cast<int>(rng.below(6))));
		}
		std::vector<double> genome(static_cast<std::size_t>(count * horizon));
		for (auto& g : genome) {
			g = rng.uniform();
		}
		const auto s = decode_schedule(genome, loads, horizon);
		const auto starts = schedule_starts(s, loads);
		for (int i = 0; i < count; ++i) {
			const auto w = start_window(loads[static_cast<std::size_t>(i)], horizon);
			CHECK(starts[static_cast<std::size_t>(i)] >= w.earliest);
			CHECK(starts[static_cast<std::size_t>(i)] <= w.latest);
			CHECK(s.on_count(i) == loads[static_cast<std::size_t>(i)].duration_slots);
		}
		// Decoding is idempotent on its own output.
		CHECK(decode_schedule(s.to_genome(), loads, horizon) == s);
	}
}
