#pragma once

#include <cmath>
#include <filesystem>
#include <string>
#include <vector>

#include "pemc/rng.hpp"
#include "pemc/scenario.hpp"

namespace pemc::testing {

inline std::filesystem::path source_dir() {
	return PEMC_SOURCE_DIR;
}

inline std::filesystem::path example_scenario() {
	return source_dir() / "scenarios" / "example_day.json";
}

inline bool close(double actual, double expected, double rel = 1e-9) {
	const double scale = std::max(1.0, std::abs(expected));
	return std::abs(actual - expected) <= rel * scale;
}

inline Load make_load(std::string id, int arrival, int duration, int packets, double packet_kwh, int max_delay) {
	Load l;
	l.id = std::move(id);
	l.arrival_slot = arrival;
	l.duration_slots = duration;
	l.packets_per_slot = packets;
	l.packet_size_kwh = packet_kwh;
	l.max_delay_slots = max_delay;
	l.min_packets_per_slot = 0;
	l.max_packets_per_slot = packets;
	return l;
}

// Flat prices, no sun, a battery that starts empty. Nothing cheap, so no
// grid charging either.
inline Scenario quiet_scenario(int horizon, std::vector<Load> loads) {
	Scenario s;
	s.name = "quiet";
	s.horizon = horizon;
	s.loads = std::move(loads);
	s.tariff.assign(static_cast<std::size_t>(horizon), TariffSlot{2.0, 1.0, 0.5});
	s.weather.assign(static_cast<std::size_t>(horizon), WeatherSlot{0.0, 25.0});
	s.battery.capacity_min = 0.0;
	s.battery.capacity_max = 10.0;
	s.initial_battery.stored = 0.0;
	return s;
}

// Random small instance: L <= 3 loads, T0 <= 8 slots, random tariff, sun and
// battery. Every load has at least two admissible starts when T0 allows it.
inline Scenario random_small_scenario(Rng& rng) {
	Scenario s;
	s.name = "random";
	s.horizon = 4 + static_cast<int>(rng.below(5));
	const int loads = 1 + static_cast<int>(rng.below(3));
	for (int i = 0; i < loads; ++i) {
		const int duration = 1 + static_cast<int>(rng.below(2));
		const int arrival = static_cast<int>(rng.below(static_cast<std::size_t>(s.horizon - duration)));
		const int max_delay = duration + 1 + static_cast<int>(rng.below(5));
		Load l = make_load("load" + std::to_string(i), arrival, duration, 1 + static_cast<int>(rng.below(6)),
			0.5, max_delay);
		l.max_avg_delay = 1.0;
		s.loads.push_back(l);
	}
	for (int t = 0; t < s.horizon; ++t) {
		const double buy = rng.uniform(0.6, 3.7);
		const double sell = rng.uniform(0.06, std::min(0.57, buy));
		s.tariff.push_back({buy, sell, rng.uniform(0.0, 1.5)});
		s.weather.push_back({rng.uniform(0.0, 40.0), rng.uniform(10.0, 35.0)});
	}
	s.pv.max_output_kwh = 9.62;
	s.battery.capacity_min = 1.0;
	s.battery.capacity_max = rng.uniform(5.0, 20.0);
	s.initial_battery.stored = rng.uniform(1.0, s.battery.capacity_max);
	s.feed_in_cap_kwh = 5.0;
	s.delay.weight = rng.uniform(0.0, 2.0);
	return s;
}

} // namespace pemc::testing
