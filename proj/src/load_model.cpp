#include "pemc/load_model.hpp"

#include <algorithm>
#include <numeric>

#include "pemc/errors.hpp"

namespace pemc {

namespace {

void require(bool ok, const Load& load, const std::string& what) {
	if (!ok) {
		throw InvariantError("load '" + load.id + "': " + what);
	}
}

} // namespace

void validate_load(const Load& load) {
	require(load.arrival_slot >= 0, load, "arrival_slot must be >= 0");
	require(load.duration_slots >= 1, load, "duration_slots must be >= 1");
	if (load.max_delay_slots <= load.duration_slots) {
		throw DegenerateLoadError("load '" + load.id
			+ "': max_delay_slots must exceed duration_slots (delay denominator max_delay_slots - duration_slots is "
			+ std::to_string(load.max_delay_slots - load.duration_slots) + ")");
	}
	require(load.min_delay >= 0.0, load, "min_delay must be >= 0");
	require(load.min_delay <= load.max_avg_delay, load, "min_delay must not exceed max_avg_delay");
	require(load.packet_size_kwh > 0.0, load, "packet_size must be > 0");
	require(load.packets_per_slot >= 0, load, "packets_per_slot must be >= 0");
	require(load.min_packets_per_slot <= load.packets_per_slot
			&& load.packets_per_slot <= load.max_packets_per_slot,
		load, "packets_per_slot must lie in [min_packets_per_slot, max_packets_per_slot]");
}

double total_packet_demand(std::span<const Load> loads, int horizon) {
	double total = 0.0;
	for (const auto& load : loads) {
		const int active = std::min(load.duration_slots, horizon);
		total += load.slot_energy_kwh() * active;
	}
	return total;
}

double slot_delay(const Load& load, int start_slot) {
	if (start_slot < load.arrival_slot) {
		throw InfeasibleScheduleError("load '" + load.id + "' starts at slot " + std::to_string(start_slot)
			+ " before its arrival at slot " + std::to_string(load.arrival_slot));
	}
	if (load.max_delay_slots <= load.duration_slots) {
		throw DegenerateLoadError("load '" + load.id + "': max_delay_slots must exceed duration_slots");
	}
	if (start_slot == load.arrival_slot) {
		return 0.0;
	}
	return static_cast<double>(start_slot - load.arrival_slot)
		/ static_cast<double>(load.max_delay_slots - load.duration_slots);
}

double average_delay(std::span<const double> per_slot_delays, int horizon) {
	if (horizon < 1) {
		throw ValidationError("average_delay: horizon must be >= 1");
	}
	return std::accumulate(per_slot_delays.begin(), per_slot_delays.end(), 0.0) / horizon;
}

std::vector<double> delay_profile(const Load& load, int start_slot, int horizon) {
	std::vector<double> profile(static_cast<std::size_t>(std::max(horizon, 0)), 0.0);
	const double d = slot_delay(load, start_slot);
	const int end = std::min(start_slot + load.duration_slots, horizon);
	for (int t = start_slot; t < end; ++t) {
		profile[static_cast<std::size_t>(t)] = d;
	}
	return profile;
}

double delay_cost(std::span<const double> avg_delays, const DelayCostParams& params) {
	double cost = 0.0;
	for (double d : avg_delays) {
		cost += params.weight * d;
	}
	return cost;
}

} // namespace pemc
