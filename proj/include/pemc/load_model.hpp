#pragma once

#include <span>
#include <string>
#include <vector>

namespace pemc {

// A schedulable appliance that consumes whole energy packets.
struct Load {
	std::string id;
	int arrival_slot = 0;
	int duration_slots = 1;
	int packets_per_slot = 1;
	double packet_size_kwh = 0.5;
	int max_delay_slots = 2;
	double min_delay = 0.0;
	// Recorded from the scenario file, never read by the cost model.
	int departure_slot = -1;
	double max_avg_delay = 1.0;
	int min_packets_per_slot = 0;
	int max_packets_per_slot = 1;

	// Energy drawn in each slot the load is ON.
	double slot_energy_kwh() const { return packets_per_slot * packet_size_kwh; }

	// Latest start that keeps the normalized delay at or below 1.
	int latest_start() const { return arrival_slot + max_delay_slots - duration_slots; }
};

struct DelayCostParams {
	double weight = 10.0; // cents per unit normalized average delay
};

// Throws InvariantError (DegenerateLoadError for max_delay_slots <= duration_slots).
void validate_load(const Load& load);

// Total packet energy demanded over the horizon, kWh.
double total_packet_demand(std::span<const Load> loads, int horizon);

// Normalized delay of a load started at start_slot. Zero when started on arrival.
double slot_delay(const Load& load, int start_slot);

// Mean of per-slot delays over the horizon.
double average_delay(std::span<const double> per_slot_delays, int horizon);

// Per-slot delay profile of a load started at start_slot: the load's delay in
// each of its served slots, zero elsewhere.
std::vector<double> delay_profile(const Load& load, int start_slot, int horizon);

// Linear delay cost, sum_i weight * avg_delay_i.
double delay_cost(std::span<const double> avg_delays, const DelayCostParams& params);

} // namespace pemc
