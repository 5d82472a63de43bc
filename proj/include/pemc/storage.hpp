#pragma once

#include <span>

namespace pemc {

// Static battery limits and the cycle-degradation model. Energies in kWh,
// costs in cents.
struct BatterySpec {
	double capacity_min = 0.0;
	double capacity_max = 20.0;
	double max_charge_per_slot = 5.0;
	double max_discharge_per_slot = 5.0;
	double decay = 1.0;
	double eff_charge = 0.95;
	double eff_discharge = 0.95;
	double rated_charge = 2.5;
	double rated_discharge = 2.5;
	// Degradation shape exponents: w0/w1 for charging, w2/w3 for discharging.
	double w0 = 1.3;
	double w1 = 0.9;
	double w2 = 1.3;
	double w3 = 0.9;
	// Amortized wear price of one activity at rated depth.
	double cost_scale = 1.0;
};

struct BatteryState {
	double stored = 0.0;
};

struct ActionRange {
	double min = 0.0;
	double max = 0.0;
};

struct FeasibleActions {
	ActionRange charge;
	ActionRange discharge;
};

// Absolute slack used when checking action and state bounds.
inline constexpr double kEnergyTolerance = 1e-9;

void validate_battery(const BatterySpec& spec);
void validate_battery_state(const BatterySpec& spec, const BatteryState& state);

FeasibleActions feasible_actions(const BatterySpec& spec, const BatteryState& state);

// Advances stored energy by one slot. Throws InfeasibleActionError for actions
// outside feasible_actions, simultaneous charge and discharge, or a resulting
// state outside [capacity_min, capacity_max].
BatteryState step(const BatterySpec& spec, const BatteryState& state, double charge_kwh, double discharge_kwh);

// Wear cost of one slot's charge and discharge activity. Zero activity costs 0.
double degradation_cost(const BatterySpec& spec, double charge_kwh, double discharge_kwh);

double average_degradation_cost(std::span<const double> per_slot, int horizon);

} // namespace pemc
