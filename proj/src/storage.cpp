#include "pemc/storage.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "pemc/errors.hpp"

namespace pemc {

namespace {

void require(bool ok, const char* what) {
	if (!ok) {
		throw InvariantError(std::string("battery: ") + what);
	}
}

// Wear of one activity relative to its rated depth.
double activity_cost(double scale, double rated, double actual, double power_exp, double exp_coeff) {
	return scale * std::pow(rated / actual, power_exp) * std::exp(exp_coeff * (actual / rated - 1.0));
}

} // namespace

void validate_battery(const BatterySpec& spec) {
	require(spec.capacity_min >= 0.0, "capacity_min must be >= 0");
	require(spec.capacity_min < spec.capacity_max, "capacity_min must be below capacity_max");
	require(spec.max_charge_per_slot > 0.0, "max_charge_per_slot must be > 0");
	require(spec.max_discharge_per_slot > 0.0, "max_discharge_per_slot must be > 0");
	require(spec.decay > 0.0 && spec.decay <= 1.0, "decay must lie in (0, 1]");
	require(spec.eff_charge > 0.0 && spec.eff_charge <= 1.0, "eff_charge must lie in (0, 1]");
	require(spec.eff_discharge > 0.0 && spec.eff_discharge <= 1.0, "eff_discharge must lie in (0, 1]");
	require(spec.rated_charge > 0.0 && spec.rated_charge <= spec.max_charge_per_slot,
		"rated_charge must lie in (0, max_charge_per_slot]");
	require(spec.rated_discharge > 0.0 && spec.rated_discharge <= spec.max_discharge_per_slot,
		"rated_discharge must lie in (0, max_discharge_per_slot]");
	require(spec.cost_scale >= 0.0, "cost_scale must be >= 0");
}

void validate_battery_state(const BatterySpec& spec, const BatteryState& state) {
	if (state.stored < spec.capacity_min || state.stored > spec.capacity_max) {
		throw InvariantError("battery: stored energy " + std::to_string(state.stored) + " outside ["
			+ std::to_string(spec.capacity_min) + ", " + std::to_string(spec.capacity_max) + "]");
	}
}

FeasibleActions feasible_actions(const BatterySpec& spec, const BatteryState& state) {
	FeasibleActions actions;
	actions.charge.max = std::max(0.0, std::min(spec.max_charge_per_slot, spec.capacity_max - state.stored));
	actions.discharge.max = std::max(0.0, std::min(spec.max_discharge_per_slot, state.stored - spec.capacity_min));
	return actions;
}

BatteryState step(const BatterySpec& spec, const BatteryState& state, double charge_kwh, double discharge_kwh) {
	const auto actions = feasible_actions(spec, state);
	if (charge_kwh < 0.0 || charge_kwh > actions.charge.max + kEnergyTolerance) {
		throw InfeasibleActionError("battery charge " + std::to_string(charge_kwh) + " kWh outside [0, "
			+ std::to_string(actions.charge.max) + "]");
	}
	if (discharge_kwh < 0.0 || discharge_kwh > actions.discharge.max + kEnergyTolerance) {
		throw InfeasibleActionError("battery discharge " + std::to_string(discharge_kwh) + " kWh outside [0, "
			+ std::to_string(actions.discharge.max) + "]");
	}
	if (charge_kwh > 0.0 && discharge_kwh > 0.0) {
		throw InfeasibleActionError("battery cannot charge and discharge in the same slot");
	}
	const double next = spec.decay * state.stored + spec.eff_charge * charge_kwh - spec.eff_discharge * discharge_kwh;
	if (next < spec.capacity_min - kEnergyTolerance || next > spec.capacity_max + kEnergyTolerance) {
		throw InfeasibleActionError("battery state " + std::to_string(next) + " kWh would leave ["
			+ std::to_string(spec.capacity_min) + ", " + std::to_string(spec.capacity_max) + "]");
	}
	return {std::clamp(next, spec.capacity_min, spec.capacity_max)};
}

double degradation_cost(const BatterySpec& spec, double charge_kwh, double discharge_kwh) {
	double cost = 0.0;
	if (charge_kwh > 0.0) {
		cost += activity_cost(spec.cost_scale, spec.rated_charge, charge_kwh, spec.w0, spec.w1);
	}
	if (discharge_kwh > 0.0) {
		cost += activity_cost(spec.cost_scale, spec.rated_discharge, discharge_kwh, spec.w2, spec.w3);
	}
	return cost;
}

double average_degradation_cost(std::span<const double> per_slot, int horizon) {
	if (horizon < 1) {
		throw ValidationError("average_degradation_cost: horizon must be >= 1");
	}
	return std::accumulate(per_slot.begin(), per_slot.end(), 0.0) / horizon;
}

} // namespace pemc
