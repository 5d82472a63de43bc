#include "pemc/dispatch.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pemc/errors.hpp"
#include "pemc/pv_model.hpp"
#include "pemc/storage.hpp"

namespace pemc {

namespace {

// Floor for the configured minimum activity so round-off never counts as
// battery use.
constexpr double kActivityEpsilon = 1e-9;

} // namespace

double price_percentile(std::span<const TariffSlot> tariff, double fraction) {
	if (tariff.empty()) {
		throw ValidationError("price_percentile: empty tariff series");
	}
	std::vector<double> prices;
	prices.reserve(tariff.size());
	for (const auto& slot : tariff) {
		prices.push_back(slot.utility_buy);
	}
	std::sort(prices.begin(), prices.end());
	const double pos = std::clamp(fraction, 0.0, 1.0) * static_cast<double>(prices.size() - 1);
	const auto lower = static_cast<std::size_t>(std::floor(pos));
	const auto upper = std::min(lower + 1, prices.size() - 1);
	const double frac = pos - static_cast<double>(lower);
	return prices[lower] + frac * (prices[upper] - prices[lower]);
}

Evaluator::Evaluator(Scenario scenario) : scenario_(std::move(scenario)) {
	validate_scenario(scenario_);
	harvest_.reserve(static_cast<std::size_t>(scenario_.horizon));
	for (int t = 0; t < scenario_.horizon; ++t) {
		harvest_.push_back(harvest(scenario_.pv, scenario_.weather[static_cast<std::size_t>(t)]));
	}
	threshold_ = scenario_.objective.grid_charge_threshold.value_or(price_percentile(scenario_.tariff, 0.25));
}

DispatchTrace Evaluator::dispatch(const ScheduleMatrix& schedule) const {
	const int horizon = scenario_.horizon;
	if (schedule.horizon() != horizon || static_cast<std::size_t>(schedule.load_count()) != scenario_.loads.size()) {
		throw ValidationError("schedule is " + std::to_string(schedule.load_count()) + "x"
			+ std::to_string(schedule.horizon()) + ", scenario needs " + std::to_string(scenario_.loads.size())
			+ "x" + std::to_string(horizon));
	}
	const BatterySpec& battery = scenario_.battery;
	BatteryState state = scenario_.initial_battery;

	DispatchTrace trace;
	trace.slots.reserve(static_cast<std::size_t>(horizon));
	for (int t = 0; t < horizon; ++t) {
		const auto ts = static_cast<std::size_t>(t);
		SlotFlows f;
		f.slot = t;
		for (std::size_t i = 0; i < scenario_.loads.size(); ++i) {
			if (schedule.on(static_cast<int>(i), t)) {
				f.scheduled_load += scenario_.loads[i].slot_energy_kwh();
			}
		}
		f.pv_harvest = harvest_[ts];

		const auto split = split_harvest(f.pv_harvest, f.scheduled_load);
		f.pv_to_load = split.consumed;
		const double deficit = f.scheduled_load - split.consumed;

		// Tighten the Eq. bounds so that decay and efficiency cannot push the
		// next state outside [capacity_min, capacity_max].
		const auto actions = feasible_actions(battery, state);
		const double decayed = battery.decay * state.stored;
		const double charge_cap = std::max(0.0,
			std::min(actions.charge.max, (battery.capacity_max - decayed) / battery.eff_charge));
		const double discharge_cap = std::max(0.0,
			std::min(actions.discharge.max, (decayed - battery.capacity_min) / battery.eff_discharge));
		const bool cheap_slot = scenario_.tariff[ts].utility_buy < threshold_;

		const double min_activity = std::max(scenario_.objective.min_battery_activity_kwh, kActivityEpsilon);
		double pv_charge = std::min(split.storable, charge_cap);
		double grid_charge = cheap_slot ? charge_cap - pv_charge : 0.0;
		if (pv_charge + grid_charge < min_activity) {
			pv_charge = 0.0;
			grid_charge = 0.0;
		}

		double discharge = 0.0;
		double delivered = 0.0;
		if (deficit > 0.0 && !cheap_slot) {
			const double wanted = deficit / battery.eff_discharge;
			if (wanted <= discharge_cap) {
				discharge = wanted;
				delivered = deficit;
			} else {
				discharge = discharge_cap;
				delivered = battery.eff_discharge * discharge_cap;
			}
			if (discharge < min_activity) {
				discharge = 0.0;
				delivered = 0.0;
			}
		}

		// Decay alone may drop the battery under its floor; buy the shortfall
		// whatever its size.
		if (discharge == 0.0) {
			const double floor_charge =
				(battery.capacity_min - decayed) / battery.eff_charge - pv_charge - grid_charge;
			if (floor_charge > kActivityEpsilon) {
				grid_charge += floor_charge;
			}
		}

		f.pv_to_battery = pv_charge;
		f.grid_to_battery = grid_charge;
		f.battery_discharge = discharge;
		f.delivered_discharge = delivered;
		f.grid_bought = deficit - delivered;

		const double exportable = split.storable - pv_charge;
		f.grid_sold = std::min(exportable, scenario_.feed_in_cap_kwh);
		f.curtailed = exportable - f.grid_sold;

		state = step(battery, state, pv_charge + grid_charge, discharge);
		f.battery_state = state.stored;

		if (scenario_.ds_ratio_mode == DsRatioMode::derived) {
			f.ds_ratio = derived_ds_ratio(scenario_.zone.supply_kwh[ts] + f.grid_sold,
				scenario_.zone.demand_kwh[ts] + f.grid_bought + f.grid_to_battery);
		} else {
			f.ds_ratio = scenario_.tariff[ts].ds_ratio;
		}
		trace.slots.push_back(f);
	}
	return trace;
}

Evaluation Evaluator::evaluate_detailed(const ScheduleMatrix& schedule) const {
	const int horizon = scenario_.horizon;
	const auto& loads = scenario_.loads;
	const auto& objective = scenario_.objective;

	Evaluation ev;
	ev.trace = dispatch(schedule);

	ev.transactions.reserve(ev.trace.slots.size());
	ev.degradation_per_slot.reserve(ev.trace.slots.size());
	for (const auto& f : ev.trace.slots) {
		TariffSlot tariff = scenario_.tariff[static_cast<std::size_t>(f.slot)];
		tariff.ds_ratio = f.ds_ratio;
		const double pv_out = f.pv_harvest - f.pv_to_battery - f.curtailed;
		ev.transactions.push_back(slot_transaction(f.scheduled_load + f.grid_to_battery, std::max(0.0, pv_out),
			f.delivered_discharge, internal_prices(tariff), objective.swap_transaction_prices, f.slot));
		ev.degradation_per_slot.push_back(
			degradation_cost(scenario_.battery, f.pv_to_battery + f.grid_to_battery, f.battery_discharge));
	}

	// Delay of each load from its first ON slot. Rows that are not a single
	// admissible run still get a delay so the penalty terms see them.
	ev.avg_delays.reserve(loads.size());
	for (std::size_t i = 0; i < loads.size(); ++i) {
		const Load& load = loads[i];
		const int row = static_cast<int>(i);
		const auto r = schedule.row(row);
		const auto first = std::find(r.begin(), r.end(), std::uint8_t{1});
		const int start = first == r.end() ? load.arrival_slot : static_cast<int>(first - r.begin());
		const double d = start == load.arrival_slot ? 0.0
			: static_cast<double>(start - load.arrival_slot)
				/ static_cast<double>(load.max_delay_slots - load.duration_slots);

		std::vector<double> profile(static_cast<std::size_t>(horizon), 0.0);
		for (int t = 0; t < horizon; ++t) {
			if (schedule.on(row, t)) {
				profile[static_cast<std::size_t>(t)] = d;
			}
		}
		const double avg = average_delay(profile, horizon);
		ev.avg_delays.push_back(avg);

		if (d < load.min_delay) {
			ev.delay_violation += load.min_delay - d;
		} else if (d > 1.0) {
			ev.delay_violation += d - 1.0;
		}
		if (avg > load.max_avg_delay) {
			ev.delay_violation += avg - load.max_avg_delay;
		}
	}

	ev.violations = validate_schedule_constraints(schedule, loads, scenario_.feed_in_cap_kwh);

	CostBreakdown& c = ev.costs;
	c.delay_cost = delay_cost(ev.avg_delays, scenario_.delay);
	const double tx = average_transaction_cost(ev.transactions, horizon);
	c.transaction_cost = objective.literal_tx_sign ? tx : -tx;
	c.degradation_cost = average_degradation_cost(ev.degradation_per_slot, horizon);
	c.penalty = objective.penalty_weight * (ev.delay_violation + ev.violations.total_magnitude());
	c.total = c.delay_cost + c.transaction_cost + c.degradation_cost + c.penalty;
	return ev;
}

CostBreakdown Evaluator::evaluate(const ScheduleMatrix& schedule) const {
	return evaluate_detailed(schedule).costs;
}

ScheduleMatrix Evaluator::decode(std::span<const double> genome) const {
	return decode_schedule(genome, scenario_.loads, scenario_.horizon);
}

double Evaluator::genome_cost(std::span<const double> genome) const {
	return evaluate(decode(genome)).total;
}

DispatchTrace dispatch(const ScheduleMatrix& schedule, const Scenario& scenario) {
	return Evaluator(scenario).dispatch(schedule);
}

CostBreakdown evaluate(const ScheduleMatrix& schedule, const Scenario& scenario) {
	return Evaluator(scenario).evaluate(schedule);
}

} // namespace pemc
