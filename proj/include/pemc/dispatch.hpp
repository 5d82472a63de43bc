#pragma once

#include <span>
#include <vector>

#include "pemc/pricing.hpp"
#include "pemc/scenario.hpp"
#include "pemc/schedule.hpp"

namespace pemc {

// Resolved energy flows of one slot, kWh.
struct SlotFlows {
	int slot = 0;
	double scheduled_load = 0.0;
	double pv_harvest = 0.0;
	double pv_to_load = 0.0;
	double pv_to_battery = 0.0;
	double grid_to_battery = 0.0;
	// Nominal discharge k_t; the battery delivers eff_discharge * k_t.
	double battery_discharge = 0.0;
	double delivered_discharge = 0.0;
	double grid_bought = 0.0;   // grid energy serving the load
	double grid_sold = 0.0;
	double curtailed = 0.0;     // PV surplus above the feed-in cap
	double battery_state = 0.0; // stored energy at the end of the slot
	double ds_ratio = 0.0;
};

struct DispatchTrace {
	std::vector<SlotFlows> slots;
};

struct CostBreakdown {
	double delay_cost = 0.0;
	double transaction_cost = 0.0;
	double degradation_cost = 0.0;
	double penalty = 0.0;
	double total = 0.0;
};

struct Evaluation {
	CostBreakdown costs;
	DispatchTrace trace;
	std::vector<TransactionRecord> transactions;
	std::vector<double> degradation_per_slot;
	std::vector<double> avg_delays;
	ViolationReport violations;
	// Summed Eq.-bound excess of per-load delay and average delay.
	double delay_violation = 0.0;
};

// Default grid-charge price threshold: linear-interpolated 25th percentile.
double price_percentile(std::span<const TariffSlot> tariff, double fraction);

// Evaluation context over one read-only scenario. Thread-safe for concurrent
// const calls.
class Evaluator {
public:
	explicit Evaluator(Scenario scenario);

	const Scenario& scenario() const { return scenario_; }
	int dimensions() const { return static_cast<int>(scenario_.loads.size()) * scenario_.horizon; }
	double grid_charge_threshold() const { return threshold_; }

	// Merit-order dispatch per slot: PV to load, surplus PV to battery, deficit
	// from battery then grid, leftover surplus sold up to the feed-in cap. In
	// cheap slots (utility_buy below the threshold) the battery is not
	// discharged and tops up from the grid instead.
	DispatchTrace dispatch(const ScheduleMatrix& schedule) const;

	Evaluation evaluate_detailed(const ScheduleMatrix& schedule) const;
	CostBreakdown evaluate(const ScheduleMatrix& schedule) const;

	ScheduleMatrix decode(std::span<const double> genome) const;
	double genome_cost(std::span<const double> genome) const;

private:
	Scenario scenario_;
	std::vector<double> harvest_;
	double threshold_ = 0.0;
};

DispatchTrace dispatch(const ScheduleMatrix& schedule, const Scenario& scenario);
CostBreakdown evaluate(const ScheduleMatrix& schedule, const Scenario& scenario);

} // namespace pemc
