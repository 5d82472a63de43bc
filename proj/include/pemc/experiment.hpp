#pragma once

#include <span>
#include <string>
#include <vector>

#include "pemc/dispatch.hpp"
#include "pemc/optimizers.hpp"
#include "pemc/scenario.hpp"

namespace pemc {

struct FlowTotals {
	double sold_kwh = 0.0;
	double bought_kwh = 0.0;
	double sell_revenue_cents = 0.0;
	double buy_cost_cents = 0.0;
};

FlowTotals flow_totals(const Evaluation& evaluation);

// (baseline - optimized) / |baseline| in percent; 0 when the baseline is 0.
double percent_reduction(double baseline, double optimized);

struct AlgorithmReport {
	OptimizerConfig config;
	RunResult run;
	std::vector<int> starts;
	Evaluation evaluation;
	double cost_reduction_pct = 0.0;
};

struct ExperimentReport {
	std::string scenario_name;
	std::vector<int> baseline_starts;
	Evaluation baseline;
	std::vector<AlgorithmReport> algorithms;
};

// Immediate-start schedule (every load at its arrival slot), same dispatch.
CostBreakdown run_baseline(const Scenario& scenario);
Evaluation run_baseline_detailed(const Evaluator& evaluator);

// One optimizer run seeded with the immediate-start schedule.
AlgorithmReport run_algorithm(const Evaluator& evaluator, const OptimizerConfig& config);

// Baseline plus one run per config. With `parallel`, configs run on separate
// threads; the report is identical either way.
ExperimentReport run_experiment(const Scenario& scenario, std::span<const OptimizerConfig> configs,
	bool parallel = false);

struct SweepRow {
	double capacity_kwh = 0.0;
	double baseline_cost = 0.0;
	double optimized_cost = 0.0;
};

// Scenario copy with capacity_max replaced; stored energy is clipped to fit.
Scenario with_capacity(const Scenario& scenario, double capacity_kwh);

// Capacities must be strictly increasing and above capacity_min.
std::vector<SweepRow> run_capacity_sweep(const Scenario& scenario, std::span<const double> capacities,
	const OptimizerConfig& config);

} // namespace pemc
