#include "pemc/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <future>

#include "pemc/errors.hpp"

namespace pemc {

FlowTotals flow_totals(const Evaluation& evaluation) {
	FlowTotals totals;
	for (const auto& r : evaluation.transactions) {
		totals.sold_kwh += r.sold_kwh;
		totals.bought_kwh += r.bought_kwh;
		totals.sell_revenue_cents += r.sell_revenue_cents;
		totals.buy_cost_cents += r.buy_cost_cents;
	}
	return totals;
}

double percent_reduction(double baseline, double optimized) {
	if (baseline == 0.0) {
		return 0.0;
	}
	return 100.0 * (baseline - optimized) / std::abs(baseline);
}

CostBreakdown run_baseline(const Scenario& scenario) {
	return run_baseline_detailed(Evaluator(scenario)).costs;
}

Evaluation run_baseline_detailed(const Evaluator& evaluator) {
	const auto& s = evaluator.scenario();
	return evaluator.evaluate_detailed(immediate_schedule(s.loads, s.horizon));
}

AlgorithmReport run_algorithm(const Evaluator& evaluator, const OptimizerConfig& config) {
	const auto& s = evaluator.scenario();
	const std::vector<Genome> seeds{immediate_schedule(s.loads, s.horizon).to_genome()};
	const Objective objective = [&evaluator](std::span<const double> genome) {
		return evaluator.genome_cost(genome);
	};

	AlgorithmReport report;
	report.config = config;
	report.run = run_optimizer(objective, evaluator.dimensions(), config, seeds);
	const auto schedule = evaluator.decode(report.run.best_genome);
	report.starts = schedule_starts(schedule, s.loads);
	report.evaluation = evaluator.evaluate_detailed(schedule);
	return report;
}

ExperimentReport run_experiment(const Scenario& scenario, std::span<const OptimizerConfig> configs, bool parallel) {
	if (configs.empty()) {
		throw UsageError("run_experiment needs at least one optimizer config");
	}
	for (const auto& c : configs) {
		validate_config(c);
	}
	const Evaluator evaluator(scenario);

	ExperimentReport report;
	report.scenario_name = scenario.name;
	report.baseline_starts = immediate_starts(scenario.loads);
	report.baseline = run_baseline_detailed(evaluator);

	if (parallel) {
		std::vector<std::future<AlgorithmReport>> pending;
		for (const auto& c : configs) {
			pending.push_back(std::async(std::launch::async, [&evaluator, c] { return run_algorithm(evaluator, c); }));
		}
		for (auto& f : pending) {
			report.algorithms.push_back(f.get());
		}
	} else {
		for (const auto& c : configs) {
			report.algorithms.push_back(run_algorithm(evaluator, c));
		}
	}
	for (auto& a : report.algorithms) {
		a.cost_reduction_pct = percent_reduction(report.baseline.costs.total, a.evaluation.costs.total);
	}
	return report;
}

Scenario with_capacity(const Scenario& scenario, double capacity_kwh) {
	Scenario s = scenario;
	s.battery.capacity_max = capacity_kwh;
	s.initial_battery.stored = std::min(s.initial_battery.stored, capacity_kwh);
	return s;
}

std::vector<SweepRow> run_capacity_sweep(const Scenario& scenario, std::span<const double> capacities,
	const OptimizerConfig& config) {
	if (capacities.empty()) {
		throw UsageError("capacity sweep needs at least one capacity");
	}
	for (std::size_t i = 0; i < capacities.size(); ++i) {
		if (!(capacities[i] > scenario.battery.capacity_min)) {
			throw UsageError("capacity " + std::to_string(capacities[i]) + " kWh must exceed capacity_min");
		}
		if (i > 0 && !(capacities[i] > capacities[i - 1])) {
			throw UsageError("capacities must be strictly increasing");
		}
	}
	std::vector<SweepRow> rows;
	for (double capacity : capacities) {
		const Evaluator evaluator(with_capacity(scenario, capacity));
		const auto baseline = run_baseline_detailed(evaluator);
		const auto optimized = run_algorithm(evaluator, config);
		rows.push_back({capacity, baseline.costs.total, optimized.evaluation.costs.total});
	}
	return rows;
}

} // namespace pemc
