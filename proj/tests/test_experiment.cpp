#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "pemc/errors.hpp"
#include "pemc/experiment.hpp"
#include "pemc/report_io.hpp"
#include "support/fixtures.hpp"

using namespace pemc;
using pemc::testing::make_load;
using pemc::testing::quiet_scenario;
namespace fs = std::filesystem;

namespace {

OptimizerConfig quick(Algorithm a, std::uint64_t seed = 42) {
	OptimizerConfig c;
	c.algorithm = a;
	c.population_size = 20;
	c.max_generations = 40;
	c.stall_generations = 15;
	c.seed = seed;
	return c;
}

} // namespace

TEST_CASE("percent reduction") {
	CHECK(percent_reduction(10.0, 9.0) == doctest::Approx(10.0));
	CHECK(percent_reduction(10.0, 10.0) == 0.0);
	CHECK(percent_reduction(0.0, -1.0) == 0.0);
	// Negative baselines keep the sign meaning "lower is better".
	CHECK(percent_reduction(-10.0, -11.0) == doctest::Approx(10.0));
}

TEST_CASE("baseline") {
	SUBCASE("loads already in the cheapest slots leave nothing to improve") {
		Scenario s = quiet_scenario(4, {make_load("a", 1, 1, 2, 0.5, 3), make_load("b", 1, 2, 1, 0.5, 4)});
		for (auto& t : s.tariff) {
			t.utility_buy = 3.0;
		}
		s.tariff[1].utility_buy = 2.0;
		s.tariff[2].utility_buy = 2.0;
		s.objective.grid_charge_threshold = 0.0;
		const Evaluator ev(s);
		const double baseline = run_baseline(s).total;
		const auto oracle = exhaustive_oracle(
			[&](const ScheduleMatrix& m) { return ev.evaluate(m).total; }, s.loads, s.horizon);
		CHECK(oracle.starts == immediate_starts(s.loads));
		CHECK(oracle.best_cost == baseline);
		for (auto a : {Algorithm::ga, Algorithm::bpso, Algorithm::de}) {
			CHECK(run_algorithm(ev, quick(a)).evaluation.costs.total == baseline);
		}
	}
	SUBCASE("no loads") {
		const auto c = run_baseline(quiet_scenario(5, {}));
		CHECK(c.delay_cost == 0.0);
		CHECK(c.transaction_cost == 0.0);
	}
	SUBCASE("delay is always zero") {
		Rng rng(67);
		for (int trial = 0; trial < 50; ++trial) {
			CHECK(run_baseline(pemc::testing::random_small_scenario(rng)).delay_cost == 0.0);
		}
	}
}

TEST_CASE("experiment on the shipped fixture") {
	const Scenario s = load_scenario(pemc::testing::example_scenario());
	// Default settings, seeds spawned from 42 as the command line does.
	std::vector<OptimizerConfig> configs;
	for (auto a : {Algorithm::ga, Algorithm::bpso, Algorithm::de}) {
		OptimizerConfig c;
		c.algorithm = a;
		c.seed = derive_stream_seed(42, static_cast<std::uint64_t>(a));
		configs.push_back(c);
	}
	const auto report = run_experiment(s, configs);
	REQUIRE(report.algorithms.size() == 3);
	CHECK(report.baseline_starts == immediate_starts(s.loads));
	const auto baseline_buy = flow_totals(report.baseline).buy_cost_cents;
	for (const auto& a : report.algorithms) {
		CHECK(a.evaluation.costs.total <= report.baseline.costs.total);
		CHECK(flow_totals(a.evaluation).buy_cost_cents < baseline_buy);
		CHECK(a.cost_reduction_pct
			== doctest::Approx(percent_reduction(report.baseline.costs.total, a.evaluation.costs.total)));
		const auto& c = a.evaluation.costs;
		CHECK(std::abs(c.total - (c.delay_cost + c.transaction_cost + c.degradation_cost + c.penalty)) <= 1e-6);
		CHECK(a.evaluation.avg_delays.size() == s.loads.size());
	}

	// Same inputs, same report, threads or not.
	const auto again = run_experiment(s, configs, true);
	CHECK(to_json(again).dump() == to_json(report).dump());

	const std::vector<OptimizerConfig> one{quick(Algorithm::ga)};
	CHECK(to_json(run_experiment(s, one)).dump() == to_json(run_experiment(s, one)).dump());

	CHECK_THROWS_AS(run_experiment(s, std::span<const OptimizerConfig>{}), UsageError);
}

TEST_CASE("capacity sweep") {
	const Scenario s = load_scenario(pemc::testing::example_scenario());
	const std::vector<double> one{12.0};
	const auto rows = run_capacity_sweep(s, one, quick(Algorithm::ga));
	REQUIRE(rows.size() == 1);
	CHECK(rows[0].capacity_kwh == 12.0);
	CHECK(rows[0].optimized_cost <= rows[0].baseline_cost);

	const std::vector<double> down{10.0, 5.0};
	CHECK_THROWS_AS(run_capacity_sweep(s, down, quick(Algorithm::ga)), UsageError);
	const std::vector<double> flat{5.0, 5.0};
	CHECK_THROWS_AS(run_capacity_sweep(s, flat, quick(Algorithm::ga)), UsageError);
	const std::vector<double> below{0.5, 5.0};
	CHECK_THROWS_AS(run_capacity_sweep(s, below, quick(Algorithm::ga)), UsageError);

	const Scenario small = with_capacity(s, 5.0);
	CHECK(small.battery.capacity_max == 5.0);
	CHECK(small.initial_battery.stored <= 5.0);
}

TEST_CASE("report output") {
	CHECK(format_number(0.1) == "0.1");
	CHECK(format_number(-2.5) == "-2.5");
	CHECK(format_number(0.0) == "0");
	CHECK(std::stod(format_number(1.0 / 3.0)) == 1.0 / 3.0);

	const Scenario s = pemc::testing::quiet_scenario(2, {make_load("a", 0, 1, 2, 0.5, 2)});
	const Evaluator ev(s);
	const auto trace = ev.dispatch(immediate_schedule(s.loads, 2));
	const std::string csv = trace_csv(trace);
	CHECK(csv.rfind("slot,scheduled_load,pv_harvest,", 0) == 0);
	CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);

	RunResult r;
	r.best_history = {3.0, 2.0};
	r.mean_history = {4.0, 2.5};
	CHECK(convergence_csv(r) == "generation,best_cost,mean_cost\n0,3,4\n1,2,2.5\n");

	const SweepTable table{{Algorithm::de, {{5.0, 2.0, 1.5}}}};
	CHECK(sweep_csv(table) == "capacity_kwh,algorithm,baseline_cost,optimized_cost\n5,de,2,1.5\n");
}

TEST_CASE("optimizer config documents") {
	const auto doc = nlohmann::json::parse(R"({"population_size": 30, "seed": 5, "de": {"scale": 0.5}})");
	const auto de = config_from_json(doc, Algorithm::de);
	CHECK(de.population_size == 30);
	CHECK(de.seed == 5);
	CHECK(de.scale == 0.5);
	const auto ga = config_from_json(doc, Algorithm::ga);
	CHECK(ga.scale == OptimizerConfig{}.scale);

	CHECK_THROWS_AS(config_from_json(nlohmann::json::parse(R"({"popsize": 3})"), Algorithm::ga), ParseError);
	CHECK_THROWS_AS(config_from_json(nlohmann::json::parse(R"({"crossover_rate": 2})"), Algorithm::de),
		ValidationError);
}

TEST_CASE("atomic write replaces the target") {
	const fs::path dir = fs::temp_directory_path() / "pemc_atomic";
	fs::create_directories(dir);
	write_atomic(dir / "out.txt", "first");
	write_atomic(dir / "out.txt", "second");
	std::ifstream in(dir / "out.txt");
	std::stringstream ss;
	ss << in.rdbuf();
	CHECK(ss.str() == "second");
	CHECK_FALSE(fs::exists(dir / "out.txt.tmp"));
	fs::remove_all(dir);
}
