// pemc: command line front end for the packetized energy management simulator.
//
//   pemc validate --scenario day.json
//   pemc run      --scenario day.json [--config opt.json] [--seed 42] [--algorithm all] --out results/
//   pemc sweep    --scenario day.json --capacities 5,10,20 --out results/
//   pemc oracle   --scenario day.json
//
// Exit codes: 0 success, 2 validation error, 3 runtime error.

#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "pemc/errors.hpp"
#include "pemc/experiment.hpp"
#include "pemc/report_io.hpp"
#include "pemc/scenario.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace pemc;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitRuntime = 3;

struct Options {
	std::string scenario;
	std::string config;
	std::optional<std::uint64_t> seed;
	std::string out;
	std::string algorithm = "all";
	std::string format = "json";
	std::vector<double> capacities{5.0, 10.0, 20.0};
	bool parallel = false;
};

std::vector<Algorithm> selected_algorithms(const std::string& name) {
	if (name == "all") {
		return {Algorithm::ga, Algorithm::bpso, Algorithm::de};
	}
	return {parse_algorithm(name)};
}

// Per-algorithm config. The master seed spawns one stream per algorithm.
OptimizerConfig make_config(const Options& opt, Algorithm algorithm) {
	OptimizerConfig c;
	if (!opt.config.empty()) {
		c = load_config(opt.config, algorithm);
	}
	c.algorithm = algorithm;
	const std::uint64_t master = opt.seed.value_or(c.seed);
	c.seed = derive_stream_seed(master, static_cast<std::uint64_t>(algorithm));
	validate_config(c);
	return c;
}

fs::path output_dir(const Options& opt) {
	fs::path dir = opt.out.empty() ? fs::path(".") : fs::path(opt.out);
	fs::create_directories(dir);
	return dir;
}

int cmd_validate(const Options& opt) {
	const Scenario s = load_scenario(opt.scenario);
	if (opt.format == "csv") {
		std::cout << "scenario,horizon,loads\n" << s.name << ',' << s.horizon << ',' << s.loads.size() << '\n';
	} else {
		json j{{"scenario", s.name}, {"horizon", s.horizon}, {"loads", s.loads.size()}, {"valid", true}};
		std::cout << j.dump(2) << '\n';
	}
	return 0;
}

int cmd_run(const Options& opt) {
	const Scenario scenario = load_scenario(opt.scenario);
	std::vector<OptimizerConfig> configs;
	for (auto a : selected_algorithms(opt.algorithm)) {
		configs.push_back(make_config(opt, a));
	}
	const auto report = run_experiment(scenario, configs, opt.parallel);

	const fs::path dir = output_dir(opt);
	write_atomic(dir / "report.json", to_json(report).dump(2) + "\n");
	write_atomic(dir / "trace_baseline.csv", trace_csv(report.baseline.trace));
	for (const auto& a : report.algorithms) {
		const std::string tag(to_string(a.run.algorithm));
		write_atomic(dir / ("trace_" + tag + ".csv"), trace_csv(a.evaluation.trace));
		write_atomic(dir / ("convergence_" + tag + ".csv"), convergence_csv(a.run));
	}

	if (opt.format == "csv") {
		std::cout << "algorithm,total_cost,cost_reduction_pct,evaluations,wall_seconds\n";
		std::cout << "baseline," << format_number(report.baseline.costs.total) << ",0,1,0\n";
		for (const auto& a : report.algorithms) {
			std::cout << to_string(a.run.algorithm) << ',' << format_number(a.evaluation.costs.total) << ','
				<< format_number(a.cost_reduction_pct) << ',' << a.run.evaluations << ','
				<< format_number(a.run.wall_seconds) << '\n';
		}
	} else {
		json summary{{"baseline_total", report.baseline.costs.total}, {"output", dir.string()}};
		for (const auto& a : report.algorithms) {
			summary[std::string(to_string(a.run.algorithm))] = {{"total", a.evaluation.costs.total},
				{"cost_reduction_pct", a.cost_reduction_pct}, {"evaluations", a.run.evaluations},
				{"wall_seconds", a.run.wall_seconds}};
		}
		std::cout << summary.dump(2) << '\n';
	}
	return 0;
}

int cmd_sweep(const Options& opt) {
	const Scenario scenario = load_scenario(opt.scenario);
	SweepTable table;
	for (auto a : selected_algorithms(opt.algorithm)) {
		table.emplace_back(a, run_capacity_sweep(scenario, opt.capacities, make_config(opt, a)));
	}
	const fs::path dir = output_dir(opt);
	const std::string csv = sweep_csv(table);
	write_atomic(dir / "sweep.csv", csv);
	if (opt.format == "csv") {
		std::cout << csv;
	} else {
		std::cout << sweep_json(table).dump(2) << '\n';
	}
	return 0;
}

int cmd_oracle(const Options& opt) {
	const Scenario scenario = load_scenario(opt.scenario);
	const Evaluator evaluator(scenario);
	const auto result = exhaustive_oracle(
		[&](const ScheduleMatrix& s) { return evaluator.evaluate(s).total; }, scenario.loads, scenario.horizon);
	const auto ev = evaluator.evaluate_detailed(result.schedule);
	json j{{"scenario", scenario.name}, {"starts", result.starts}, {"best_cost", result.best_cost},
		{"schedules_evaluated", result.schedules_evaluated}, {"costs", to_json(ev.costs)}};
	if (!opt.out.empty()) {
		const fs::path dir = output_dir(opt);
		write_atomic(dir / "oracle.json", j.dump(2) + "\n");
		write_atomic(dir / "trace_oracle.csv", trace_csv(ev.trace));
	}
	if (opt.format == "csv") {
		std::cout << "best_cost,schedules_evaluated\n"
				  << format_number(result.best_cost) << ',' << result.schedules_evaluated << '\n';
	} else {
		std::cout << j.dump(2) << '\n';
	}
	return 0;
}

} // namespace

int main(int argc, char** argv) {
	CLI::App app{"Packetized energy management: scheduling, dispatch and cost evaluation"};
	app.require_subcommand(1);
	Options opt;

	auto add_common = [&](CLI::App* cmd) {
		cmd->add_option("--scenario", opt.scenario, "Scenario JSON file")->required()->check(CLI::ExistingFile);
		cmd->add_option("--format", opt.format, "Summary format on stdout")
			->check(CLI::IsMember({"json", "csv"}));
		cmd->add_option("--out", opt.out, "Output directory");
	};
	auto add_optimizer = [&](CLI::App* cmd) {
		cmd->add_option("--config", opt.config, "Optimizer config JSON")->check(CLI::ExistingFile);
		cmd->add_option("--seed", opt.seed, "Master seed (overrides the config seed)");
		cmd->add_option("--algorithm", opt.algorithm, "ga, bpso, de or all")
			->check(CLI::IsMember({"ga", "bpso", "de", "all"}));
		cmd->add_flag("--parallel", opt.parallel, "Run algorithms on separate threads");
	};

	auto* validate = app.add_subcommand("validate", "Load and check a scenario");
	add_common(validate);
	auto* run = app.add_subcommand("run", "Baseline plus optimizer runs; writes report.json, traces, convergence");
	add_common(run);
	add_optimizer(run);
	auto* sweep = app.add_subcommand("sweep", "Battery capacity sweep; writes sweep.csv");
	add_common(sweep);
	add_optimizer(sweep);
	sweep->add_option("--capacities", opt.capacities, "Battery capacities, kWh")->delimiter(',');
	auto* oracle = app.add_subcommand("oracle", "Exhaustive search over admissible schedules");
	add_common(oracle);

	try {
		app.parse(argc, argv);
	} catch (const CLI::CallForHelp& e) {
		return app.exit(e);
	} catch (const CLI::ParseError& e) {
		app.exit(e);
		return kExitValidation;
	}

	try {
		if (*validate) return cmd_validate(opt);
		if (*run) return cmd_run(opt);
		if (*sweep) return cmd_sweep(opt);
		if (*oracle) return cmd_oracle(opt);
	} catch (const ValidationError& e) {
		std::cerr << "error: " << e.what() << '\n';
		return kExitValidation;
	} catch (const std::exception& e) {
		std::cerr << "error: " << e.what() << '\n';
		return kExitRuntime;
	}
	return 0;
}
