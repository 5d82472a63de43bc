#include "pemc/report_io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "pemc/errors.hpp"

namespace pemc {

namespace fs = std::filesystem;
using nlohmann::json;

std::string format_number(double value) {
	if (std::isnan(value)) {
		return "nan";
	}
	if (std::isinf(value)) {
		return value > 0 ? "inf" : "-inf";
	}
	if (value == 0.0) {
		return "0";
	}
	std::array<char, 64> buf{};
	const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
	return std::string(buf.data(), ptr);
}

json to_json(const CostBreakdown& c) {
	return json{
		{"delay_cost", c.delay_cost},
		{"transaction_cost", c.transaction_cost},
		{"degradation_cost", c.degradation_cost},
		{"penalty", c.penalty},
		{"total", c.total},
	};
}

json to_json(const OptimizerConfig& c) {
	json j{
		{"algorithm", std::string(to_string(c.algorithm))},
		{"population_size", c.population_size},
		{"max_generations", c.max_generations},
		{"seed", c.seed},
		{"stall_generations", c.stall_generations},
		{"stall_tolerance", c.stall_tolerance},
	};
	switch (c.algorithm) {
	case Algorithm::ga:
		j["crossover_prob"] = c.crossover_prob;
		j["mutation_prob"] = c.mutation_prob ? json(*c.mutation_prob) : json(nullptr);
		j["tournament_size"] = c.tournament_size;
		break;
	case Algorithm::bpso:
		j["alpha1"] = c.alpha1;
		j["alpha2"] = c.alpha2;
		j["v_max"] = c.v_max;
		j["inertia"] = c.inertia;
		break;
	case Algorithm::de:
		j["scale"] = c.scale;
		j["crossover_rate"] = c.crossover_rate;
		break;
	}
	return j;
}

namespace {

json evaluation_json(const Evaluation& ev, const std::vector<int>& starts) {
	const auto totals = flow_totals(ev);
	return json{
		{"costs", to_json(ev.costs)},
		{"starts", starts},
		{"avg_delays", ev.avg_delays},
		{"sold_kwh", totals.sold_kwh},
		{"bought_kwh", totals.bought_kwh},
		{"sell_revenue_cents", totals.sell_revenue_cents},
		{"buy_cost_cents", totals.buy_cost_cents},
		{"demand_gap_kwh", ev.violations.demand_gap},
		{"delay_violation", ev.delay_violation},
	};
}

} // namespace

json to_json(const ExperimentReport& report) {
	json algorithms = json::array();
	for (const auto& a : report.algorithms) {
		json entry = evaluation_json(a.evaluation, a.starts);
		entry["algorithm"] = std::string(to_string(a.run.algorithm));
		entry["config"] = to_json(a.config);
		entry["best_cost"] = a.run.best_cost;
		entry["evaluations"] = a.run.evaluations;
		entry["generations"] = a.run.best_history.empty() ? 0 : a.run.best_history.size() - 1;
		entry["cost_reduction_pct"] = a.cost_reduction_pct;
		algorithms.push_back(std::move(entry));
	}
	return json{
		{"scenario", report.scenario_name},
		{"baseline", evaluation_json(report.baseline, report.baseline_starts)},
		{"algorithms", std::move(algorithms)},
	};
}

namespace {

void apply_config_keys(const json& obj, OptimizerConfig& c, const std::string& where) {
	static const std::set<std::string> known{"population_size", "max_generations", "seed", "stall_generations",
		"stall_tolerance", "threads", "crossover_prob", "mutation_prob", "tournament_size", "alpha1", "alpha2",
		"v_max", "inertia", "scale", "crossover_rate", "ga", "bpso", "de"};
	if (!obj.is_object()) {
		throw ParseError(where + ": expected an object");
	}
	for (const auto& [key, value] : obj.items()) {
		if (!known.contains(key)) {
			throw ParseError(where + ": unknown config key '" + key + "'");
		}
		try {
			if (key == "population_size") c.population_size = value.get<int>();
			else if (key == "max_generations") c.max_generations = value.get<int>();
			else if (key == "seed") c.seed = value.get<std::uint64_t>();
			else if (key == "stall_generations") c.stall_generations = value.get<int>();
			else if (key == "stall_tolerance") c.stall_tolerance = value.get<double>();
			else if (key == "threads") c.threads = value.get<int>();
			else if (key == "crossover_prob") c.crossover_prob = value.get<double>();
			else if (key == "mutation_prob") {
				if (value.is_null()) c.mutation_prob.reset();
				else c.mutation_prob = value.get<double>();
			}
			else if (key == "tournament_size") c.tournament_size = value.get<int>();
			else if (key == "alpha1") c.alpha1 = value.get<double>();
			else if (key == "alpha2") c.alpha2 = value.get<double>();
			else if (key == "v_max") c.v_max = value.get<double>();
			else if (key == "inertia") c.inertia = value.get<double>();
			else if (key == "scale") c.scale = value.get<double>();
			else if (key == "crossover_rate") c.crossover_rate = value.get<double>();
		} catch (const json::exception& e) {
			throw ParseError(where + "." + key + ": " + e.what());
		}
	}
}

} // namespace

OptimizerConfig config_from_json(const json& doc, Algorithm algorithm) {
	OptimizerConfig c;
	c.algorithm = algorithm;
	apply_config_keys(doc, c, "config");
	const std::string section(to_string(algorithm));
	if (doc.contains(section)) {
		apply_config_keys(doc.at(section), c, "config." + section);
	}
	validate_config(c);
	return c;
}

OptimizerConfig load_config(const fs::path& path, Algorithm algorithm) {
	std::ifstream in(path);
	if (!in) {
		throw ValidationError("cannot open config file " + path.string());
	}
	json doc;
	try {
		doc = json::parse(in);
	} catch (const json::parse_error& e) {
		throw ParseError(path.filename().string() + ": " + e.what());
	}
	return config_from_json(doc, algorithm);
}

std::string trace_csv(const DispatchTrace& trace) {
	std::ostringstream out;
	out << "slot,scheduled_load,pv_harvest,pv_to_load,pv_to_battery,grid_to_battery,battery_discharge,"
		   "delivered_discharge,grid_bought,grid_sold,curtailed,battery_state,ds_ratio\n";
	for (const auto& f : trace.slots) {
		out << f.slot;
		for (double v : {f.scheduled_load, f.pv_harvest, f.pv_to_load, f.pv_to_battery, f.grid_to_battery,
				 f.battery_discharge, f.delivered_discharge, f.grid_bought, f.grid_sold, f.curtailed,
				 f.battery_state, f.ds_ratio}) {
			out << ',' << format_number(v);
		}
		out << '\n';
	}
	return out.str();
}

std::string convergence_csv(const RunResult& run) {
	std::ostringstream out;
	out << "generation,best_cost,mean_cost\n";
	for (std::size_t g = 0; g < run.best_history.size(); ++g) {
		out << g << ',' << format_number(run.best_history[g]) << ',' << format_number(run.mean_history[g]) << '\n';
	}
	return out.str();
}

std::string sweep_csv(const SweepTable& table) {
	std::ostringstream out;
	out << "capacity_kwh,algorithm,baseline_cost,optimized_cost\n";
	for (const auto& [algorithm, rows] : table) {
		for (const auto& row : rows) {
			out << format_number(row.capacity_kwh) << ',' << to_string(algorithm) << ','
				<< format_number(row.baseline_cost) << ',' << format_number(row.optimized_cost) << '\n';
		}
	}
	return out.str();
}

json sweep_json(const SweepTable& table) {
	json rows = json::array();
	for (const auto& [algorithm, entries] : table) {
		for (const auto& row : entries) {
			rows.push_back({{"capacity_kwh", row.capacity_kwh}, {"algorithm", std::string(to_string(algorithm))},
				{"baseline_cost", row.baseline_cost}, {"optimized_cost", row.optimized_cost}});
		}
	}
	return rows;
}

void write_atomic(const fs::path& path, const std::string& content) {
	fs::path tmp = path;
	tmp += ".tmp";
	{
		std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
		if (!out) {
			throw std::runtime_error("cannot write " + tmp.string());
		}
		out << content;
		if (!out.flush()) {
			throw std::runtime_error("failed writing " + tmp.string());
		}
	}
	fs::rename(tmp, path);
}

} // namespace pemc
