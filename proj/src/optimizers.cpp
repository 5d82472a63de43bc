#include "pemc/optimizers.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <limits>
#include <numeric>
#include <thread>

#include "pemc/errors.hpp"

namespace pemc {

namespace {

using Clock = std::chrono::steady_clock;

void require(bool ok, const std::string& what) {
	if (!ok) {
		throw ValidationError("optimizer config: " + what);
	}
}

bool is_probability(double p) {
	return p >= 0.0 && p <= 1.0;
}

// Fills costs[i] for i in [first, population.size()). Random draws never
// happen here, so splitting the work across threads cannot change results.
void evaluate_population(const Objective& objective, const std::vector<Genome>& population,
	std::vector<double>& costs, int threads, std::size_t first = 0) {
	costs.resize(population.size());
	const std::size_t count = population.size() - std::min(first, population.size());
	const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(std::max(threads, 1)), count);
	if (workers <= 1) {
		for (std::size_t i = first; i < population.size(); ++i) {
			costs[i] = objective(population[i]);
		}
		return;
	}
	std::vector<std::jthread> pool;
	pool.reserve(workers);
	for (std::size_t w = 0; w < workers; ++w) {
		pool.emplace_back([&, w] {
			for (std::size_t i = first + w; i < population.size(); i += workers) {
				costs[i] = objective(population[i]);
			}
		});
	}
}

double mean_of(const std::vector<double>& values) {
	return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

std::size_t argmin(const std::vector<double>& values) {
	return static_cast<std::size_t>(std::min_element(values.begin(), values.end()) - values.begin());
}

// Best-so-far bookkeeping shared by the three algorithms.
class Tracker {
public:
	Tracker(Algorithm algorithm, const OptimizerConfig& config) : config_(config), start_(Clock::now()) {
		result_.algorithm = algorithm;
		result_.best_cost = std::numeric_limits<double>::infinity();
	}

	void offer(const Genome& genome, double cost) {
		if (cost < result_.best_cost) {
			result_.best_cost = cost;
			result_.best_genome = genome;
		}
	}

	void count(std::size_t evaluations) { result_.evaluations += evaluations; }

	// Records one generation; returns true when the run should stop.
	bool close_generation(const std::vector<double>& costs) {
		const bool first = result_.best_history.empty();
		result_.best_history.push_back(result_.best_cost);
		result_.mean_history.push_back(mean_of(costs));
		if (first) {
			last_improvement_ = result_.best_cost;
			return false;
		}
		if (last_improvement_ - result_.best_cost > config_.stall_tolerance) {
			last_improvement_ = result_.best_cost;
			stalled_ = 0;
		} else {
			++stalled_;
		}
		return config_.stall_generations > 0 && stalled_ >= config_.stall_generations;
	}

	const Genome& best() const { return result_.best_genome; }

	RunResult finish() {
		result_.wall_seconds = std::chrono::duration<double>(Clock::now() - start_).count();
		return std::move(result_);
	}

private:
	const OptimizerConfig& config_;
	Clock::time_point start_;
	RunResult result_;
	double last_improvement_ = 0.0;
	int stalled_ = 0;
};

std::optional<RunResult> degenerate_run(const Objective& objective, int dimensions, Algorithm algorithm) {
	if (dimensions > 0) {
		return std::nullopt;
	}
	const auto start = Clock::now();
	RunResult result;
	result.algorithm = algorithm;
	result.best_cost = objective(result.best_genome);
	result.best_history = {result.best_cost};
	result.mean_history = {result.best_cost};
	result.evaluations = 1;
	result.wall_seconds = std::chrono::duration<double>(Clock::now() - start).count();
	return result;
}

void inject_seeds(std::vector<Genome>& population, std::span<const Genome> seeds, int dimensions) {
	const std::size_t n = std::min(seeds.size(), population.size());
	for (std::size_t i = 0; i < n; ++i) {
		if (seeds[i].size() != static_cast<std::size_t>(dimensions)) {
			throw ValidationError("seed genome has " + std::to_string(seeds[i].size()) + " genes, expected "
				+ std::to_string(dimensions));
		}
		population[i] = seeds[i];
	}
}

} // namespace

std::string_view to_string(Algorithm algorithm) {
	switch (algorithm) {
	case Algorithm::ga: return "ga";
	case Algorithm::bpso: return "bpso";
	case Algorithm::de: return "de";
	}
	return "unknown";
}

Algorithm parse_algorithm(std::string_view name) {
	std::string lower(name);
	std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
	if (lower == "ga") return Algorithm::ga;
	if (lower == "bpso") return Algorithm::bpso;
	if (lower == "de") return Algorithm::de;
	throw UsageError("unknown algorithm '" + std::string(name) + "' (expected ga, bpso or de)");
}

void validate_config(const OptimizerConfig& c) {
	require(c.population_size >= 4, "population_size must be >= 4");
	require(c.max_generations >= 0, "max_generations must be >= 0");
	require(c.stall_generations >= 0, "stall_generations must be >= 0");
	require(c.stall_tolerance >= 0.0, "stall_tolerance must be >= 0");
	require(c.threads >= 1, "threads must be >= 1");
	require(is_probability(c.crossover_prob), "crossover_prob must lie in [0, 1]");
	require(!c.mutation_prob || is_probability(*c.mutation_prob), "mutation_prob must lie in [0, 1]");
	require(c.tournament_size >= 1 && c.tournament_size <= c.population_size,
		"tournament_size must lie in [1, population_size]");
	require(c.alpha1 >= 0.0 && c.alpha2 >= 0.0, "alpha1 and alpha2 must be >= 0");
	require(c.v_max > 0.0, "v_max must be > 0");
	require(c.inertia >= 0.0, "inertia must be >= 0");
	require(is_probability(c.scale), "scale must lie in [0, 1]");
	require(is_probability(c.crossover_rate), "crossover_rate must lie in [0, 1]");
}

double bpso_velocity(double v_prev, double local_weight, double local_gap, double global_weight,
	double global_gap, double inertia) {
	return inertia * v_prev + local_weight * local_gap + global_weight * global_gap;
}

double clamp_velocity(double velocity, double v_max) {
	return std::clamp(velocity, -v_max, v_max);
}

double de_mutant(double a, double b, double c, double scale) {
	return a + scale * (b - c);
}

void de_trial(std::span<const double> target, std::span<const double> a, std::span<const double> b,
	std::span<const double> c, double scale, double crossover_rate, Rng& rng, std::span<double> trial) {
	for (std::size_t j = 0; j < target.size(); ++j) {
		const double mutant = std::clamp(de_mutant(a[j], b[j], c[j], scale), 0.0, 1.0);
		trial[j] = rng.uniform() <= crossover_rate ? mutant : target[j];
	}
}

std::array<std::size_t, 3> pick_donors(Rng& rng, std::size_t population, std::size_t target) {
	if (population < 4) {
		throw ValidationError("differential evolution needs at least 4 individuals");
	}
	std::array<std::size_t, 3> donors{};
	for (std::size_t k = 0; k < donors.size(); ++k) {
		std::size_t pick = 0;
		do {
			pick = rng.below(population);
		} while (pick == target || std::find(donors.begin(), donors.begin() + static_cast<std::ptrdiff_t>(k), pick)
			!= donors.begin() + static_cast<std::ptrdiff_t>(k));
		donors[k] = pick;
	}
	return donors;
}

RunResult ga_run(const Objective& objective, int dimensions, const OptimizerConfig& config,
	std::span<const Genome> seeds) {
	validate_config(config);
	if (auto r = degenerate_run(objective, dimensions, Algorithm::ga)) {
		return *r;
	}
	Rng rng(config.seed);
	const auto dims = static_cast<std::size_t>(dimensions);
	const auto n = static_cast<std::size_t>(config.population_size);
	const double mutation = config.mutation_prob.value_or(1.0 / static_cast<double>(dimensions));

	std::vector<Genome> population(n, Genome(dims));
	for (auto& individual : population) {
		for (auto& gene : individual) {
			gene = rng.uniform() > 0.5 ? 1.0 : 0.0;
		}
	}
	inject_seeds(population, seeds, dimensions);

	Tracker tracker(Algorithm::ga, config);
	std::vector<double> costs;
	evaluate_population(objective, population, costs, config.threads);
	tracker.count(n);
	for (std::size_t i = 0; i < n; ++i) {
		tracker.offer(population[i], costs[i]);
	}
	tracker.close_generation(costs);

	auto tournament = [&]() -> const Genome& {
		std::size_t winner = rng.below(n);
		for (int k = 1; k < config.tournament_size; ++k) {
			const std::size_t challenger = rng.below(n);
			if (costs[challenger] < costs[winner]) {
				winner = challenger;
			}
		}
		return population[winner];
	};
	auto mutate = [&](Genome& g) {
		for (auto& gene : g) {
			if (rng.uniform() < mutation) {
				gene = 1.0 - gene;
			}
		}
	};

	for (int generation = 1; generation <= config.max_generations; ++generation) {
		const std::size_t elite = argmin(costs);
		std::vector<Genome> next;
		next.reserve(n);
		next.push_back(population[elite]);
		while (next.size() < n) {
			Genome a = tournament();
			Genome b = tournament();
			if (dims > 1 && rng.uniform() < config.crossover_prob) {
				const std::size_t point = 1 + rng.below(dims - 1);
				std::swap_ranges(a.begin() + static_cast<std::ptrdiff_t>(point), a.end(),
					b.begin() + static_cast<std::ptrdiff_t>(point));
			}
			mutate(a);
			mutate(b);
			next.push_back(std::move(a));
			if (next.size() < n) {
				next.push_back(std::move(b));
			}
		}
		const double elite_cost = costs[elite];
		population = std::move(next);
		costs[0] = elite_cost;
		evaluate_population(objective, population, costs, config.threads, 1);
		tracker.count(n - 1);
		for (std::size_t i = 1; i < n; ++i) {
			tracker.offer(population[i], costs[i]);
		}
		if (tracker.close_generation(costs)) {
			break;
		}
	}
	return tracker.finish();
}

RunResult bpso_run(const Objective& objective, int dimensions, const OptimizerConfig& config,
	std::span<const Genome> seeds) {
	validate_config(config);
	if (auto r = degenerate_run(objective, dimensions, Algorithm::bpso)) {
		return *r;
	}
	Rng rng(config.seed);
	const auto dims = static_cast<std::size_t>(dimensions);
	const auto n = static_cast<std::size_t>(config.population_size);

	std::vector<Genome> position(n, Genome(dims));
	std::vector<Genome> velocity(n, Genome(dims));
	for (std::size_t i = 0; i < n; ++i) {
		for (std::size_t j = 0; j < dims; ++j) {
			position[i][j] = rng.uniform();
			velocity[i][j] = rng.uniform(-config.v_max, config.v_max);
		}
	}
	inject_seeds(position, seeds, dimensions);

	Tracker tracker(Algorithm::bpso, config);
	std::vector<double> costs;
	evaluate_population(objective, position, costs, config.threads);
	tracker.count(n);
	std::vector<Genome> personal_best = position;
	std::vector<double> personal_cost = costs;
	for (std::size_t i = 0; i < n; ++i) {
		tracker.offer(position[i], costs[i]);
	}
	tracker.close_generation(costs);

	for (int generation = 1; generation <= config.max_generations; ++generation) {
		const Genome global_best = tracker.best();
		for (std::size_t i = 0; i < n; ++i) {
			for (std::size_t j = 0; j < dims; ++j) {
				const double r1 = rng.uniform();
				const double r2 = rng.uniform();
				const double x = position[i][j];
				const double v = bpso_velocity(velocity[i][j], config.alpha1 * r1, personal_best[i][j] - x,
					config.alpha2 * r2, global_best[j] - x, config.inertia);
				velocity[i][j] = clamp_velocity(v, config.v_max);
				position[i][j] = std::clamp(x + velocity[i][j], 0.0, 1.0);
			}
		}
		evaluate_population(objective, position, costs, config.threads);
		tracker.count(n);
		for (std::size_t i = 0; i < n; ++i) {
			if (costs[i] < personal_cost[i]) {
				personal_cost[i] = costs[i];
				personal_best[i] = position[i];
			}
			tracker.offer(position[i], costs[i]);
		}
		if (tracker.close_generation(costs)) {
			break;
		}
	}
	return tracker.finish();
}

RunResult de_run(const Objective& objective, int dimensions, const OptimizerConfig& config,
	std::span<const Genome> seeds) {
	validate_config(config);
	if (auto r = degenerate_run(objective, dimensions, Algorithm::de)) {
		return *r;
	}
	Rng rng(config.seed);
	const auto dims = static_cast<std::size_t>(dimensions);
	const auto n = static_cast<std::size_t>(config.population_size);

	std::vector<Genome> population(n, Genome(dims));
	for (auto& individual : population) {
		for (auto& gene : individual) {
			gene = rng.uniform();
		}
	}
	inject_seeds(population, seeds, dimensions);

	Tracker tracker(Algorithm::de, config);
	std::vector<double> costs;
	evaluate_population(objective, population, costs, config.threads);
	tracker.count(n);
	for (std::size_t i = 0; i < n; ++i) {
		tracker.offer(population[i], costs[i]);
	}
	tracker.close_generation(costs);

	std::vector<Genome> trials(n, Genome(dims));
	std::vector<double> trial_costs;
	for (int generation = 1; generation <= config.max_generations; ++generation) {
		for (std::size_t i = 0; i < n; ++i) {
			const auto [r1, r2, r3] = pick_donors(rng, n, i);
			de_trial(population[i], population[r1], population[r2], population[r3], config.scale,
				config.crossover_rate, rng, trials[i]);
		}
		evaluate_population(objective, trials, trial_costs, config.threads);
		tracker.count(n);
		for (std::size_t i = 0; i < n; ++i) {
			if (trial_costs[i] <= costs[i]) {
				population[i] = trials[i];
				costs[i] = trial_costs[i];
			}
			tracker.offer(population[i], costs[i]);
		}
		if (tracker.close_generation(costs)) {
			break;
		}
	}
	return tracker.finish();
}

RunResult run_optimizer(const Objective& objective, int dimensions, const OptimizerConfig& config,
	std::span<const Genome> seeds) {
	switch (config.algorithm) {
	case Algorithm::ga: return ga_run(objective, dimensions, config, seeds);
	case Algorithm::bpso: return bpso_run(objective, dimensions, config, seeds);
	case Algorithm::de: return de_run(objective, dimensions, config, seeds);
	}
	throw ValidationError("unknown algorithm");
}

std::uint64_t search_space_size(std::span<const Load> loads, int horizon) {
	std::uint64_t count = 1;
	for (const auto& load : loads) {
		const auto options = static_cast<std::uint64_t>(start_window(load, horizon).count());
		if (count > std::numeric_limits<std::uint64_t>::max() / options) {
			return std::numeric_limits<std::uint64_t>::max();
		}
		count *= options;
	}
	return count;
}

OracleResult exhaustive_oracle(const std::function<double(const ScheduleMatrix&)>& objective,
	std::span<const Load> loads, int horizon, std::uint64_t limit) {
	const std::uint64_t count = search_space_size(loads, horizon);
	if (count > limit) {
		throw SearchSpaceTooLargeError(count, limit);
	}
	std::vector<StartWindow> windows;
	windows.reserve(loads.size());
	for (const auto& load : loads) {
		windows.push_back(start_window(load, horizon));
	}

	OracleResult result;
	result.best_cost = std::numeric_limits<double>::infinity();
	std::vector<int> starts(loads.size());
	for (std::size_t i = 0; i < loads.size(); ++i) {
		starts[i] = windows[i].earliest;
	}
	while (true) {
		auto schedule = ScheduleMatrix::from_starts(loads, starts, horizon);
		const double cost = objective(schedule);
		++result.schedules_evaluated;
		if (cost < result.best_cost) {
			result.best_cost = cost;
			result.starts = starts;
			result.schedule = std::move(schedule);
		}
		// Odometer increment, last load fastest.
		std::size_t k = loads.size();
		while (k > 0) {
			--k;
			if (starts[k] < windows[k].latest) {
				++starts[k];
				break;
			}
			starts[k] = windows[k].earliest;
			if (k == 0) {
				return result;
			}
		}
		if (loads.empty()) {
			return result;
		}
	}
}

} // namespace pemc
