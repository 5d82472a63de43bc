#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pemc/load_model.hpp"
#include "pemc/rng.hpp"
#include "pemc/schedule.hpp"

namespace pemc {

enum class Algorithm { ga, bpso, de };

std::string_view to_string(Algorithm algorithm);
// Accepts "ga", "bpso", "de" (case-insensitive); throws UsageError otherwise.
Algorithm parse_algorithm(std::string_view name);

struct OptimizerConfig {
	Algorithm algorithm = Algorithm::ga;
	int population_size = 50;
	int max_generations = 200;
	std::uint64_t seed = 42;
	// Stop after this many generations without improvement beyond
	// stall_tolerance. 0 disables the early exit.
	int stall_generations = 50;
	double stall_tolerance = 1e-9;
	// Worker threads for fitness evaluation. Results do not depend on it.
	int threads = 1;

	// GA
	double crossover_prob = 0.9;
	std::optional<double> mutation_prob; // unset: 1 / dimensions
	int tournament_size = 3;

	// BPSO
	double alpha1 = 2.0;
	double alpha2 = 2.0;
	double v_max = 4.0;
	double inertia = 1.0;

	// DE
	double scale = 0.7;
	double crossover_rate = 0.9;
};

void validate_config(const OptimizerConfig& config);

using Genome = std::vector<double>;
using Objective = std::function<double(std::span<const double>)>;

struct RunResult {
	Algorithm algorithm = Algorithm::ga;
	Genome best_genome;
	double best_cost = 0.0;
	// Entry 0 is the initial population; one entry per generation after that.
	std::vector<double> best_history;
	std::vector<double> mean_history;
	std::uint64_t evaluations = 0;
	double wall_seconds = 0.0;
};

// Seed genomes replace the first members of the initial population.
RunResult ga_run(const Objective& objective, int dimensions, const OptimizerConfig& config,
	std::span<const Genome> seeds = {});
RunResult bpso_run(const Objective& objective, int dimensions, const OptimizerConfig& config,
	std::span<const Genome> seeds = {});
RunResult de_run(const Objective& objective, int dimensions, const OptimizerConfig& config,
	std::span<const Genome> seeds = {});

// Runs the algorithm named by config.algorithm.
RunResult run_optimizer(const Objective& objective, int dimensions, const OptimizerConfig& config,
	std::span<const Genome> seeds = {});

// One velocity component:
//   inertia * v_prev + local_weight * local_gap + global_weight * global_gap
// where the weights are alpha * rand and the gaps are (best - position).
double bpso_velocity(double v_prev, double local_weight, double local_gap, double global_weight,
	double global_gap, double inertia = 1.0);
double clamp_velocity(double velocity, double v_max);

// One mutant component: a + scale * (b - c).
double de_mutant(double a, double b, double c, double scale);

// Binomial crossover of the target with the mutant a + scale * (b - c),
// clamped to [0, 1]. Each component takes the mutant when a uniform draw is
// <= crossover_rate; no component is forced.
void de_trial(std::span<const double> target, std::span<const double> a, std::span<const double> b,
	std::span<const double> c, double scale, double crossover_rate, Rng& rng, std::span<double> trial);

// Three donor indices, pairwise distinct and different from target.
std::array<std::size_t, 3> pick_donors(Rng& rng, std::size_t population, std::size_t target);

struct OracleResult {
	std::vector<int> starts;
	ScheduleMatrix schedule;
	double best_cost = 0.0;
	std::uint64_t schedules_evaluated = 0;
};

inline constexpr std::uint64_t kOracleLimit = 1'000'000;

// Product of the loads' admissible start counts, saturating at UINT64_MAX.
std::uint64_t search_space_size(std::span<const Load> loads, int horizon);

// Enumerates every admissible schedule; the first minimum in lexicographic
// start order wins. Throws SearchSpaceTooLargeError above `limit`.
OracleResult exhaustive_oracle(const std::function<double(const ScheduleMatrix&)>& objective,
	std::span<const Load> loads, int horizon, std::uint64_t limit = kOracleLimit);

} // namespace pemc
