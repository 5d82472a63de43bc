#include "pemc/schedule.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "pemc/errors.hpp"

namespace pemc {

ScheduleMatrix::ScheduleMatrix(int load_count, int horizon)
	: loads_(load_count), horizon_(horizon),
	  bits_(static_cast<std::size_t>(load_count) * static_cast<std::size_t>(horizon), 0) {
	if (load_count < 0 || horizon < 0) {
		throw ValidationError("schedule dimensions must be non-negative");
	}
}

std::span<const std::uint8_t> ScheduleMatrix::row(int load) const {
	return std::span<const std::uint8_t>(bits_).subspan(index(load, 0), static_cast<std::size_t>(horizon_));
}

int ScheduleMatrix::on_count(int load) const {
	const auto r = row(load);
	return static_cast<int>(std::count(r.begin(), r.end(), std::uint8_t{1}));
}

std::optional<int> ScheduleMatrix::single_run_start(int load) const {
	const auto r = row(load);
	const auto first = std::find(r.begin(), r.end(), std::uint8_t{1});
	if (first == r.end()) {
		return std::nullopt;
	}
	const auto run_end = std::find(first, r.end(), std::uint8_t{0});
	if (std::find(run_end, r.end(), std::uint8_t{1}) != r.end()) {
		return std::nullopt;
	}
	return static_cast<int>(first - r.begin());
}

std::vector<double> ScheduleMatrix::to_genome() const {
	return std::vector<double>(bits_.begin(), bits_.end());
}

ScheduleMatrix ScheduleMatrix::from_starts(std::span<const Load> loads, std::span<const int> starts, int horizon) {
	if (starts.size() != loads.size()) {
		throw ValidationError("from_starts: expected " + std::to_string(loads.size()) + " start slots, got "
			+ std::to_string(starts.size()));
	}
	ScheduleMatrix schedule(static_cast<int>(loads.size()), horizon);
	for (std::size_t i = 0; i < loads.size(); ++i) {
		const int begin = starts[i];
		const int end = begin + loads[i].duration_slots;
		if (begin < 0 || end > horizon) {
			throw InfeasibleScheduleError("load '" + loads[i].id + "' run [" + std::to_string(begin) + ", "
				+ std::to_string(end) + ") falls outside the horizon");
		}
		for (int t = begin; t < end; ++t) {
			schedule.set(static_cast<int>(i), t, true);
		}
	}
	return schedule;
}

StartWindow start_window(const Load& load, int horizon) {
	StartWindow w{load.arrival_slot, std::min(load.latest_start(), horizon - load.duration_slots)};
	if (w.latest < w.earliest) {
		throw InfeasibleScheduleError("load '" + load.id + "' has no admissible start slot within a horizon of "
			+ std::to_string(horizon) + " slots");
	}
	return w;
}

std::vector<int> immediate_starts(std::span<const Load> loads) {
	std::vector<int> starts;
	starts.reserve(loads.size());
	for (const auto& load : loads) {
		starts.push_back(load.arrival_slot);
	}
	return starts;
}

ScheduleMatrix immediate_schedule(std::span<const Load> loads, int horizon) {
	const auto starts = immediate_starts(loads);
	return ScheduleMatrix::from_starts(loads, starts, horizon);
}

ScheduleMatrix decode_schedule(std::span<const double> genome, std::span<const Load> loads, int horizon) {
	const std::size_t expected = loads.size() * static_cast<std::size_t>(horizon);
	if (genome.size() != expected) {
		throw ValidationError("genome length " + std::to_string(genome.size()) + " does not match "
			+ std::to_string(loads.size()) + " loads x " + std::to_string(horizon) + " slots");
	}

	std::vector<int> starts(loads.size());
	std::vector<std::uint8_t> bits(static_cast<std::size_t>(horizon));
	for (std::size_t i = 0; i < loads.size(); ++i) {
		const Load& load = loads[i];
		const auto gene = genome.subspan(i * static_cast<std::size_t>(horizon), static_cast<std::size_t>(horizon));
		for (int t = 0; t < horizon; ++t) {
			bits[static_cast<std::size_t>(t)] = gene[static_cast<std::size_t>(t)] > 0.5 ? 1 : 0;
		}

		// Hamming distance to the run starting at s: ones outside the run plus
		// zeros inside it. Prefix sums make each candidate O(1).
		std::vector<int> prefix(static_cast<std::size_t>(horizon) + 1, 0);
		for (int t = 0; t < horizon; ++t) {
			prefix[static_cast<std::size_t>(t) + 1] = prefix[static_cast<std::size_t>(t)] + bits[static_cast<std::size_t>(t)];
		}
		const int total_ones = prefix.back();
		const auto w = start_window(load, horizon);
		int best_start = w.earliest;
		int best_distance = std::numeric_limits<int>::max();
		for (int s = w.earliest; s <= w.latest; ++s) {
			const int inside = prefix[static_cast<std::size_t>(s + load.duration_slots)] - prefix[static_cast<std::size_t>(s)];
			const int distance = (total_ones - inside) + (load.duration_slots - inside);
			if (distance < best_distance) {
				best_distance = distance;
				best_start = s;
			}
		}
		starts[i] = best_start;
	}
	return ScheduleMatrix::from_starts(loads, starts, horizon);
}

std::vector<int> schedule_starts(const ScheduleMatrix& schedule, std::span<const Load> loads) {
	if (static_cast<std::size_t>(schedule.load_count()) != loads.size()) {
		throw ValidationError("schedule has " + std::to_string(schedule.load_count()) + " rows for "
			+ std::to_string(loads.size()) + " loads");
	}
	std::vector<int> starts;
	starts.reserve(loads.size());
	for (std::size_t i = 0; i < loads.size(); ++i) {
		const int row = static_cast<int>(i);
		const auto start = schedule.single_run_start(row);
		if (!start || schedule.on_count(row) != loads[i].duration_slots) {
			throw InfeasibleScheduleError("load '" + loads[i].id + "' is not scheduled as one run of "
				+ std::to_string(loads[i].duration_slots) + " slots");
		}
		const auto w = start_window(loads[i], schedule.horizon());
		if (*start < w.earliest || *start > w.latest) {
			throw InfeasibleScheduleError("load '" + loads[i].id + "' starts at slot " + std::to_string(*start)
				+ " outside its admissible window [" + std::to_string(w.earliest) + ", "
				+ std::to_string(w.latest) + "]");
		}
		starts.push_back(*start);
	}
	return starts;
}

} // namespace pemc
