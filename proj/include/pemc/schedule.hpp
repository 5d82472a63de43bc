#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "pemc/load_model.hpp"

namespace pemc {

// Binary ON/OFF decision per load per slot. Row i belongs to load i.
class ScheduleMatrix {
public:
	ScheduleMatrix() = default;
	ScheduleMatrix(int load_count, int horizon);

	int load_count() const { return loads_; }
	int horizon() const { return horizon_; }

	bool on(int load, int slot) const { return bits_[index(load, slot)] != 0; }
	void set(int load, int slot, bool value) { bits_[index(load, slot)] = value ? 1 : 0; }

	std::span<const std::uint8_t> row(int load) const;
	int on_count(int load) const;

	// Start of the row's ON run when the row holds exactly one contiguous run.
	std::optional<int> single_run_start(int load) const;

	// Row-major 0/1 genome (load-major, slot-minor).
	std::vector<double> to_genome() const;

	static ScheduleMatrix from_starts(std::span<const Load> loads, std::span<const int> starts, int horizon);

	bool operator==(const ScheduleMatrix&) const = default;

private:
	std::size_t index(int load, int slot) const {
		return static_cast<std::size_t>(load) * static_cast<std::size_t>(horizon_) + static_cast<std::size_t>(slot);
	}

	int loads_ = 0;
	int horizon_ = 0;
	std::vector<std::uint8_t> bits_;
};

// Inclusive range of admissible start slots: the run must begin at or after
// arrival, keep the normalized delay <= 1 and finish inside the horizon.
struct StartWindow {
	int earliest = 0;
	int latest = 0;

	int count() const { return latest - earliest + 1; }
};

// Throws InfeasibleScheduleError when the load cannot fit in the horizon.
StartWindow start_window(const Load& load, int horizon);

std::vector<int> immediate_starts(std::span<const Load> loads);
ScheduleMatrix immediate_schedule(std::span<const Load> loads, int horizon);

// Thresholds a genome at 0.5 and repairs every load row to the admissible run
// with the smallest Hamming distance (earliest start on ties). 0/1 genomes
// pass through the threshold unchanged.
ScheduleMatrix decode_schedule(std::span<const double> genome, std::span<const Load> loads, int horizon);

// Start slot of every load in a valid schedule. Throws InfeasibleScheduleError
// if a row is not a single run of the load's duration inside its window.
std::vector<int> schedule_starts(const ScheduleMatrix& schedule, std::span<const Load> loads);

} // namespace pemc
