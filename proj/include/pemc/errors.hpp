#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace pemc {

// Input problems: bad files, bad parameters, malformed schedules. The CLI maps
// every ValidationError to exit code 2.
class ValidationError : public std::runtime_error {
public:
	using std::runtime_error::runtime_error;
};

class ParseError : public ValidationError {
public:
	using ValidationError::ValidationError;
};

class MissingSeriesError : public ValidationError {
public:
	using ValidationError::ValidationError;
};

class LengthMismatchError : public ValidationError {
public:
	using ValidationError::ValidationError;
};

class InvariantError : public ValidationError {
public:
	using ValidationError::ValidationError;
};

// A load whose delay window has zero width (max_delay_slots == duration_slots).
class DegenerateLoadError : public InvariantError {
public:
	using InvariantError::InvariantError;
};

class UsageError : public ValidationError {
public:
	using ValidationError::ValidationError;
};

// Runtime failures (exit code 3).
class InfeasibleScheduleError : public std::runtime_error {
public:
	using std::runtime_error::runtime_error;
};

class InfeasibleActionError : public std::runtime_error {
public:
	using std::runtime_error::runtime_error;
};

class SearchSpaceTooLargeError : public std::runtime_error {
public:
	SearchSpaceTooLargeError(std::uint64_t count, std::uint64_t limit)
		: std::runtime_error("search space of " + std::to_string(count)
			+ " schedules exceeds the exhaustive limit of " + std::to_string(limit)),
		  count_(count) {}

	std::uint64_t count() const noexcept { return count_; }

private:
	std::uint64_t count_;
};

} // namespace pemc
