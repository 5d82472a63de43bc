#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace pemc {

// SplitMix64 finalizer.
std::uint64_t splitmix64(std::uint64_t x);

// Seed of stream `index` spawned from a master seed:
//   splitmix64(master + 0x9E3779B97F4A7C15 * (index + 1))
// Each stream drives its own mt19937_64.
std::uint64_t derive_stream_seed(std::uint64_t master, std::uint64_t index);

// mt19937_64 with portable draws. The standard distributions are
// implementation-defined, so uniform() and below() are spelled out here:
// uniform() = (next() >> 11) * 2^-53, below(n) rejects draws at or above the
// largest multiple of n and returns the remainder.
class Rng {
public:
	explicit Rng(std::uint64_t seed) : engine_(seed) {}

	std::uint64_t next() { return engine_(); }
	double uniform();
	double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
	std::size_t below(std::size_t n);

private:
	std::mt19937_64 engine_;
};

} // namespace pemc
