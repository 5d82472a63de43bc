#include "pemc/rng.hpp"

#include <limits>
#include <stdexcept>

namespace pemc {

std::uint64_t splitmix64(std::uint64_t x) {
	x += 0x9E3779B97F4A7C15ULL;
	x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
	x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
	return x ^ (x >> 31);
}

std::uint64_t derive_stream_seed(std::uint64_t master, std::uint64_t index) {
	return splitmix64(master + 0x9E3779B97F4A7C15ULL * (index + 1));
}

double Rng::uniform() {
	return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

std::size_t Rng::below(std::size_t n) {
	if (n == 0) {
		throw std::invalid_argument("Rng::below: n must be positive");
	}
	const std::uint64_t bound = n;
	const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max()
		- std::numeric_limits<std::uint64_t>::max() % bound;
	std::uint64_t draw = next();
	while (draw >= limit) {
		draw = next();
	}
	return static_cast<std::size_t>(draw % bound);
}

} // namespace pemc
