#include "pemc/pv_model.hpp"

#include <algorithm>

#include "pemc/errors.hpp"

namespace pemc {

void validate_pv(const PVSpec& spec) {
	if (!(spec.efficiency > 0.0 && spec.efficiency <= 1.0)) {
		throw InvariantError("pv efficiency must lie in (0, 1]");
	}
	if (!(spec.area_m2 > 0.0)) {
		throw InvariantError("pv area must be > 0");
	}
	if (!(spec.max_output_kwh >= 0.0)) {
		throw InvariantError("pv max_output must be >= 0");
	}
}

double harvest(const PVSpec& spec, const WeatherSlot& weather) {
	const double correction = 1.0 - PVSpec::temp_coeff * (weather.outdoor_temp - PVSpec::reference_temp);
	const double energy = spec.efficiency * spec.area_m2 * weather.irradiance * correction;
	return std::clamp(energy, 0.0, spec.max_output_kwh);
}

HarvestSplit split_harvest(double harvest_kwh, double scheduled_load_kwh) {
	const double consumed = std::min(scheduled_load_kwh, harvest_kwh);
	return {consumed, harvest_kwh - consumed};
}

} // namespace pemc
