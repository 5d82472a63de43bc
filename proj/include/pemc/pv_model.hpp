#pragma once

#include <limits>

namespace pemc {

struct PVSpec {
	double efficiency = 0.18;
	double area_m2 = 0.5;
	// Upper bound on harvest per slot, kWh.
	double max_output_kwh = std::numeric_limits<double>::infinity();

	static constexpr double temp_coeff = 0.005;     // per degC
	static constexpr double reference_temp = 25.0;  // degC
};

// Irradiance is an energy density integrated over the slot, kWh/m^2.
struct WeatherSlot {
	double irradiance = 0.0;
	double outdoor_temp = 25.0;
};

void validate_pv(const PVSpec& spec);

// Temperature-corrected PV energy for one slot, clamped to [0, max_output_kwh].
double harvest(const PVSpec& spec, const WeatherSlot& weather);

struct HarvestSplit {
	double consumed = 0.0;  // PV serving the scheduled load
	double storable = 0.0;  // upper bound on PV available for the battery
};

HarvestSplit split_harvest(double harvest_kwh, double scheduled_load_kwh);

} // namespace pemc
