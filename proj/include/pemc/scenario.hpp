#pragma once

#include <filesystem>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "pemc/load_model.hpp"
#include "pemc/pricing.hpp"
#include "pemc/pv_model.hpp"
#include "pemc/storage.hpp"

namespace pemc {

enum class DsRatioMode {
	exogenous, // taken from the tariff series
	derived,   // (zone supply + home export) / (zone demand + home purchase)
};

struct ObjectiveConfig {
	// Cents per unit of constraint violation.
	double penalty_weight = 1e4;
	// Minimize mean(sell - buy) as printed instead of mean(buy - sell).
	bool literal_tx_sign = false;
	// Charge deficits at the internal buy price and credit surplus at the sell price.
	bool swap_transaction_prices = false;
	// Grid-to-battery charging happens in slots whose utility_buy is strictly
	// below this price. Unset: 25th percentile of the horizon's utility_buy.
	std::optional<double> grid_charge_threshold;
	// Battery charge or discharge smaller than this is not performed (the
	// energy is exported or bought instead). Wear cost grows without bound as
	// activity shrinks, so vanishing activities are ruled out.
	double min_battery_activity_kwh = 0.1;
};

// External packet offers and requests of the sharing zone, kWh per slot.
struct ZoneSeries {
	std::vector<double> supply_kwh;
	std::vector<double> demand_kwh;
};

struct Scenario {
	std::string name;
	int horizon = 24;
	double slot_hours = 1.0;
	std::vector<Load> loads;
	std::vector<TariffSlot> tariff;
	std::vector<WeatherSlot> weather;
	PVSpec pv;
	BatterySpec battery;
	BatteryState initial_battery;
	DelayCostParams delay;
	double feed_in_cap_kwh = std::numeric_limits<double>::infinity();
	ObjectiveConfig objective;
	DsRatioMode ds_ratio_mode = DsRatioMode::exogenous;
	ZoneSeries zone;
};

// Checks every component invariant and series length. Throws the matching
// ValidationError subclass.
void validate_scenario(const Scenario& scenario);

// Reads a scenario JSON document and the tariff/weather CSV files it names
// (paths relative to the JSON file). Violations carry the field path and line.
Scenario load_scenario(const std::filesystem::path& path);

// Same, from in-memory text; CSV paths resolve against base_dir.
Scenario parse_scenario(const std::string& json_text, const std::filesystem::path& base_dir,
	const std::string& source_name = "<scenario>");

std::vector<TariffSlot> read_tariff_csv(const std::filesystem::path& path);
std::vector<WeatherSlot> read_weather_csv(const std::filesystem::path& path);

} // namespace pemc
