#include "pemc/scenario.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "pemc/errors.hpp"
#include "pemc/json_locator.hpp"
#include "pemc/schedule.hpp"

namespace pemc {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string read_file(const fs::path& path) {
	std::ifstream in(path, std::ios::binary);
	if (!in) {
		throw MissingSeriesError("cannot open " + path.string());
	}
	std::ostringstream buffer;
	buffer << in.rdbuf();
	return buffer.str();
}

// ---- CSV -------------------------------------------------------------------

std::vector<std::string> split_csv_line(const std::string& line) {
	std::vector<std::string> cells;
	std::string cell;
	std::istringstream stream(line);
	while (std::getline(stream, cell, ',')) {
		const auto first = cell.find_first_not_of(" \t\r");
		const auto last = cell.find_last_not_of(" \t\r");
		cells.push_back(first == std::string::npos ? std::string() : cell.substr(first, last - first + 1));
	}
	if (!line.empty() && line.back() == ',') {
		cells.emplace_back();
	}
	return cells;
}

double parse_number(const std::string& text, const std::string& where) {
	double value = 0.0;
	const char* begin = text.data();
	const char* end = text.data() + text.size();
	const auto [ptr, ec] = std::from_chars(begin, end, value);
	if (ec != std::errc() || ptr != end || text.empty()) {
		throw ParseError(where + ": '" + text + "' is not a number");
	}
	return value;
}

// Rows of a CSV file as column -> value maps, checking that `columns` are present
// and that the slot column counts 0, 1, 2, ...
std::vector<std::map<std::string, double>> read_series_csv(const fs::path& path,
	const std::vector<std::string>& columns) {
	const std::string text = read_file(path);
	std::istringstream in(text);
	std::string line;
	int line_no = 0;
	std::vector<std::string> header;
	while (std::getline(in, line)) {
		++line_no;
		if (line.find_first_not_of(" \t\r") != std::string::npos) {
			header = split_csv_line(line);
			break;
		}
	}
	const std::string file = path.filename().string();
	if (header.empty()) {
		throw MissingSeriesError(file + ": empty series file");
	}
	std::map<std::string, std::size_t> index;
	for (std::size_t i = 0; i < header.size(); ++i) {
		index[header[i]] = i;
	}
	for (const auto& c : columns) {
		if (!index.contains(c)) {
			throw ParseError(file + ":" + std::to_string(line_no) + ": missing column '" + c + "'");
		}
	}

	std::vector<std::map<std::string, double>> rows;
	while (std::getline(in, line)) {
		++line_no;
		if (line.find_first_not_of(" \t\r") == std::string::npos) {
			continue;
		}
		const auto cells = split_csv_line(line);
		const std::string where = file + ":" + std::to_string(line_no);
		if (cells.size() != header.size()) {
			throw ParseError(where + ": expected " + std::to_string(header.size()) + " cells, found "
				+ std::to_string(cells.size()));
		}
		std::map<std::string, double> row;
		for (const auto& c : columns) {
			row[c] = parse_number(cells[index[c]], where + ": column '" + c + "'");
		}
		if (row["slot"] != static_cast<double>(rows.size())) {
			throw ParseError(where + ": slot " + cells[index["slot"]] + " out of sequence (expected "
				+ std::to_string(rows.size()) + ")");
		}
		rows.push_back(std::move(row));
	}
	return rows;
}

// ---- JSON fields -------------------------------------------------------------

class Reader {
public:
	Reader(std::string source, const std::string& text) : source_(std::move(source)), locator_(text) {}

	std::string where(const std::string& path) const {
		return source_ + ":" + std::to_string(locator_.line_of(path)) + ": " + (path.empty() ? "<root>" : path);
	}

	const json& required(const json& obj, const std::string& key, const std::string& path) const {
		if (!obj.is_object() || !obj.contains(key)) {
			throw ParseError(where(path) + ": missing required field '" + key + "'");
		}
		return obj.at(key);
	}

	template <class T>
	T get(const json& obj, const std::string& key, const std::string& path) const {
		const std::string field = join(path, key);
		return convert<T>(required(obj, key, path), field);
	}

	template <class T>
	T get_or(const json& obj, const std::string& key, const std::string& path, T fallback) const {
		if (!obj.is_object() || !obj.contains(key) || obj.at(key).is_null()) {
			return fallback;
		}
		return convert<T>(obj.at(key), join(path, key));
	}

	template <class T>
	T convert(const json& value, const std::string& field) const {
		try {
			if constexpr (std::is_same_v<T, int>) {
				if (!value.is_number_integer()) {
					throw ParseError(where(field) + ": expected an integer");
				}
			} else if constexpr (std::is_same_v<T, double>) {
				if (!value.is_number()) {
					throw ParseError(where(field) + ": expected a number");
				}
			} else if constexpr (std::is_same_v<T, bool>) {
				if (!value.is_boolean()) {
					throw ParseError(where(field) + ": expected true or false");
				}
			} else if constexpr (std::is_same_v<T, std::string>) {
				if (!value.is_string()) {
					throw ParseError(where(field) + ": expected a string");
				}
			}
			return value.get<T>();
		} catch (const json::exception& e) {
			throw ParseError(where(field) + ": " + e.what());
		}
	}

	static std::string join(const std::string& path, const std::string& key) {
		return path.empty() ? key : path + "." + key;
	}

private:
	std::string source_;
	JsonLocator locator_;
};

// Re-raises a component invariant failure with its location, keeping the
// error category.
template <class F>
void located(const Reader& reader, const std::string& path, F&& check) {
	try {
		check();
	} catch (const LengthMismatchError& e) {
		throw LengthMismatchError(reader.where(path) + ": " + e.what());
	} catch (const DegenerateLoadError& e) {
		throw DegenerateLoadError(reader.where(path) + ": " + e.what());
	} catch (const InvariantError& e) {
		throw InvariantError(reader.where(path) + ": " + e.what());
	} catch (const InfeasibleScheduleError& e) {
		throw InvariantError(reader.where(path) + ": " + e.what());
	}
}

Load read_load(const Reader& r, const json& j, const std::string& path) {
	Load load;
	load.id = r.get<std::string>(j, "id", path);
	load.arrival_slot = r.get<int>(j, "arrival_slot", path);
	load.duration_slots = r.get<int>(j, "duration_slots", path);
	load.packets_per_slot = r.get<int>(j, "packets_per_slot", path);
	load.packet_size_kwh = r.get<double>(j, "packet_size_kwh", path);
	load.max_delay_slots = r.get<int>(j, "max_delay_slots", path);
	load.min_delay = r.get_or<double>(j, "min_delay", path, 0.0);
	load.departure_slot = r.get_or<int>(j, "departure_slot", path, -1);
	load.max_avg_delay = r.get_or<double>(j, "max_avg_delay", path, 1.0);
	load.min_packets_per_slot = r.get_or<int>(j, "min_packets_per_slot", path, 0);
	load.max_packets_per_slot = r.get_or<int>(j, "max_packets_per_slot", path, load.packets_per_slot);
	return load;
}

BatterySpec read_battery(const Reader& r, const json& j, const std::string& path, BatteryState& initial) {
	BatterySpec b;
	b.capacity_min = r.get_or<double>(j, "capacity_min_kwh", path, 0.0);
	b.capacity_max = r.get<double>(j, "capacity_max_kwh", path);
	b.max_charge_per_slot = r.get<double>(j, "max_charge_kwh", path);
	b.max_discharge_per_slot = r.get<double>(j, "max_discharge_kwh", path);
	b.decay = r.get_or<double>(j, "decay", path, 1.0);
	b.eff_charge = r.get_or<double>(j, "eff_charge", path, 0.95);
	b.eff_discharge = r.get_or<double>(j, "eff_discharge", path, 0.95);
	b.rated_charge = r.get_or<double>(j, "rated_charge_kwh", path, b.max_charge_per_slot / 2.0);
	b.rated_discharge = r.get_or<double>(j, "rated_discharge_kwh", path, b.max_discharge_per_slot / 2.0);
	b.w0 = r.get_or<double>(j, "w0", path, 1.3);
	b.w1 = r.get_or<double>(j, "w1", path, 0.9);
	b.w2 = r.get_or<double>(j, "w2", path, 1.3);
	b.w3 = r.get_or<double>(j, "w3", path, 0.9);
	b.cost_scale = r.get_or<double>(j, "cost_scale_cents", path, 1.0);
	initial.stored = r.get_or<double>(j, "initial_kwh", path, b.capacity_min);
	return b;
}

std::vector<double> read_number_array(const Reader& r, const json& obj, const std::string& key,
	const std::string& path) {
	const std::string field = Reader::join(path, key);
	const json& arr = r.required(obj, key, path);
	if (!arr.is_array()) {
		throw ParseError(r.where(field) + ": expected an array of numbers");
	}
	std::vector<double> out;
	for (std::size_t i = 0; i < arr.size(); ++i) {
		out.push_back(r.convert<double>(arr[i], field + "[" + std::to_string(i) + "]"));
	}
	return out;
}

void check_length(std::size_t actual, int horizon, const std::string& what) {
	if (actual != static_cast<std::size_t>(horizon)) {
		throw LengthMismatchError(what + " has " + std::to_string(actual) + " rows, horizon is "
			+ std::to_string(horizon));
	}
}

} // namespace

std::vector<TariffSlot> read_tariff_csv(const fs::path& path) {
	std::vector<TariffSlot> out;
	for (auto& row : read_series_csv(path, {"slot", "utility_buy", "utility_sell", "ds_ratio"})) {
		out.push_back({row["utility_buy"], row["utility_sell"], row["ds_ratio"]});
	}
	return out;
}

std::vector<WeatherSlot> read_weather_csv(const fs::path& path) {
	std::vector<WeatherSlot> out;
	for (auto& row : read_series_csv(path, {"slot", "irradiance", "temperature"})) {
		out.push_back({row["irradiance"], row["temperature"]});
	}
	return out;
}

void validate_scenario(const Scenario& s) {
	if (s.horizon < 1) {
		throw InvariantError("horizon must be >= 1");
	}
	if (!(s.slot_hours > 0.0)) {
		throw InvariantError("slot_hours must be > 0");
	}
	check_length(s.tariff.size(), s.horizon, "tariff series");
	check_length(s.weather.size(), s.horizon, "weather series");
	std::set<std::string> ids;
	for (const auto& load : s.loads) {
		validate_load(load);
		start_window(load, s.horizon);
		if (!ids.insert(load.id).second) {
			throw InvariantError("duplicate load id '" + load.id + "'");
		}
	}
	for (std::size_t t = 0; t < s.tariff.size(); ++t) {
		try {
			validate_tariff(s.tariff[t]);
		} catch (const InvariantError& e) {
			throw InvariantError("tariff slot " + std::to_string(t) + ": " + e.what());
		}
	}
	for (std::size_t t = 0; t < s.weather.size(); ++t) {
		if (!(s.weather[t].irradiance >= 0.0)) {
			throw InvariantError("weather slot " + std::to_string(t) + ": irradiance must be >= 0");
		}
	}
	validate_pv(s.pv);
	validate_battery(s.battery);
	validate_battery_state(s.battery, s.initial_battery);
	if (!(s.delay.weight >= 0.0)) {
		throw InvariantError("delay cost weight must be >= 0");
	}
	if (!(s.feed_in_cap_kwh >= 0.0)) {
		throw InvariantError("feed_in_cap must be >= 0");
	}
	if (!(s.objective.penalty_weight >= 0.0)) {
		throw InvariantError("penalty_weight must be >= 0");
	}
	if (!(s.objective.min_battery_activity_kwh >= 0.0)) {
		throw InvariantError("min_battery_activity_kwh must be >= 0");
	}
	if (s.ds_ratio_mode == DsRatioMode::derived) {
		check_length(s.zone.supply_kwh.size(), s.horizon, "zone supply series");
		check_length(s.zone.demand_kwh.size(), s.horizon, "zone demand series");
		for (std::size_t t = 0; t < s.zone.supply_kwh.size(); ++t) {
			if (s.zone.supply_kwh[t] < 0.0 || s.zone.demand_kwh[t] < 0.0) {
				throw InvariantError("zone slot " + std::to_string(t) + ": supply and demand must be >= 0");
			}
		}
	}
}

Scenario parse_scenario(const std::string& text, const fs::path& base_dir, const std::string& source) {
	json doc;
	try {
		doc = json::parse(text);
	} catch (const json::parse_error& e) {
		throw ParseError(source + ": " + e.what());
	}
	if (!doc.is_object()) {
		throw ParseError(source + ": top level must be an object");
	}
	const Reader r(source, text);
	Scenario s;
	s.name = r.get_or<std::string>(doc, "name", "", "scenario");
	s.horizon = r.get<int>(doc, "horizon", "");
	s.slot_hours = r.get_or<double>(doc, "slot_hours", "", 1.0);
	s.feed_in_cap_kwh = r.get_or<double>(doc, "feed_in_cap_kwh", "", std::numeric_limits<double>::infinity());
	located(r, "horizon", [&] {
		if (s.horizon < 1) throw InvariantError("horizon must be >= 1");
	});

	// Series files.
	if (!doc.contains("series")) {
		throw MissingSeriesError(r.where("") + ": missing 'series' with tariff and weather files");
	}
	const json& series = doc.at("series");
	for (const char* key : {"tariff", "weather"}) {
		if (!series.is_object() || !series.contains(key)) {
			throw MissingSeriesError(r.where("series") + ": missing '" + key + "' series file");
		}
	}
	const fs::path tariff_path = base_dir / r.get<std::string>(series, "tariff", "series");
	const fs::path weather_path = base_dir / r.get<std::string>(series, "weather", "series");
	s.tariff = read_tariff_csv(tariff_path);
	s.weather = read_weather_csv(weather_path);
	located(r, "series.tariff", [&] { check_length(s.tariff.size(), s.horizon, tariff_path.filename().string()); });
	located(r, "series.weather", [&] { check_length(s.weather.size(), s.horizon, weather_path.filename().string()); });

	// PV.
	const json& pv = r.required(doc, "pv", "");
	s.pv.efficiency = r.get<double>(pv, "efficiency", "pv");
	s.pv.area_m2 = r.get<double>(pv, "area_m2", "pv");
	s.pv.max_output_kwh = r.get_or<double>(pv, "max_output_kwh", "pv", std::numeric_limits<double>::infinity());
	located(r, "pv", [&] { validate_pv(s.pv); });

	// Battery.
	s.battery = read_battery(r, r.required(doc, "battery", ""), "battery", s.initial_battery);
	located(r, "battery", [&] {
		validate_battery(s.battery);
		validate_battery_state(s.battery, s.initial_battery);
	});

	// Costs and objective flags.
	if (doc.contains("delay_cost")) {
		s.delay.weight = r.get_or<double>(doc.at("delay_cost"), "weight_cents", "delay_cost", s.delay.weight);
	}
	if (doc.contains("objective")) {
		const json& o = doc.at("objective");
		auto& obj = s.objective;
		obj.penalty_weight = r.get_or<double>(o, "penalty_weight", "objective", obj.penalty_weight);
		obj.literal_tx_sign = r.get_or<bool>(o, "literal_tx_sign", "objective", obj.literal_tx_sign);
		obj.swap_transaction_prices =
			r.get_or<bool>(o, "swap_transaction_prices", "objective", obj.swap_transaction_prices);
		if (o.contains("grid_charge_threshold") && !o.at("grid_charge_threshold").is_null()) {
			obj.grid_charge_threshold = r.get<double>(o, "grid_charge_threshold", "objective");
		}
		obj.min_battery_activity_kwh =
			r.get_or<double>(o, "min_battery_activity_kwh", "objective", obj.min_battery_activity_kwh);
	}

	// Demand/supply ratio source.
	if (doc.contains("ds_ratio")) {
		const json& d = doc.at("ds_ratio");
		const auto mode = r.get<std::string>(d, "mode", "ds_ratio");
		if (mode == "derived") {
			s.ds_ratio_mode = DsRatioMode::derived;
			s.zone.supply_kwh = read_number_array(r, d, "zone_supply_kwh", "ds_ratio");
			s.zone.demand_kwh = read_number_array(r, d, "zone_demand_kwh", "ds_ratio");
			located(r, "ds_ratio", [&] {
				check_length(s.zone.supply_kwh.size(), s.horizon, "ds_ratio.zone_supply_kwh");
				check_length(s.zone.demand_kwh.size(), s.horizon, "ds_ratio.zone_demand_kwh");
			});
		} else if (mode != "exogenous") {
			throw ParseError(r.where("ds_ratio.mode") + ": expected 'exogenous' or 'derived'");
		}
	}

	// Loads.
	const json& loads = r.required(doc, "loads", "");
	if (!loads.is_array()) {
		throw ParseError(r.where("loads") + ": expected an array");
	}
	for (std::size_t i = 0; i < loads.size(); ++i) {
		const std::string path = "loads[" + std::to_string(i) + "]";
		Load load = read_load(r, loads[i], path);
		located(r, path + ".max_delay_slots", [&] {
			if (load.max_delay_slots <= load.duration_slots) {
				validate_load(load);
			}
		});
		located(r, path, [&] {
			validate_load(load);
			start_window(load, s.horizon);
		});
		s.loads.push_back(std::move(load));
	}

	try {
		validate_scenario(s);
	} catch (const LengthMismatchError&) {
		throw;
	} catch (const DegenerateLoadError& e) {
		throw DegenerateLoadError(source + ": " + e.what());
	} catch (const InvariantError& e) {
		throw InvariantError(source + ": " + e.what());
	}
	return s;
}

Scenario load_scenario(const fs::path& path) {
	if (!fs::is_regular_file(path)) {
		throw ValidationError("scenario file " + path.string() + " does not exist");
	}
	const std::string text = read_file(path);
	return parse_scenario(text, path.parent_path(), path.filename().string());
}

} // namespace pemc
