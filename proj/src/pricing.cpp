#include "pemc/pricing.hpp"

#include <cmath>
#include <string>

#include "pemc/errors.hpp"

namespace pemc {

namespace {

constexpr double kGapTolerance = 1e-9;

bool in_interpolation_regime(double ratio) {
	return ratio >= 0.0 && ratio <= 1.0;
}

} // namespace

void validate_tariff(const TariffSlot& slot) {
	if (!(slot.utility_sell > 0.0)) {
		throw InvariantError("utility_sell must be > 0");
	}
	if (!(slot.utility_sell <= slot.utility_buy)) {
		throw InvariantError("utility_sell must not exceed utility_buy");
	}
	if (!(slot.ds_ratio >= 0.0)) {
		throw InvariantError("ds_ratio must be >= 0");
	}
}

double internal_sell_price(const TariffSlot& slot) {
	if (!in_interpolation_regime(slot.ds_ratio)) {
		return slot.utility_sell;
	}
	const double q_buy = slot.utility_buy;
	const double q_sell = slot.utility_sell;
	return q_sell * q_buy / ((q_buy - q_sell) * slot.ds_ratio + q_sell);
}

double internal_buy_price(const TariffSlot& slot, double p_sell) {
	if (!in_interpolation_regime(slot.ds_ratio)) {
		return slot.utility_sell;
	}
	return p_sell * slot.ds_ratio + slot.utility_buy * (1.0 - slot.ds_ratio);
}

InternalPrices internal_prices(const TariffSlot& slot) {
	const double sell = internal_sell_price(slot);
	return {sell, internal_buy_price(slot, sell)};
}

double derived_ds_ratio(double surplus_kwh, double deficit_kwh) {
	if (deficit_kwh <= 0.0) {
		return 1.0;
	}
	return surplus_kwh / deficit_kwh;
}

TransactionRecord slot_transaction(double load_kwh, double pv_kwh, double storage_kwh,
	const InternalPrices& prices, bool swap_prices, int slot) {
	if (load_kwh < 0.0 || pv_kwh < 0.0 || storage_kwh < 0.0) {
		throw ValidationError("slot " + std::to_string(slot) + ": transaction energies must be non-negative");
	}
	const double deficit_price = swap_prices ? prices.buy : prices.sell;
	const double surplus_price = swap_prices ? prices.sell : prices.buy;

	TransactionRecord record;
	record.slot = slot;
	const double supply = pv_kwh + storage_kwh;
	if (load_kwh > supply) {
		record.bought_kwh = load_kwh - supply;
		record.buy_cost_cents = deficit_price * record.bought_kwh;
	} else if (supply > load_kwh) {
		record.sold_kwh = supply - load_kwh;
		record.sell_revenue_cents = surplus_price * record.sold_kwh;
	}
	return record;
}

double average_transaction_cost(std::span<const TransactionRecord> records, int horizon) {
	if (horizon < 1) {
		throw ValidationError("average_transaction_cost: horizon must be >= 1");
	}
	double net = 0.0;
	for (const auto& r : records) {
		net += r.sell_revenue_cents - r.buy_cost_cents;
	}
	return net / horizon;
}

double ViolationReport::total_magnitude() const {
	double total = demand_gap;
	for (const auto& v : bound_violations) {
		total += v.amount;
	}
	for (const auto& v : cap_violations) {
		total += v.amount;
	}
	return total;
}

ViolationReport validate_schedule_constraints(const ScheduleMatrix& schedule, std::span<const Load> loads,
	double feed_in_cap_kwh) {
	if (static_cast<std::size_t>(schedule.load_count()) != loads.size()) {
		throw ValidationError("schedule has " + std::to_string(schedule.load_count()) + " rows for "
			+ std::to_string(loads.size()) + " loads");
	}
	const int horizon = schedule.horizon();
	ViolationReport report;
	double scheduled_total = 0.0;

	for (std::size_t i = 0; i < loads.size(); ++i) {
		const Load& load = loads[i];
		const int row = static_cast<int>(i);
		const double slot_energy = load.slot_energy_kwh();
		const double lower = load.min_packets_per_slot * load.packet_size_kwh;
		const double upper = load.max_packets_per_slot * load.packet_size_kwh;
		const int declared_end = load.arrival_slot + load.duration_slots;

		for (int t = 0; t < horizon; ++t) {
			const double scheduled = schedule.on(row, t) ? slot_energy : 0.0;
			scheduled_total += scheduled;
			if (schedule.on(row, t)) {
				if (scheduled < lower - kGapTolerance) {
					report.bound_violations.push_back({row, t, lower - scheduled});
				} else if (scheduled > upper + kGapTolerance) {
					report.bound_violations.push_back({row, t, scheduled - upper});
				}
			}
			const double declared = (t >= load.arrival_slot && t < declared_end) ? slot_energy : 0.0;
			const double excess = declared - scheduled - feed_in_cap_kwh;
			if (excess > kGapTolerance) {
				report.cap_violations.push_back({row, t, excess});
			}
		}
	}

	const double gap = std::abs(scheduled_total - total_packet_demand(loads, horizon));
	report.demand_gap = gap > kGapTolerance ? gap : 0.0;
	return report;
}

} // namespace pemc
