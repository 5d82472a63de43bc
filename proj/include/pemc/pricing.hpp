#pragma once

#include <span>
#include <vector>

#include "pemc/load_model.hpp"
#include "pemc/schedule.hpp"

namespace pemc {

// Utility prices for one slot plus the sharing zone's demand/supply ratio.
// Prices are cents/kWh.
struct TariffSlot {
	double utility_buy = 0.0;
	double utility_sell = 0.0;
	double ds_ratio = 0.0;
};

void validate_tariff(const TariffSlot& slot);

// Price at which the service provider sells packets to the home.
double internal_sell_price(const TariffSlot& slot);

// Price at which the service provider buys packets from the home.
double internal_buy_price(const TariffSlot& slot, double p_sell);

struct InternalPrices {
	double sell = 0.0;
	double buy = 0.0;
};

InternalPrices internal_prices(const TariffSlot& slot);

// Demand/supply ratio of a sharing zone from offered surplus and requested
// deficit. A slot with no deficit reports 1 (surplus regime).
double derived_ds_ratio(double surplus_kwh, double deficit_kwh);

struct TransactionRecord {
	int slot = 0;
	double bought_kwh = 0.0;
	double sold_kwh = 0.0;
	double buy_cost_cents = 0.0;
	double sell_revenue_cents = 0.0;
};

// Energy exchanged with the provider in one slot. A deficit is charged at
// prices.sell and a surplus credited at prices.buy; swap_prices exchanges the
// two roles.
TransactionRecord slot_transaction(double load_kwh, double pv_kwh, double storage_kwh,
	const InternalPrices& prices, bool swap_prices = false, int slot = 0);

// (1/T0) * sum(sell_revenue - buy_cost).
double average_transaction_cost(std::span<const TransactionRecord> records, int horizon);

struct ConstraintViolation {
	int load = 0;
	int slot = 0;
	double amount = 0.0;
};

struct ViolationReport {
	// |scheduled energy - declared demand|, kWh.
	double demand_gap = 0.0;
	// Scheduled per-slot energy outside [min_packets, max_packets] * packet size.
	std::vector<ConstraintViolation> bound_violations;
	// Declared minus scheduled slot energy beyond the feed-in cap.
	std::vector<ConstraintViolation> cap_violations;

	bool feasible() const { return demand_gap == 0.0 && bound_violations.empty() && cap_violations.empty(); }
	double total_magnitude() const;
};

// Declared slot energy is the immediate-start profile of each load.
ViolationReport validate_schedule_constraints(const ScheduleMatrix& schedule, std::span<const Load> loads,
	double feed_in_cap_kwh);

} // namespace pemc
