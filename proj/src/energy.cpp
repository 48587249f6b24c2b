#include "osl/energy.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace osl {

void EnergyParams::validate() const {
  const std::pair<double, const char*> fields[] = {
      {flying_power, "flying_power"},   {hover_power, "hover_power"},
      {turn_energy, "turn_energy"},     {hover_duration, "hover_duration"},
      {capacitance, "capacitance"},     {cycles_per_bit, "cycles_per_bit"},
      {cpu_frequency, "cpu_frequency"}, {transmit_power, "transmit_power"},
      {transmit_rate, "transmit_rate"}, {budget, "energy_budget"},
  };
  for (const auto& [value, name] : fields) {
    if (!(value > 0.0) || !std::isfinite(value)) {
      throw std::invalid_argument(std::string(name) + " must be positive");
    }
  }
}

void EnergyLedger::record_flight(double distance, double speed) {
  if (!(speed > 0.0)) throw std::invalid_argument("flight speed must be positive");
  if (!(distance >= 0.0)) throw std::invalid_argument("flight distance must be non-negative");
  fly_distance_ += distance;
  fly_time_ += distance / speed;
}

void EnergyLedger::record_compute(double bits) {
  if (!(bits >= 0.0)) throw std::invalid_argument("bit count must be non-negative");
  comp_bits_ += bits;
}

void EnergyLedger::record_comm(double bits) {
  if (!(bits >= 0.0)) throw std::invalid_argument("bit count must be non-negative");
  comm_bits_ += bits;
}

void EnergyLedger::merge(const EnergyLedger& other) {
  fly_distance_ += other.fly_distance_;
  fly_time_ += other.fly_time_;
  hover_points_ += other.hover_points_;
  turn_points_ += other.turn_points_;
  comp_bits_ += other.comp_bits_;
  comm_bits_ += other.comm_bits_;
}

EnergyBreakdown EnergyLedger::breakdown(const EnergyParams& p) const {
  EnergyBreakdown e;
  e.flight = p.flying_power * fly_time_;
  e.hover = p.hover_power * static_cast<double>(hover_points_) * p.hover_duration;
  e.turn = static_cast<double>(turn_points_) * p.turn_energy;
  e.compute = p.capacitance * p.cycles_per_bit * p.cpu_frequency *
              p.cpu_frequency * comp_bits_;
  e.comm = p.transmit_power * comm_bits_ / p.transmit_rate;
  return e;
}

BudgetStatus total_and_budget(const EnergyLedger& ledger,
                              const EnergyParams& params) {
  const double total = ledger.breakdown(params).total();
  return {total, total > params.budget};
}

}  // namespace osl
