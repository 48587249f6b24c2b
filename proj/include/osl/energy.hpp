#pragma once

namespace osl {

// Power constants default to measured DJI Matrice 100 values (kJ, s).
// The compute and radio constants have no measured reference; the defaults
// model a 1 GHz core and a 0.1 W, 1 Mbit/s link.
struct EnergyParams {
  double flying_power = 0.663;    // P_f, kJ/s
  double hover_power = 0.47;      // P_h, kJ/s
  double turn_energy = 3.415;     // e_b, kJ per turn
  double hover_duration = 1.0;    // t_h, s per hover point
  double capacitance = 1e-28;     // gamma_c
  double cycles_per_bit = 1000.0; // C
  double cpu_frequency = 1e9;     // f_c, cycles/s
  double transmit_power = 1e-4;   // P_T, kJ/s
  double transmit_rate = 1e6;     // r_T, bits/s
  double budget = 1200.0;         // E_max, kJ

  void validate() const;
};

struct EnergyBreakdown {
  double flight = 0.0;
  double hover = 0.0;
  double turn = 0.0;
  double compute = 0.0;
  double comm = 0.0;

  double movement() const { return flight + hover + turn; }
  double total() const { return flight + hover + turn + compute + comm; }
};

struct BudgetStatus {
  double total = 0.0;
  bool exhausted = false;
};

// Event counters for one agent. Energies are derived on demand, so the
// breakdown never drifts from the counters.
class EnergyLedger {
 public:
  void record_flight(double distance, double speed);
  void record_hover() { ++hover_points_; }
  void record_turn() { ++turn_points_; }
  void record_compute(double bits);
  void record_comm(double bits);

  // Adds every counter of `other` into this ledger.
  void merge(const EnergyLedger& other);

  double fly_distance() const { return fly_distance_; }
  double fly_time() const { return fly_time_; }
  long hover_points() const { return hover_points_; }
  long turn_points() const { return turn_points_; }
  double comp_bits() const { return comp_bits_; }
  double comm_bits() const { return comm_bits_; }

  EnergyBreakdown breakdown(const EnergyParams& params) const;

 private:
  double fly_distance_ = 0.0;
  double fly_time_ = 0.0;  // sum of distance / speed
  long hover_points_ = 0;
  long turn_points_ = 0;
  double comp_bits_ = 0.0;
  double comm_bits_ = 0.0;
};

BudgetStatus total_and_budget(const EnergyLedger& ledger,
                              const EnergyParams& params);

}  // namespace osl
