#pragma once
#include <cstdint>
#include <vector>

#include "memsnn/device.hpp"

namespace memsnn {

// Edge-triggered RC timer used by all four control blocks: a trigger event
// shorts the capacitor to ground, after which it recharges toward v_src
// through R. The digital output is high while v_c sits below the inverter
// switching voltage, giving a pulse of width tau*ln(v_src/(v_src - v_switch)).
struct RcLatch {
  double v_c = 5.0;       // capacitor voltage, V
  double v_src = 5.0;     // recharge supply, V
  double R = 1e3;         // Ohm
  double C = 1.5e-6;      // F
  double v_switch = 2.5;  // inverter switching voltage, V

  void reset() { v_c = v_src; }
  void trigger() { v_c = 0.0; }
  void relax(double dt) { v_c += dt * (v_src - v_c) / (R * C); }
  bool output_high() const { return v_c < v_switch; }
  double pulse_width() const;  // closed form, s
};

// Leaky integrate-and-fire post-neuron.
struct LifState {
  double v_m = 0.0;    // membrane potential, V
  double C_m = 5e-6;   // F
  double R_leak = 5e4; // Ohm
  double v_rest = 0.0; // V
  double v_th = 1e-3;  // V
};

// Integrate one step; returns true on a threshold crossing (v_m resets).
// While inhibited the membrane is clamped to v_rest and cannot fire.
bool lif_step(LifState& s, double I_in, double I_bias, bool inhibited, double dt);

enum class RowMode : uint8_t { SPIKE, UPDATE };

// 1T1M crossbar: n rows x m columns, device (i, j) at row i, column j.
// Column select transistors gate everything: a device in an inactive
// column carries no current and never changes state.
struct Crossbar {
  size_t n = 0, m = 0;
  double col_gain = 1.0;  // lumped read-out transimpedance, A per (V*S)
  std::vector<MemristorState> dev;      // n*m, row-major
  std::vector<MemristorParams> par;     // n*m, per-device (variation studies)
  std::vector<uint8_t> col_active;      // m
  std::vector<RowMode> row_mode;        // n

  Crossbar() = default;
  Crossbar(size_t n_, size_t m_, const MemristorParams& nominal);
  size_t at(size_t i, size_t j) const { return i * m + j; }
  double G(size_t i, size_t j) const { return conductance(dev[at(i, j)], par[at(i, j)]); }
};

// Column read-out currents: I_j = col_gain * sum_i v_i * G(i, j) over rows
// in SPIKE mode; UPDATE-mode rows contribute nothing, inactive columns
// read exactly zero.
std::vector<double> crossbar_currents(const Crossbar& xb,
                                      const std::vector<double>& row_voltages);

// Lateral inhibition: any post-spike discharges the timer; the inverted
// capacitor voltage is the shared inhibition line.
struct LicOutput {
  bool inh_high = false;
  double v_c_inh = 5.0;
};
LicOutput lic_step(RcLatch& lic, bool any_post_spike, double dt);

// Synaptic control (per column): v_e = post_latched OR NOT inh. Only the
// winner's column stays selected during the inhibition pulse.
bool scc_step(RcLatch& scc, bool post_spike, bool inh_high, double dt);

// Drive control (per row): v_sbar = NOT(pre_latched AND inh). While v_sbar
// is low the row's dual switch routes the update voltage instead of the
// spike input.
bool dcc_step(RcLatch& dcc, bool pre_event, bool inh_high, double dt);

// Update control (per row): the pre-event discharges C_u; comparing its
// recharge against the inhibition timer recovers spike order. Equal
// voltages (simultaneous discharge) take the negative rail.
struct UccParams {
  double v_plus = 1.4;    // V, potentiating rail
  double v_minus = -2.6;  // V, depressing rail
};
double ucc_output(double v_c_u, double v_c_inh, const UccParams& p,
                  bool* tie = nullptr);

// Step every device in an active column: UPDATE rows apply their update
// voltage, SPIKE rows apply the instantaneous row waveform (sub-threshold
// for nominal devices, not necessarily under parameter dispersion).
void crossbar_apply_update(Crossbar& xb, const std::vector<double>& row_update_v,
                           const std::vector<double>& row_spike_v, double dt);

}  // namespace memsnn
