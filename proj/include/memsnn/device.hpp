#pragma once
#include <cstdint>
#include <random>

namespace memsnn {

// Voltage-controlled threshold memristor.
//   R(w) = R_on*(w/D) + R_off*(1 - w/D)
//   dw/dt = mu_v*(R_on/D)*(i_off/(i - i_0))*f(w)   v >  V_T_pos
//         = 0                                       V_T_neg <= v <= V_T_pos
//         = mu_v*(R_on/D)*(i/i_on)*f(w)             v <  V_T_neg
//   f(w) = 1 - (2w/D - 1)^(2p)
// State integrates with explicit Euler on the caller's timestep; w is kept
// in [delta, D - delta] so f(w) never pins the state exactly at a boundary.
struct MemristorParams {
  double D = 3e-9;           // m
  double mu_v = 3.2e-15;     // m^2 s^-1 Ohm^-1
  double R_on = 1e6;         // Ohm
  double R_off = 6e7;        // Ohm
  double V_T_pos = 1.2;      // V
  double V_T_neg = -2.4;     // V
  double i_on = 1.0;         // A
  double i_off = 1.4e-14;    // A
  double i_0 = 3e-8;         // A
  int p = 1;                 // window exponent
  double delta_frac = 1e-3;  // boundary margin as a fraction of D

  double delta() const { return delta_frac * D; }
  double w_min() const { return delta(); }
  double w_max() const { return D - delta(); }
  double G_min() const { return 1.0 / R_off; }
  double G_max() const { return 1.0 / R_on; }
  void validate() const;  // throws std::invalid_argument
};

struct MemristorState {
  double w = 0.0;      // internal doped width, m
  bool stuck = false;  // stuck-at device: state never changes
};

// f(w); caller keeps w within [0, D].
double window_fn(double w, const MemristorParams& p);

double memristance(const MemristorState& s, const MemristorParams& p);
double conductance(const MemristorState& s, const MemristorParams& p);

// One explicit Euler step under applied voltage v for duration dt.
// Rejects non-finite v and dt <= 0. Stuck devices are returned unchanged.
MemristorState step_device(const MemristorState& s, double v, double dt,
                           const MemristorParams& p);

// Per-device parameter dispersion: R_on, R_off multiplied by
// (1 + N(0, dispersion_R)); V_T_pos, V_T_neg by (1 + N(0, dispersion_Vt)).
// Draws violating 0 < R_on < R_off or V_T_neg < 0 < V_T_pos are resampled.
MemristorParams perturb_params(const MemristorParams& nominal,
                               double dispersion_R, double dispersion_Vt,
                               std::mt19937_64& rng);

}  // namespace memsnn
