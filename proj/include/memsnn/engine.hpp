#pragma once
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "memsnn/circuit.hpp"
#include "memsnn/encoder.hpp"
#include "memsnn/metrics.hpp"

namespace memsnn {

// Peripheral component values. All four control blocks share the 5 V rail
// and half-rail inverter switching voltage; the spike trigger sits at the
// pulse peak so a row event registers exactly once.
struct CircuitConfig {
  double v_supply = 5.0;
  double v_switch = 2.5;
  double R_inh = 1e3, C_inh = 1.5e-6;  // lateral inhibition timer
  double R_e = 1e3, C_e = 1.7e-6;      // per-column synaptic control
  double R_w = 1e3, C_w = 1.5e-6;      // per-row drive control
  double R_u = 1e3, C_u = 1.5e-6;      // per-row update control
  double spike_trigger = 1.1;          // V, S_w / S_u switch threshold
  UccParams ucc;
};

struct NetworkConfig {
  size_t n = 0, m = 0;      // rows (pre), columns (post)
  double T = 1e-3;          // encoding window, s
  double dt = 5e-7;         // global timestep, s
  double C_m = 5e-6;        // LIF membrane capacitance, F
  double R_leak = 5e4;      // LIF leak, Ohm
  double v_th = 1e-3;       // LIF threshold, V
  double I_b = 35e-6;       // training bias current, A
  double col_gain = 1.0;    // read-out gain, calibrated per task
  double R0 = 0, R1 = 0, R2 = 0;  // column read-out resistors, provenance only
  int epochs = 1;
  uint64_t seed = 1;
  double sample_duration = 0.0;  // s; 0 -> T + 2 * refractory width
  MemristorParams device;
  SpikeShape spike;
  CircuitConfig circuit;

  void validate() const;  // throws std::invalid_argument
};

struct Network {
  NetworkConfig cfg;
  Crossbar xb;
  std::vector<LifState> lif;   // m
  RcLatch lic;
  std::vector<RcLatch> scc;    // m
  std::vector<RcLatch> dcc;    // n
  std::vector<RcLatch> ucc;    // n
  uint64_t wta_ties = 0;       // same-step threshold crossings
  uint64_t ucc_ties = 0;       // equal comparator voltages at an applied update

  double refractory_width() const { return lic.pulse_width(); }
  double sample_duration() const {
    return cfg.sample_duration > 0.0 ? cfg.sample_duration
                                     : cfg.T + 2.0 * refractory_width();
  }
  void reset_transient();  // recharge latches, rest membranes, all columns on
};

Network make_network(const NetworkConfig& cfg);

enum class InitMode { SUPERVISED, UNSUPERVISED };

// SUPERVISED: every device at w_max (highest conductance).
// UNSUPERVISED: w uniform in [0.9 * w_max, w_max].
void init_weights(Network& net, InitMode mode, std::mt19937_64& rng);

struct PresentOptions {
  bool learning = false;
  int label = -1;              // >= 0: bias current into this column
  std::ostream* trace = nullptr;  // per-step CSV rows, disables early exit
};

struct PresentationResult {
  int winner = -1;           // first column to spike, -1 = none
  double spike_time = -1.0;  // s
  bool tie = false;          // winner chosen by lowest index this step
  std::vector<double> delta_G;  // m*n, [j*n + i], Siemens
  double mean_abs_dG() const;
};

// Run one sample through the network. Bias (when label >= 0) integrates
// whenever inhibition is not asserted, so after the refractory interval the
// labeled column recharges and can fire again within the same presentation.
// Devices are stepped only when learning.
PresentationResult present_sample(Network& net, const SpikeTrain& train,
                                  const PresentOptions& opts);

struct Sample {
  SpikeTrain train;
  int label = -1;
};

struct EpochLog {
  int epoch = 0;
  double train_accuracy = 0.0;  // winner == label during learning
  double mean_abs_dG = 0.0;     // Siemens, averaged over devices and samples
};

// Supervised in-situ training: each epoch presents every sample once, in
// order, with learning enabled and bias to the labeled column. Pass
// supervised = false to drop the bias (labels are still logged).
std::vector<EpochLog> train(Network& net, const std::vector<Sample>& data,
                            bool supervised = true);

// Inference pass: no bias, no updates. Winner-less samples count as errors.
Metrics test(Network& net, const std::vector<Sample>& data);

// Binary-search col_gain until the median first-spike time over a
// subsample falls in [lo_frac * T, hi_frac * T]. Probes run without bias
// (supervised-initialized weights, pure read-out response) so the median
// is monotone in the gain. Throws std::runtime_error when the search
// cannot land in the window.
double calibrate_col_gain(const NetworkConfig& cfg,
                          const std::vector<Sample>& data,
                          double lo_frac = 0.25, double hi_frac = 0.9);

// Serialized trained model: network parameters, preprocessing constants
// and the full weight matrix. JSON round-trips bit-exactly.
struct Model {
  NetworkConfig net;
  std::string kind;  // "pattern" | "classification"
  GrfConfig grf;                      // classification
  std::vector<double> mins, maxs;     // classification scaling
  size_t grid_rows = 0, grid_cols = 0;  // pattern
  double pattern_lead = 5e-4;           // pattern
  std::vector<double> w;       // n*m, row-major
  std::vector<uint8_t> stuck;  // n*m
  bool perturbed = false;
  std::vector<MemristorParams> per_device;  // n*m when perturbed
  std::vector<EpochLog> log;
};

Model snapshot_model(const Network& net);          // weights + network config
void restore_weights(Network& net, const Model& m);  // w, stuck, per-device params
std::string model_to_json(const Model& m);
Model model_from_json(const std::string& text);
void save_model(const Model& m, const std::string& path);
Model load_model(const std::string& path);

}  // namespace memsnn
