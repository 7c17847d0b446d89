#pragma once
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "memsnn/dataset.hpp"
#include "memsnn/engine.hpp"

namespace memsnn {

// Run fn(0..count-1) on up to `jobs` threads. Tasks must be independent;
// results keyed by index stay deterministic regardless of scheduling.
// The first exception is rethrown after all workers drain.
void parallel_for(size_t count, int jobs, const std::function<void(size_t)>& fn);

// One spike-encoded sample per pattern, ordered by label (the supervised
// round-robin presentation order).
std::vector<Sample> encode_pattern_set(const PatternSet& set, double lead,
                                       const SpikeShape& shape, double T);

// Train a fresh network on the pattern set and package the result.
Model train_pattern_model(const NetworkConfig& cfg, const PatternSet& set,
                          double lead);

// Per-feature min/max over the selected rows.
void fit_minmax(const TabularData& data, const std::vector<size_t>& idx,
                std::vector<double>* mins, std::vector<double>* maxs);

// Scale, expand through the receptive fields, and temporally encode the
// selected rows.
std::vector<Sample> encode_tabular(const TabularData& data,
                                   const std::vector<size_t>& idx,
                                   const std::vector<double>& mins,
                                   const std::vector<double>& maxs,
                                   const GrfConfig& grf,
                                   const SpikeShape& shape, double T);

struct ClassificationResult {
  Metrics train_metrics;
  Metrics test_metrics;
  Model model;
};

// Stratified split, min-max + receptive-field encoding fitted on the
// training split, supervised training, then a no-bias pass over both splits.
ClassificationResult run_classification(const NetworkConfig& cfg,
                                        const GrfConfig& grf,
                                        const TabularData& data,
                                        double train_fraction,
                                        uint64_t split_seed);

// Mark round(fraction * n * m) distinct devices stuck, each frozen at a
// uniform random w. Stuck devices never change state again.
void inject_stuck(Network& net, double fraction, std::mt19937_64& rng);

struct SweepPoint {
  double level = 0.0;
  double mean = 0.0;    // mean accuracy over trials
  double stddev = 0.0;  // sample standard deviation, 0 when trials < 2
  size_t trials = 0;
};

// Pixel-flip robustness of a trained pattern model: per trial, every
// pattern gets round(level * pixels) flipped pixels and the noisy set is
// classified. Training inputs stay clean.
std::vector<SweepPoint> run_noise_sweep(const Model& trained,
                                        const PatternSet& set,
                                        const std::vector<double>& levels,
                                        size_t trials, uint64_t seed,
                                        int jobs);

enum class FaultKind { STUCK, VAR_R, VAR_VT };

// Retrain-from-scratch fault study: per level and repeat, a fresh network
// is faulted (stuck devices, or R / threshold dispersion), trained, and
// scored on the held-out split.
std::vector<SweepPoint> run_fault_campaign(
    FaultKind kind, const std::vector<double>& levels, size_t repeats,
    const NetworkConfig& cfg, const GrfConfig& grf, const TabularData& data,
    double train_fraction, uint64_t split_seed, uint64_t seed, int jobs);

struct HeatmapFiles {
  std::string csv;
  std::vector<std::string> pgms;  // one per column for pattern models
};

// Write per-column conductances (micro-ohm^-1) as CSV; pattern models also
// get one PGM image per column, gray levels linear in [G_min, G_max].
HeatmapFiles export_heatmap(const Model& mdl, const std::string& out_prefix);

}  // namespace memsnn
