#include "memsnn/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <mutex>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "memsnn/rng.hpp"

namespace memsnn {

Metrics compute_metrics(const std::vector<int>& labels,
                        const std::vector<int>& preds, size_t m,
                        uint64_t ties) {
  if (labels.size() != preds.size())
    throw std::invalid_argument("metrics: label/prediction size mismatch");
  if (labels.empty()) throw std::invalid_argument("metrics: empty input");
  Metrics mt;
  mt.total = labels.size();
  mt.ties = ties;
  mt.confusion.assign(m * m, 0);
  std::vector<uint64_t> truth_count(m, 0);
  size_t correct = 0;
  for (size_t i = 0; i < labels.size(); ++i) {
    const int t = labels[i];
    if (t < 0 || t >= static_cast<int>(m))
      throw std::invalid_argument("metrics: label out of range");
    ++truth_count[static_cast<size_t>(t)];
    const int p = preds[i];
    if (p < 0) {
      ++mt.no_spike;
      continue;
    }
    if (p >= static_cast<int>(m))
      throw std::invalid_argument("metrics: prediction out of range");
    ++mt.confusion[static_cast<size_t>(t) * m + static_cast<size_t>(p)];
    if (p == t) ++correct;
  }
  mt.accuracy = static_cast<double>(correct) / static_cast<double>(mt.total);
  mt.f1.assign(m, 0.0);
  double f1_sum = 0.0;
  for (size_t c = 0; c < m; ++c) {
    const uint64_t tp = mt.confusion[c * m + c];
    uint64_t fp = 0;
    for (size_t t = 0; t < m; ++t)
      if (t != c) fp += mt.confusion[t * m + c];
    const uint64_t fn = truth_count[c] - tp;
    if (truth_count[c] == 0 && tp + fp == 0) {
      std::cerr << "warning: class " << c
                << " absent from truth and predictions, F1 set to 0\n";
    }
    const double denom = static_cast<double>(2 * tp + fp + fn);
    mt.f1[c] = denom > 0.0 ? 2.0 * static_cast<double>(tp) / denom : 0.0;
    f1_sum += mt.f1[c];
  }
  mt.macro_f1 = f1_sum / static_cast<double>(m);
  return mt;
}

void parallel_for(size_t count, int jobs,
                  const std::function<void(size_t)>& fn) {
  if (jobs <= 1 || count <= 1) {
    for (size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<size_t> next{0};
  std::exception_ptr err;
  std::mutex err_mu;
  const size_t workers = std::min<size_t>(static_cast<size_t>(jobs), count);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const size_t i = next.fetch_add(1);
        if (i >= count) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lk(err_mu);
          if (!err) err = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);
}

std::vector<Sample> encode_pattern_set(const PatternSet& set, double lead,
                                       const SpikeShape& shape, double T) {
  std::vector<Sample> out;
  out.reserve(set.patterns.size());
  for (const Pattern& p : set.patterns)
    out.push_back({encode_pattern(p.bits, lead, 0.0, shape, T), p.label});
  std::sort(out.begin(), out.end(),
            [](const Sample& a, const Sample& b) { return a.label < b.label; });
  return out;
}

Model train_pattern_model(const NetworkConfig& cfg, const PatternSet& set,
                          double lead) {
  if (cfg.n != set.rows * set.cols)
    throw std::invalid_argument("pattern: network rows != grid pixels");
  const std::vector<Sample> samples =
      encode_pattern_set(set, lead, cfg.spike, cfg.T);
  Network net = make_network(cfg);
  std::mt19937_64 rng = derive_stream(cfg.seed, "init");
  init_weights(net, cfg.I_b > 0 ? InitMode::SUPERVISED : InitMode::UNSUPERVISED,
               rng);
  const std::vector<EpochLog> log = train(net, samples, cfg.I_b > 0);
  Model mdl = snapshot_model(net);
  mdl.kind = "pattern";
  mdl.grid_rows = set.rows;
  mdl.grid_cols = set.cols;
  mdl.pattern_lead = lead;
  mdl.log = log;
  return mdl;
}

std::vector<Sample> encode_tabular(const TabularData& data,
                                   const std::vector<size_t>& idx,
                                   const std::vector<double>& mins,
                                   const std::vector<double>& maxs,
                                   const GrfConfig& grf, const SpikeShape& shape,
                                   double T) {
  std::vector<Sample> out;
  out.reserve(idx.size());
  for (size_t i : idx) {
    const std::vector<double> scaled = minmax_scale(data.x[i], mins, maxs, T);
    const std::vector<double> resp = grf_expand(scaled, grf, T);
    out.push_back({encode_temporal(resp, shape, T), data.y[i]});
  }
  return out;
}

void fit_minmax(const TabularData& data, const std::vector<size_t>& idx,
                std::vector<double>* mins, std::vector<double>* maxs) {
  if (idx.empty()) throw std::invalid_argument("fit_minmax: no rows selected");
  const size_t f = data.features();
  mins->assign(f, std::numeric_limits<double>::infinity());
  maxs->assign(f, -std::numeric_limits<double>::infinity());
  for (size_t i : idx) {
    for (size_t c = 0; c < f; ++c) {
      (*mins)[c] = std::min((*mins)[c], data.x[i][c]);
      (*maxs)[c] = std::max((*maxs)[c], data.x[i][c]);
    }
  }
}

namespace {

double sample_stddev(const std::vector<double>& v, double mean) {
  if (v.size() < 2) return 0.0;
  double s = 0.0;
  for (double x : v) s += (x - mean) * (x - mean);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

}  // namespace

ClassificationResult run_classification(const NetworkConfig& cfg,
                                        const GrfConfig& grf,
                                        const TabularData& data,
                                        double train_fraction,
                                        uint64_t split_seed) {
  if (cfg.n != data.features() * static_cast<size_t>(grf.n2))
    throw std::invalid_argument(
        "classification: network rows != features * receptive fields");
  const auto [train_idx, test_idx] =
      stratified_split(data.y, train_fraction, split_seed);
  std::vector<double> mins, maxs;
  fit_minmax(data, train_idx, &mins, &maxs);
  const std::vector<Sample> train_set =
      encode_tabular(data, train_idx, mins, maxs, grf, cfg.spike, cfg.T);
  const std::vector<Sample> test_set =
      encode_tabular(data, test_idx, mins, maxs, grf, cfg.spike, cfg.T);

  Network net = make_network(cfg);
  std::mt19937_64 rng = derive_stream(cfg.seed, "init");
  init_weights(net, cfg.I_b > 0 ? InitMode::SUPERVISED : InitMode::UNSUPERVISED,
               rng);
  const std::vector<EpochLog> log = train(net, train_set, cfg.I_b > 0);

  ClassificationResult res;
  res.train_metrics = test(net, train_set);
  res.test_metrics = test(net, test_set);
  res.model = snapshot_model(net);
  res.model.kind = "classification";
  res.model.grf = grf;
  res.model.mins = mins;
  res.model.maxs = maxs;
  res.model.log = log;
  return res;
}

void inject_stuck(Network& net, double fraction, std::mt19937_64& rng) {
  if (!(fraction >= 0.0 && fraction <= 1.0))
    throw std::invalid_argument("inject_stuck: fraction must be in [0, 1]");
  const size_t N = net.xb.dev.size();
  const size_t count = static_cast<size_t>(
      std::llround(fraction * static_cast<double>(N)));
  std::vector<size_t> idx(N);
  for (size_t i = 0; i < N; ++i) idx[i] = i;
  for (size_t i = 0; i < count; ++i) {
    std::uniform_int_distribution<size_t> pick(i, N - 1);
    std::swap(idx[i], idx[pick(rng)]);
    const size_t k = idx[i];
    std::uniform_real_distribution<double> u(net.xb.par[k].w_min(),
                                             net.xb.par[k].w_max());
    net.xb.dev[k].w = u(rng);
    net.xb.dev[k].stuck = true;
  }
}

std::vector<SweepPoint> run_noise_sweep(const Model& trained,
                                        const PatternSet& set,
                                        const std::vector<double>& levels,
                                        size_t trials, uint64_t seed,
                                        int jobs) {
  if (trials == 0) throw std::invalid_argument("noise sweep: zero trials");
  std::vector<SweepPoint> out;
  out.reserve(levels.size());
  for (size_t li = 0; li < levels.size(); ++li) {
    const double level = levels[li];
    std::vector<double> acc(trials, 0.0);
    parallel_for(trials, jobs, [&](size_t t) {
      std::mt19937_64 rng = derive_stream(
          seed, "noise/" + std::to_string(li) + "/" + std::to_string(t));
      PatternSet noisy = set;
      for (Pattern& p : noisy.patterns) p.bits = flip_noise(p.bits, level, rng);
      Network net = make_network(trained.net);
      restore_weights(net, trained);
      const std::vector<Sample> samples = encode_pattern_set(
          noisy, trained.pattern_lead, trained.net.spike, trained.net.T);
      acc[t] = test(net, samples).accuracy;
    });
    const double mean =
        std::accumulate(acc.begin(), acc.end(), 0.0) / acc.size();
    out.push_back({level, mean, sample_stddev(acc, mean), trials});
  }
  return out;
}

std::vector<SweepPoint> run_fault_campaign(
    FaultKind kind, const std::vector<double>& levels, size_t repeats,
    const NetworkConfig& cfg, const GrfConfig& grf, const TabularData& data,
    double train_fraction, uint64_t split_seed, uint64_t seed, int jobs) {
  if (repeats == 0) throw std::invalid_argument("fault campaign: zero repeats");
  if (cfg.n != data.features() * static_cast<size_t>(grf.n2))
    throw std::invalid_argument(
        "fault campaign: network rows != features * receptive fields");
  const auto [train_idx, test_idx] =
      stratified_split(data.y, train_fraction, split_seed);
  std::vector<double> mins, maxs;
  fit_minmax(data, train_idx, &mins, &maxs);
  const std::vector<Sample> train_set =
      encode_tabular(data, train_idx, mins, maxs, grf, cfg.spike, cfg.T);
  const std::vector<Sample> test_set =
      encode_tabular(data, test_idx, mins, maxs, grf, cfg.spike, cfg.T);

  const char* tag = kind == FaultKind::STUCK ? "stuck"
                    : kind == FaultKind::VAR_R ? "var_r"
                                               : "var_vt";
  std::vector<SweepPoint> out;
  out.reserve(levels.size());
  for (size_t li = 0; li < levels.size(); ++li) {
    const double level = levels[li];
    std::vector<double> acc(repeats, 0.0);
    parallel_for(repeats, jobs, [&](size_t r) {
      std::mt19937_64 rng =
          derive_stream(seed, std::string(tag) + "/" + std::to_string(li) +
                                  "/" + std::to_string(r));
      Network net = make_network(cfg);
      std::mt19937_64 init_rng = derive_stream(cfg.seed, "init");
      init_weights(net,
                   cfg.I_b > 0 ? InitMode::SUPERVISED : InitMode::UNSUPERVISED,
                   init_rng);
      switch (kind) {
        case FaultKind::STUCK:
          inject_stuck(net, level, rng);
          break;
        case FaultKind::VAR_R:
          for (auto& p : net.xb.par)
            p = perturb_params(cfg.device, level, 0.0, rng);
          break;
        case FaultKind::VAR_VT:
          for (auto& p : net.xb.par)
            p = perturb_params(cfg.device, 0.0, level, rng);
          break;
      }
      train(net, train_set, cfg.I_b > 0);
      acc[r] = test(net, test_set).accuracy;
    });
    const double mean =
        std::accumulate(acc.begin(), acc.end(), 0.0) / acc.size();
    out.push_back({level, mean, sample_stddev(acc, mean), repeats});
  }
  return out;
}

HeatmapFiles export_heatmap(const Model& mdl, const std::string& out_prefix) {
  const size_t n = mdl.net.n, m = mdl.net.m;
  if (mdl.w.size() != n * m)
    throw std::invalid_argument("heatmap: weight matrix size mismatch");
  auto G_at = [&](size_t i, size_t j) {
    const size_t k = i * m + j;
    const MemristorParams& p =
        mdl.perturbed ? mdl.per_device[k] : mdl.net.device;
    MemristorState s;
    s.w = mdl.w[k];
    return conductance(s, p);
  };

  HeatmapFiles files;
  files.csv = out_prefix + ".csv";
  std::ofstream csv(files.csv, std::ios::binary);
  if (!csv) throw std::runtime_error("cannot open for writing: " + files.csv);
  csv << "row";
  for (size_t j = 0; j < m; ++j) csv << ",col_" << j;
  csv << "\n";
  csv.precision(9);
  for (size_t i = 0; i < n; ++i) {
    csv << i;
    for (size_t j = 0; j < m; ++j) csv << ',' << G_at(i, j) * 1e6;
    csv << "\n";
  }
  if (!csv) throw std::runtime_error("write failed: " + files.csv);

  if (mdl.kind != "pattern") return files;
  if (mdl.grid_rows * mdl.grid_cols != n)
    throw std::invalid_argument("heatmap: grid shape != network rows");
  const double g_lo = mdl.net.device.G_min();
  const double g_hi = mdl.net.device.G_max();
  for (size_t j = 0; j < m; ++j) {
    const std::string path = out_prefix + "_col" + std::to_string(j) + ".pgm";
    std::ofstream pgm(path, std::ios::binary);
    if (!pgm) throw std::runtime_error("cannot open for writing: " + path);
    pgm << "P2\n" << mdl.grid_cols << " " << mdl.grid_rows << "\n255\n";
    for (size_t r = 0; r < mdl.grid_rows; ++r) {
      for (size_t c = 0; c < mdl.grid_cols; ++c) {
        const double g = G_at(r * mdl.grid_cols + c, j);
        int v = static_cast<int>(
            std::lround(255.0 * (g - g_lo) / (g_hi - g_lo)));
        v = std::clamp(v, 0, 255);
        pgm << v << (c + 1 < mdl.grid_cols ? ' ' : '\n');
      }
    }
    if (!pgm) throw std::runtime_error("write failed: " + path);
    files.pgms.push_back(path);
  }
  return files;
}

}  // namespace memsnn
