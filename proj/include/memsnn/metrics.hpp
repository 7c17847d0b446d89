#pragma once
#include <cstdint>
#include <cstddef>
#include <vector>

namespace memsnn {

struct Metrics {
  double accuracy = 0.0;  // correct / total; silent samples are incorrect
  double macro_f1 = 0.0;
  std::vector<uint64_t> confusion;  // m*m, [true * m + pred], spiking samples only
  std::vector<double> f1;           // per class
  uint64_t total = 0;
  uint64_t no_spike = 0;  // samples with no winner
  uint64_t ties = 0;      // same-step winner ties during the pass
};

// preds entries of -1 mean no column spiked. A class absent from both truth
// and prediction gets F1 = 0 and a warning on stderr.
Metrics compute_metrics(const std::vector<int>& labels,
                        const std::vector<int>& preds, size_t m,
                        uint64_t ties = 0);

}  // namespace memsnn
