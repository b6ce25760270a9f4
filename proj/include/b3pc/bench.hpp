#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "b3pc/meter.hpp"
#include "b3pc/protocol.hpp"
#include "b3pc/session_config.hpp"

namespace b3pc {

struct BenchRow {
  std::string protocol;
  std::size_t batch = 0;
  double latency_us = 0;    // median over iterations, one whole batch
  double amortized_us = 0;  // latency / batch
  double ops_per_s = 0;
  ChannelMeter meter;       // one invocation
};

inline constexpr std::size_t kBenchBatchPresets[] = {1, 100, 1000, 5000, 10000, 20000};

std::string bench_csv_header();
std::string bench_csv_row(const BenchRow& row);

// Random in-range inputs for `batch` instances.
std::vector<Word> bench_inputs(const ProtocolSpec& spec, const RingParams& params, std::size_t batch,
                               std::uint64_t seed);

// Against running parties; invocation ids continue from the parties' last.
// Iterations interleave the batch sizes; one row per size.
std::vector<BenchRow> bench_network(const SessionConfig& cfg, const std::string& name, const ProtocolSpec& spec,
                                    const std::vector<std::size_t>& batches, int iters);
// In-process, same framing.
std::vector<BenchRow> bench_simulated(const SessionConfig& cfg, const std::string& name, const ProtocolSpec& spec,
                                      const std::vector<std::size_t>& batches, int iters);

}  // namespace b3pc
