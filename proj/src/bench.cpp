#include "b3pc/bench.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <random>
#include <sstream>

#include "b3pc/client.hpp"
#include "b3pc/simulator.hpp"

namespace b3pc {

namespace {

// Median, so a descheduled run on a shared host does not skew the row.
double median(std::vector<double> v) {
  if (v.empty()) return 0;
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 ? v[h] : (v[h - 1] + v[h]) / 2;
}

BenchRow finish(const std::string& name, std::size_t batch, const std::vector<double>& samples_us,
                ChannelMeter meter) {
  BenchRow row;
  row.protocol = name;
  row.batch = batch;
  row.latency_us = median(samples_us);
  row.amortized_us = row.latency_us / static_cast<double>(batch);
  row.ops_per_s = row.latency_us > 0 ? 1e6 * static_cast<double>(batch) / row.latency_us : 0;
  row.meter = std::move(meter);
  return row;
}

}  // namespace

std::string bench_csv_header() {
  return "protocol,batch,latency_us,amortized_us,ops_per_s,bytes_01,bytes_02,bytes_12,bytes_10,bytes_20,bytes_21,rounds";
}

std::string bench_csv_row(const BenchRow& r) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(2);
  const auto& m = r.meter;
  os << r.protocol << ',' << r.batch << ',' << r.latency_us << ',' << r.amortized_us << ',' << r.ops_per_s << ','
     << m.bytes(0, 1) << ',' << m.bytes(0, 2) << ',' << m.bytes(1, 2) << ',' << m.bytes(1, 0) << ',' << m.bytes(2, 0)
     << ',' << m.bytes(2, 1) << ',' << m.rounds();
  return os.str();
}

std::vector<Word> bench_inputs(const ProtocolSpec& spec, const RingParams& params, std::size_t batch,
                               std::uint64_t seed) {
  const Ring ring(params.ell);
  // Comparisons work on differences, which must stay in range too.
  const unsigned width = spec.input_arity() > 1 ? params.ellx - 1 : params.ellx;
  const std::int64_t bound = (std::int64_t{1} << width) - 1;
  std::mt19937_64 gen(seed);
  std::uniform_int_distribution<std::int64_t> dist(-bound, bound);
  std::vector<Word> v(batch * spec.input_arity());
  for (auto& x : v) x = ring.from_signed(dist(gen));
  return v;
}

namespace {

// One run of `batch` instances, returning its latency and meter.
using Runner = std::function<std::pair<double, ChannelMeter>(const std::vector<Word>& inputs)>;

// Iterations cycle through the batch sizes so drift in host load lands on
// every size alike.
std::vector<BenchRow> sweep(const ProtocolSpec& spec, const RingParams& params, const std::string& name,
                            const std::vector<std::size_t>& batches, int iters, const Runner& run) {
  std::vector<std::vector<Word>> inputs;
  for (auto b : batches) inputs.push_back(bench_inputs(spec, params, b, 0x5eed + b));
  // Warm caches and, over the network, the peer links.
  for (const auto& in : inputs) run(in);
  std::vector<std::vector<double>> samples(batches.size());
  std::vector<ChannelMeter> meters(batches.size());
  for (int i = 0; i < iters; ++i) {
    for (std::size_t j = 0; j < batches.size(); ++j) {
      auto [us, meter] = run(inputs[j]);
      samples[j].push_back(us);
      meters[j] = std::move(meter);
    }
  }
  std::vector<BenchRow> rows;
  for (std::size_t j = 0; j < batches.size(); ++j) rows.push_back(finish(name, batches[j], samples[j], meters[j]));
  return rows;
}

}  // namespace

std::vector<BenchRow> bench_network(const SessionConfig& cfg, const std::string& name, const ProtocolSpec& spec,
                                    const std::vector<std::size_t>& batches, int iters) {
  return sweep(spec, cfg.params, name, batches, iters, [&](const std::vector<Word>& in) {
    auto res = client_submit(cfg, spec, in, 0);
    return std::pair{res.latency_us, res.meter};
  });
}

std::vector<BenchRow> bench_simulated(const SessionConfig& cfg, const std::string& name, const ProtocolSpec& spec,
                                      const std::vector<std::size_t>& batches, int iters) {
  StreamTag tag;
  tag.session = cfg.session_id;
  PrgStream rand(random_seed(SeedLabel::S2), tag);
  std::uint32_t invocation = 0;
  return sweep(spec, cfg.params, name, batches, iters, [&](const std::vector<Word>& in) {
    SimulationOptions opts;
    opts.invocation = ++invocation;
    SimulationResult detail;
    auto start = std::chrono::steady_clock::now();
    simulate_values(spec, cfg, in, rand, opts, &detail);
    double us = std::chrono::duration<double, std::micro>(std::chrono::steady_clock::now() - start).count();
    return std::pair{us, detail.meter};
  });
}

}  // namespace b3pc
