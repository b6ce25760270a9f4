// b3pc: party process, client, simulator, oracle dumps and bench.

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <sstream>

#include "b3pc/bench.hpp"
#include "b3pc/client.hpp"
#include "b3pc/fixed_point.hpp"
#include "b3pc/party_server.hpp"
#include "b3pc/plaintext.hpp"
#include "b3pc/simulator.hpp"
#include "b3pc/truncation.hpp"

using namespace b3pc;

namespace {

std::vector<std::string> split_values(const std::string& csv) {
  std::vector<std::string> out;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    auto b = tok.find_first_not_of(" \t");
    if (b == std::string::npos) continue;
    out.push_back(tok.substr(b, tok.find_last_not_of(" \t\r") - b + 1));
  }
  return out;
}

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    auto b = line.find_first_not_of(" \t");
    if (b == std::string::npos || line[b] == '#') continue;
    out.push_back(line.substr(b, line.find_last_not_of(" \t\r") - b + 1));
  }
  return out;
}

bool looks_fractional(const std::vector<std::string>& toks) {
  for (const auto& t : toks) {
    if (t.find_first_of(".eE") != std::string::npos) return true;
  }
  return false;
}

bool bit_output(Kind k) {
  return k == Kind::drelu || k == Kind::msb || k == Kind::ucmp || k == Kind::equality || k == Kind::rss_drelu;
}

void print_meter(std::ostream& os, const ChannelMeter& m, std::size_t batch) {
  os << "rounds " << m.rounds();
  if (m.prologue_rounds()) os << " (+1 prologue)";
  os << "; bits per instance:";
  const int ch[6][2] = {{0, 1}, {0, 2}, {1, 2}, {1, 0}, {2, 0}, {2, 1}};
  for (const auto& c : ch) os << ' ' << c[0] << c[1] << '=' << m.bits(c[0], c[1]) / batch;
  os << '\n';
}

int cmd_party(int id, const std::vector<std::string>& configs, int crash_after, bool quiet) {
  PartyOptions opts;
  opts.id = id;
  for (const auto& path : configs) {
    auto cfg = SessionConfig::load(path);
    for (const auto& w : cfg.validate()) std::cerr << "warning: " << w << '\n';
    opts.sessions.push_back(std::move(cfg));
  }
  opts.crash_after_round = crash_after;
  opts.log = quiet ? nullptr : &std::cerr;
  return run_party_process(std::move(opts));
}

struct ClientArgs {
  std::string protocol, config, inputs, values, out;
  bool fixed = false;
  std::int64_t alpha0 = 0, alpha1 = 1, scale = 0, offset = 0;
};

int cmd_client(const ClientArgs& a) {
  auto cfg = SessionConfig::load(a.config);
  auto toks = a.inputs.empty() ? split_values(a.values) : read_lines(a.inputs);
  const bool fixed = a.fixed || looks_fractional(toks);
  auto spec = spec_for_session(a.protocol, cfg, fixed);
  spec.alpha0 = a.alpha0;
  spec.alpha1 = a.alpha1;
  spec.funnel_scale = a.scale;
  spec.funnel_offset = a.offset;
  spec.validate();

  const Ring ring(cfg.params.ell);
  const FixedPointCodec codec(cfg.params);
  std::vector<Word> values;
  for (const auto& t : toks) {
    values.push_back(fixed ? codec.encode(std::stod(t)) : encode_signed(ring, cfg.params.ellx, std::stoll(t)));
  }
  auto res = client_submit(cfg, spec, values, 0);

  std::ofstream file;
  if (!a.out.empty()) file.open(a.out);
  std::ostream& os = a.out.empty() ? std::cout : file;
  for (Word y : res.outputs) {
    if (bit_output(spec.kind) || !fixed) {
      os << ring.to_signed(y) << '\n';
    } else {
      os << codec.decode(y) << '\n';
    }
  }
  const std::size_t batch = values.size() / spec.input_arity();
  std::cerr << kind_name(spec.kind) << " x" << batch << " in " << res.latency_us << " us; ";
  print_meter(std::cerr, res.meter, batch);
  return 0;
}

SessionConfig sim_config(unsigned ell, unsigned ellx, const std::string& pin) {
  SessionConfig cfg;
  cfg.params = RingParams::make(ell, ellx);
  cfg.params.validate();
  cfg.seeds = pin.empty() ? SessionSeeds::random() : SessionSeeds::derive(pin);
  return cfg;
}

int cmd_simulate(const std::string& protocol, unsigned ell, unsigned ellx, std::size_t trials, const std::string& pin) {
  auto cfg = sim_config(ell, ellx, pin);
  auto spec = ProtocolSpec::named(protocol);
  if (is_rss(spec.kind)) cfg.sharing = "rss";
  const Ring ring(ell);
  std::uint64_t input_seed = pin.empty() ? std::random_device{}() : std::hash<std::string>{}(pin);
  auto values = bench_inputs(spec, cfg.params, trials, input_seed);

  StreamTag tag;
  tag.session = cfg.session_id;
  PrgStream rand(pin.empty() ? random_seed(SeedLabel::S2) : SessionSeeds::derive(pin + "/client").s2, tag);
  SimulationResult detail;
  auto got = simulate_values(spec, cfg, values, rand, {}, &detail);
  auto want = reference_outputs(spec, ring, values);
  std::size_t bad = 0;
  for (std::size_t i = 0; i < want.size(); ++i) bad += got[i] != want[i];
  std::cout << kind_name(spec.kind) << " ell=" << ell << " ellx=" << ellx << ": " << want.size() - bad << "/"
            << want.size() << " outputs match the plaintext reference\n";
  print_meter(std::cout, detail.meter, trials);
  return bad == 0 ? 0 : 1;
}

int oracle_truncation(unsigned ell, unsigned ellx) {
  const Ring ring(ell);
  const Word q_minus = ring.mask();
  const Word span = Word{1} << ellx;
  const bool exhaustive = ell <= 14;
  std::mt19937_64 gen(ell * 131 + ellx);
  std::map<TruncClass, std::uint64_t> tally;
  std::uint64_t mismatches = 0;
  double worst = 0;
  std::uint64_t total_failures = 0, total_seen = 0;
  auto visit_x = [&](Word x) {
    std::uint64_t failures = 0, seen = 0;
    auto visit_r = [&](Word r) {
      ++seen;
      if (in_wrap_failure_region(ring, ellx, x, r)) ++failures;
      for (unsigned k = 1; k <= ellx; ++k) {
        Word s0 = trunc_share_local(ring, 0, r, k);
        Word s1 = trunc_share_local(ring, 1, ring.sub(x, r), k);
        auto p = classify_truncation(ring, ellx, x, r, k);
        ++tally[p.cls];
        mismatches += ring.add(s0, s1) != p.value;
      }
    };
    if (exhaustive) {
      for (Word r = 0; r <= q_minus; ++r) visit_r(r);
    } else {
      for (int i = 0; i < 1024; ++i) visit_r(ring.reduce(gen()));
    }
    worst = std::max(worst, static_cast<double>(failures) / static_cast<double>(seen));
    total_failures += failures;
    total_seen += seen;
  };
  if (exhaustive) {
    for (Word x = 0; x < span; ++x) visit_x(x);
    for (Word xi = 1; xi < span; ++xi) visit_x(ring.neg(xi));
  } else {
    std::uniform_int_distribution<std::int64_t> pick(-static_cast<std::int64_t>(span - 1),
                                                     static_cast<std::int64_t>(span - 1));
    for (int i = 0; i < 2048; ++i) visit_x(ring.from_signed(pick(gen)));
  }

  std::cout << "truncation ell=" << ell << " ellx=" << ellx << (exhaustive ? " (exhaustive)" : " (2048 random x, 1024 r each)")
            << '\n';
  for (auto [cls, n] : tally) std::cout << "  " << trunc_class_name(cls) << ": " << n << '\n';
  std::cout << "  mismatches against the classifier: " << mismatches << '\n';
  const double bound = std::ldexp(1.0, int(ellx) + 1 - int(ell));
  if (exhaustive) {
    std::cout << "  worst wrap-failure fraction per x: " << worst << " (bound " << bound << ")\n";
  } else {
    // 1024 draws per x cannot resolve a per-x rate this small; pool them.
    std::cout << "  wrap failures: " << total_failures << " of " << total_seen << " splits (bound allows about "
              << bound * static_cast<double>(total_seen) << ")\n";
  }
  return mismatches == 0 ? 0 : 1;
}

int oracle_drelu(unsigned ell, unsigned ellx) {
  auto cfg = sim_config(ell, ellx, "oracle");
  const Ring ring(ell);
  auto spec = ProtocolSpec::named("drelu");
  std::vector<Word> xs;
  const std::int64_t bound = (std::int64_t{1} << ellx) - 1;
  if (ellx <= 12) {
    for (std::int64_t v = -bound; v <= bound; ++v) xs.push_back(ring.from_signed(v));
  } else {
    xs = bench_inputs(spec, cfg.params, 8192, ell);
  }
  StreamTag tag;
  PrgStream rand(SessionSeeds::derive("oracle/client").s2, tag);
  auto got = simulate_values(spec, cfg, xs, rand);
  auto want = reference_outputs(spec, ring, xs);
  std::size_t bad = 0, pattern_bad = 0;
  StreamTag split_tag;
  split_tag.index = 1;
  PrgStream splits(SessionSeeds::derive("oracle/splits").s2, split_tag);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    bad += got[i] != want[i];
    if (xs[i] != 0) {
      auto v = truncation_pattern_check(ring, ellx, xs[i], splits.draw_ring(ring));
      pattern_bad += !v.ok && !v.failure_region;
    }
  }
  std::cout << "drelu ell=" << ell << " ellx=" << ellx << ": " << xs.size() - bad << "/" << xs.size()
            << " protocol outputs match; " << pattern_bad << " truncation arrays break the pattern\n";
  return bad == 0 && pattern_bad == 0 ? 0 : 1;
}

struct BenchArgs {
  std::string protocol, config;
  std::vector<std::size_t> batches{1, 100, 1000};
  int iters = 10;
  bool simulate = false;
};

int cmd_bench(const BenchArgs& a) {
  auto cfg = SessionConfig::load(a.config);
  auto spec = spec_for_session(a.protocol, cfg, false);
  std::cout << bench_csv_header() << '\n';
  auto rows = a.simulate ? bench_simulated(cfg, a.protocol, spec, a.batches, a.iters)
                         : bench_network(cfg, a.protocol, spec, a.batches, a.iters);
  for (const auto& row : rows) std::cout << bench_csv_row(row) << '\n';
  return 0;
}

int cmd_init_config(const std::string& out, const std::string& session, unsigned ell, unsigned ellx,
                    const std::string& sharing, const std::vector<std::uint16_t>& ports, const std::string& pin) {
  if (ports.size() != 3) throw std::invalid_argument("--ports needs three values");
  SessionConfig cfg;
  cfg.session_id = parse_session_id(session);
  cfg.params = RingParams::make(ell, ellx);
  cfg.sharing = sharing;
  cfg.seeds = pin.empty() ? SessionSeeds::random() : SessionSeeds::derive(pin);
  for (int p = 0; p < 3; ++p) cfg.parties[p] = {p, "127.0.0.1", ports[p]};
  for (const auto& w : cfg.validate()) std::cerr << "warning: " << w << '\n';
  std::ofstream f(out);
  if (!f) throw std::runtime_error("cannot write " + out);
  f << cfg.dump() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Three-party non-linear protocols over power-of-two rings"};
  app.require_subcommand(1);

  int party_id = 0, crash_after = -1;
  bool quiet = false;
  std::vector<std::string> party_configs;
  auto* party = app.add_subcommand("party", "Run one party process");
  party->add_option("--id", party_id, "Party id")->required()->check(CLI::Range(0, 2));
  party->add_option("--config", party_configs, "Session config (repeat to serve several sessions)")->required();
  party->add_option("--crash-after-round", crash_after, "Debug: exit right after sending this round");
  party->add_flag("--quiet", quiet, "No log output");

  ClientArgs ca;
  auto* client = app.add_subcommand("client", "Submit inputs to running parties");
  auto* run = client->add_subcommand("run", "Share, run one invocation, reconstruct");
  client->require_subcommand(1);
  run->add_option("--protocol", ca.protocol, "relu, drelu, max9, sort4, relu6, ...")->required();
  run->add_option("--config", ca.config, "Session config")->required();
  auto* in_file = run->add_option("--inputs", ca.inputs, "File with one value per line");
  auto* in_csv = run->add_option("--values", ca.values, "Comma separated values");
  in_file->excludes(in_csv);
  run->add_option("--out", ca.out, "Write outputs here instead of stdout");
  run->add_flag("--fixed", ca.fixed, "Treat values as fixed point (implied by a decimal point)");
  run->add_option("--alpha0", ca.alpha0, "dynrelu slope for x < 0");
  run->add_option("--alpha1", ca.alpha1, "dynrelu slope for x >= 0");
  run->add_option("--funnel-scale", ca.scale, "funnel: max(x, scale*x + offset)");
  run->add_option("--funnel-offset", ca.offset);

  std::string sim_protocol, pin;
  unsigned ell = 40, ellx = 16;
  std::size_t trials = 1000;
  auto* sim = app.add_subcommand("simulate", "Run all three parties in-process against the plaintext reference");
  sim->add_option("--protocol", sim_protocol)->required();
  sim->add_option("--ring-bits", ell)->capture_default_str();
  sim->add_option("--prec-bits", ellx)->capture_default_str();
  sim->add_option("--trials", trials)->capture_default_str();
  sim->add_option("--pin-seed", pin, "Deterministic seeds from this string");

  std::string which;
  auto* oracle = app.add_subcommand("oracle", "Check the local truncation and sign-test oracles");
  oracle->add_option("which", which)->required()->check(CLI::IsMember({"truncation", "drelu", "all"}));
  oracle->add_option("--ring-bits", ell)->capture_default_str();
  oracle->add_option("--prec-bits", ellx)->capture_default_str();

  BenchArgs ba;
  auto* bench = app.add_subcommand("bench", "Latency, throughput and traffic as CSV");
  bench->add_option("--protocol", ba.protocol)->required();
  bench->add_option("--batch", ba.batches, "Batch sizes")->capture_default_str();
  bench->add_option("--iters", ba.iters)->capture_default_str()->check(CLI::PositiveNumber);
  bench->add_option("--config", ba.config)->required();
  bench->add_flag("--simulate", ba.simulate, "In-process instead of against running parties");

  std::string out, session = "1", sharing = "ass";
  std::vector<std::uint16_t> ports{9100, 9101, 9102};
  auto* init = app.add_subcommand("init-config", "Write a loopback session config with fresh seeds");
  init->add_option("--out", out)->required();
  init->add_option("--session", session, "Hex session id")->capture_default_str();
  init->add_option("--ring-bits", ell)->capture_default_str();
  init->add_option("--prec-bits", ellx)->capture_default_str();
  init->add_option("--sharing", sharing)->check(CLI::IsMember({"ass", "rss"}))->capture_default_str();
  init->add_option("--ports", ports)->delimiter(',')->expected(3)->capture_default_str();
  init->add_option("--pin-seed", pin);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*party) return cmd_party(party_id, party_configs, crash_after, quiet);
    if (*client) return cmd_client(ca);
    if (*sim) return cmd_simulate(sim_protocol, ell, ellx, trials, pin);
    if (*oracle) {
      int rc = 0;
      if (which == "truncation" || which == "all") rc |= oracle_truncation(ell, ellx);
      if (which == "drelu" || which == "all") rc |= oracle_drelu(ell, ellx);
      return rc;
    }
    if (*bench) return cmd_bench(ba);
    if (*init) return cmd_init_config(out, session, ell, ellx, sharing, ports, pin);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
