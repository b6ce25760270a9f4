#include "b3pc/client.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>

#include "b3pc/net.hpp"
#include "b3pc/rss.hpp"
#include "b3pc/simulator.hpp"
#include "b3pc/wire.hpp"

namespace b3pc {

std::array<std::vector<Word>, 3> client_share(const ProtocolSpec& spec, const Ring& ring,
                                              std::span<const Word> values, PrgStream& rand) {
  std::array<std::vector<Word>, 3> out;
  if (is_rss(spec.kind)) {
    for (auto& o : out) o.reserve(2 * values.size());
    for (Word v : values) {
      RssShare s[3];
      rss_split(ring, ring.reduce(v), rand, s);
      for (int p = 0; p < 3; ++p) {
        out[p].push_back(s[p].first);
        out[p].push_back(s[p].second);
      }
    }
    return out;
  }
  out[0].reserve(values.size());
  out[1].reserve(values.size());
  for (Word v : values) {
    Word s0 = rand.draw_ring(ring);
    out[0].push_back(s0);
    out[1].push_back(ring.sub(v, s0));
  }
  return out;
}

std::vector<Word> client_reconstruct(const ProtocolSpec& spec, const Ring& ring,
                                     const std::array<std::vector<Word>, 3>& outputs) {
  std::vector<Word> out;
  if (is_rss(spec.kind)) {
    const auto& a = outputs[0];
    const auto& b = outputs[1];
    if (a.size() != b.size() || a.size() % 2) throw std::invalid_argument("replicated outputs are misaligned");
    for (std::size_t i = 0; i < a.size(); i += 2) {
      out.push_back(rss_reconstruct(ring, RssShare{0, a[i], a[i + 1]}, RssShare{1, b[i], b[i + 1]}));
    }
    return out;
  }
  if (outputs[0].size() != outputs[1].size()) throw std::invalid_argument("output shares are misaligned");
  out.resize(outputs[0].size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = ring.add(outputs[0][i], outputs[1][i]);
  return out;
}

namespace {

std::string frame_text(const std::vector<std::uint8_t>& f) {
  return std::string(f.begin() + kHeaderSize, f.end());
}

}  // namespace

ClientResult client_submit(const SessionConfig& cfg, const ProtocolSpec& spec, const std::vector<Word>& values,
                           std::uint32_t invocation, PrgStream* share_rand) {
  spec.validate();
  const Ring ring(cfg.params.ell);
  const std::size_t arity = spec.input_arity();
  if (values.empty() || values.size() % arity != 0) {
    throw ClientError("need a positive multiple of " + std::to_string(arity) + " inputs");
  }
  for (Word v : values) {
    if (!in_input_range(ring, cfg.params.ellx, v)) throw ClientError("input outside the supported range");
  }
  const std::size_t batch = values.size() / arity;
  const unsigned eb = element_bytes(cfg.params);

  std::optional<PrgStream> own;
  if (!share_rand) {
    StreamTag tag;
    tag.session = cfg.session_id;
    own.emplace(random_seed(SeedLabel::S2), tag);
    share_rand = &*own;
  }
  auto shares = client_share(spec, ring, values, *share_rand);

  std::array<TcpStream, 3> conns;
  FrameHeader base;
  base.session = cfg.session_id;
  base.sender = kClientId;
  base.protocol = static_cast<std::uint8_t>(spec.kind);
  try {
    for (int p = 0; p < 3; ++p) {
      conns[p] = TcpStream::connect(cfg.parties[p].host, cfg.parties[p].port);
      conns[p].set_timeout(std::chrono::seconds(60));
      FrameHeader h = base;
      h.round = tag::hello;
      conns[p].send_frame(encode_frame(h, {}, eb));
    }
    // Each party answers with the last invocation it ran in this session.
    std::uint32_t last = 0;
    for (auto& c : conns) {
      auto f = c.recv_frame(eb);
      FrameHeader h = decode_header(f.data());
      if (h.round == tag::error) throw ClientError("party refused the session: " + frame_text(f));
      if (h.round != tag::hello || h.session != cfg.session_id) throw ClientError("unexpected handshake reply");
      last = std::max(last, h.instance);
    }
    if (invocation == 0) invocation = last + 1;

    nlohmann::json job;
    job["spec"] = nlohmann::json::parse(spec.to_json());
    job["batch"] = batch;
    job["ell"] = cfg.params.ell;
    job["ellx"] = cfg.params.ellx;
    const std::string job_text = job.dump();

    auto start = std::chrono::steady_clock::now();
    for (int p = 0; p < 3; ++p) {
      FrameHeader h = base;
      h.instance = invocation;
      h.round = tag::job;
      conns[p].send_frame(encode_text_frame(h, job_text));
      h.round = tag::input;
      conns[p].send_frame(encode_frame(h, shares[p], eb));
    }

    ClientResult res;
    std::array<std::vector<Word>, 3> outs;
    std::string failure;
    for (int p = 0; p < 3; ++p) {
      try {
        auto f = conns[p].recv_frame(eb);
        FrameHeader h = decode_header(f.data());
        if (h.round == tag::error) {
          failure = "P" + std::to_string(p) + ": " + frame_text(f);
          continue;
        }
        if (h.round != tag::output || h.instance != invocation) throw ClientError("unexpected reply frame");
        outs[p] = unpack_elements(f.data() + kHeaderSize, h.count, eb);
        auto r = conns[p].recv_frame(eb);
        FrameHeader rh = decode_header(r.data());
        if (rh.round != tag::report) throw ClientError("missing meter report");
        res.meter.merge(ChannelMeter::from_json(frame_text(r)));
      } catch (const NetError& e) {
        if (failure.empty()) failure = "P" + std::to_string(p) + " dropped: " + e.what();
      }
    }
    auto stop = std::chrono::steady_clock::now();
    if (!failure.empty()) throw ClientError("session failed (" + failure + ")");
    res.latency_us = std::chrono::duration<double, std::micro>(stop - start).count();
    res.outputs = spec.kind == Kind::ucmp ? outs[2] : client_reconstruct(spec, ring, outs);
    return res;
  } catch (const NetError& e) {
    throw ClientError(std::string("session failed: ") + e.what());
  } catch (const WireError& e) {
    throw ClientError(std::string("session failed: ") + e.what());
  }
}

}  // namespace b3pc
