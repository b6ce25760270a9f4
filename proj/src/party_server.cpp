#include "b3pc/party_server.hpp"

#include <arpa/inet.h>

#include <csignal>
#include <cstdlib>
#include <future>
#include <iostream>
#include <json.hpp>
#include <malloc.h>
#include <mutex>
#include <thread>

#include "b3pc/wire.hpp"

namespace b3pc {

struct PartyServer::Session {
  SessionConfig cfg;
  std::mutex job_mu;  // invocations in one session run one at a time
  std::atomic<std::uint32_t> last_invocation{0};
  std::mutex link_mu;
  std::condition_variable link_cv;
  std::array<std::shared_ptr<TcpStream>, 3> links;
};

namespace {

constexpr std::size_t kMaxBatch = std::size_t{1} << 22;
constexpr std::size_t kMaxJobText = 1 << 20;

FrameHeader reply_header(const SessionConfig& cfg, int party, std::uint8_t protocol, std::uint32_t instance,
                         std::uint8_t t) {
  FrameHeader h;
  h.session = cfg.session_id;
  h.sender = static_cast<std::uint8_t>(party);
  h.protocol = protocol;
  h.instance = instance;
  h.round = t;
  return h;
}

// Batch buffers run to megabytes. Left to glibc's defaults they are mmapped
// and unmapped per invocation, and the page faults cost more than the work.
void keep_large_blocks_on_heap() {
  static std::once_flag once;
  std::call_once(once, [] {
    mallopt(M_MMAP_THRESHOLD, 256 << 20);
    mallopt(M_TRIM_THRESHOLD, 512 << 20);
  });
}

}  // namespace

PartyServer::PartyServer(PartyOptions opts) : opts_(std::move(opts)) {
  keep_large_blocks_on_heap();
  if (opts_.id < 0 || opts_.id > 2) throw std::invalid_argument("party id must be 0, 1 or 2");
  if (opts_.sessions.empty()) throw std::invalid_argument("no session configured");
  const auto& me = opts_.sessions.front().parties[opts_.id];
  for (const auto& cfg : opts_.sessions) {
    cfg.validate();
    if (cfg.parties[opts_.id].port != me.port || cfg.parties[opts_.id].host != me.host) {
      throw std::invalid_argument("all sessions must place this party at one endpoint");
    }
    auto s = std::make_unique<Session>();
    s->cfg = cfg;
    if (!sessions_.emplace(cfg.session_id, std::move(s)).second) {
      throw std::invalid_argument("duplicate session id " + session_hex(cfg.session_id));
    }
  }
}

PartyServer::~PartyServer() {
  stop();
  for (auto& [id, s] : sessions_) drop_links(*s);
  std::unique_lock lk(workers_mu_);
  for (auto* c : live_) c->shutdown();
  workers_cv_.wait_for(lk, std::chrono::seconds(5), [&] { return workers_ == 0; });
}

void PartyServer::log(const std::string& line) {
  if (!opts_.log) return;
  std::lock_guard lk(log_mu_);
  *opts_.log << "[P" << opts_.id << "] " << line << std::endl;
}

void PartyServer::track(TcpStream* c, bool live) {
  std::lock_guard lk(workers_mu_);
  if (live) {
    live_.insert(c);
  } else {
    live_.erase(c);
  }
}

void PartyServer::bind() {
  const auto& me = opts_.sessions.front().parties[opts_.id];
  in_addr probe{};
  std::string host = ::inet_pton(AF_INET, me.host.c_str(), &probe) == 1 ? me.host : "0.0.0.0";
  listener_ = TcpListener::bind(host, me.port);
  log("listening on " + host + ":" + std::to_string(listener_.port()));
}

void PartyServer::run() {
  if (listener_.port() == 0) bind();
  while (!stopping_) {
    auto conn = listener_.accept(std::chrono::milliseconds(200));
    if (!conn) continue;
    {
      std::lock_guard lk(workers_mu_);
      ++workers_;
    }
    std::thread([this, c = std::move(*conn)]() mutable {
      try {
        serve_connection(std::move(c));
      } catch (const std::exception& e) {
        log(std::string("connection dropped: ") + e.what());
      }
      std::lock_guard lk(workers_mu_);
      --workers_;
      workers_cv_.notify_all();
    }).detach();
  }
  listener_.close();
  log("shutting down");
  for (auto& [id, s] : sessions_) drop_links(*s);
  std::unique_lock lk(workers_mu_);
  for (auto* c : live_) c->shutdown();
  workers_cv_.wait_for(lk, std::chrono::seconds(5), [&] { return workers_ == 0; });
}

void PartyServer::serve_connection(TcpStream conn) {
  conn.set_timeout(opts_.io_timeout);
  auto first = conn.recv_frame(8, 0);
  FrameHeader h = decode_header(first.data());
  if (h.round != tag::hello) throw WireError("connection did not open with a hello");
  auto it = sessions_.find(h.session);
  if (it == sessions_.end()) {
    SessionConfig unknown;
    unknown.session_id = h.session;
    conn.send_frame(encode_text_frame(reply_header(unknown, opts_.id, h.protocol, 0, tag::error), "unknown session"));
    throw WireError("hello for unknown session " + session_hex(h.session));
  }
  Session& s = *it->second;

  if (h.sender == kClientId) {
    track(&conn, true);
    try {
      serve_client(s, conn, h);
    } catch (...) {
      track(&conn, false);
      throw;
    }
    track(&conn, false);
    return;
  }
  // Peers dial upward: the higher id connects to the lower.
  if (h.sender > 2 || h.sender <= opts_.id) throw WireError("unexpected peer hello");
  std::lock_guard lk(s.link_mu);
  if (s.links[h.sender]) s.links[h.sender]->shutdown();
  s.links[h.sender] = std::make_shared<TcpStream>(std::move(conn));
  s.link_cv.notify_all();
  log("peer P" + std::to_string(h.sender) + " linked for session " + session_hex(s.cfg.session_id));
}

std::shared_ptr<TcpStream> PartyServer::peer(Session& s, int other) {
  std::unique_lock lk(s.link_mu);
  if (s.links[other]) return s.links[other];
  if (other > opts_.id) {
    if (!s.link_cv.wait_for(lk, opts_.io_timeout, [&] { return s.links[other] != nullptr || stopping_; }) ||
        stopping_) {
      throw NetError("P" + std::to_string(other) + " never connected");
    }
    return s.links[other];
  }
  const auto& ep = s.cfg.parties[other];
  auto link = std::make_shared<TcpStream>(TcpStream::connect(ep.host, ep.port));
  link->set_timeout(opts_.io_timeout);
  link->send_frame(encode_frame(reply_header(s.cfg, opts_.id, 0, 0, tag::hello), {}, 8));
  s.links[other] = link;
  return link;
}

void PartyServer::drop_links(Session& s) {
  std::lock_guard lk(s.link_mu);
  for (auto& l : s.links) {
    if (l) l->shutdown();
    l.reset();
  }
}

void PartyServer::serve_client(Session& s, TcpStream& conn, const FrameHeader& hello) {
  const unsigned eb = element_bytes(s.cfg.params);
  conn.send_frame(encode_frame(reply_header(s.cfg, opts_.id, hello.protocol, s.last_invocation, tag::hello), {}, eb));

  auto job = conn.recv_frame(eb, kMaxJobText);
  FrameHeader jh = decode_header(job.data());
  if (jh.round != tag::job) throw WireError("expected a job frame");
  std::string job_text(job.begin() + kHeaderSize, job.end());

  std::uint32_t invocation = jh.instance;
  std::uint8_t protocol = jh.protocol;
  try {
    auto j = nlohmann::json::parse(job_text);
    auto spec = ProtocolSpec::from_json(j.at("spec").dump());
    std::size_t batch = j.at("batch").get<std::size_t>();
    if (batch == 0 || batch > kMaxBatch) throw std::invalid_argument("batch size out of bounds");
    std::size_t per_party = opts_.id == 2 && !is_rss(spec.kind) ? 0 : spec.input_arity() * batch;
    if (is_rss(spec.kind)) per_party *= 2;

    auto in = conn.recv_frame(eb, per_party * eb);
    FrameHeader ih = decode_header(in.data());
    if (ih.round != tag::input || ih.instance != invocation) throw WireError("expected an input frame");
    if (ih.count != per_party) throw WireError("input frame has the wrong element count");
    auto inputs = unpack_elements(in.data() + kHeaderSize, ih.count, eb);
    run_job(s, conn, invocation, job_text, std::move(inputs));
  } catch (const std::exception& e) {
    log("invocation " + std::to_string(invocation) + " failed: " + e.what());
    drop_links(s);
    try {
      conn.send_frame(encode_text_frame(reply_header(s.cfg, opts_.id, protocol, invocation, tag::error), e.what()));
    } catch (const NetError&) {
      // client already gone
    }
  }
}

void PartyServer::run_job(Session& s, TcpStream& client, std::uint32_t invocation, const std::string& job_text,
                          std::vector<Word> inputs) {
  auto j = nlohmann::json::parse(job_text);
  auto spec = ProtocolSpec::from_json(j.at("spec").dump());
  spec.validate();
  const std::size_t batch = j.at("batch").get<std::size_t>();
  const SessionConfig& cfg = s.cfg;
  if (j.at("ell").get<unsigned>() != cfg.params.ell || j.at("ellx").get<unsigned>() != cfg.params.ellx) {
    throw std::invalid_argument("client ring parameters differ from the session's");
  }
  const unsigned eb = element_bytes(cfg.params);

  std::lock_guard job_lock(s.job_mu);
  if (invocation <= s.last_invocation) {
    throw std::invalid_argument("invocation " + std::to_string(invocation) + " is not newer than " +
                                std::to_string(s.last_invocation.load()));
  }
  s.last_invocation = invocation;

  EngineContext ctx;
  ctx.params = cfg.params;
  ctx.party = opts_.id;
  ctx.keys = cfg.keys_for(opts_.id);
  ctx.session = cfg.session_id;
  ctx.invocation = invocation;
  auto engine = make_engine(spec, ctx, std::move(inputs), batch);

  std::array<std::shared_ptr<TcpStream>, 3> links;
  for (int p = 0; p < 3; ++p) {
    if (p != opts_.id) links[p] = peer(s, p);
  }

  ChannelMeter meter;
  for (int round : protocol_rounds(spec)) {
    auto frames = frames_for_round(spec, cfg, invocation, batch, opts_.id, round, engine->send(round));
    std::vector<std::future<void>> sends;
    for (const auto& f : frames) {
      meter.record(f.from, f.to, round, f.header.count, f.bytes.size() - kHeaderSize, f.bytes.size());
      if (opts_.on_frame) opts_.on_frame(f);
      sends.push_back(std::async(std::launch::async, [l = links[f.to], &f] { l->send_frame(f.bytes); }));
    }
    if (round == opts_.crash_after_round) {
      for (auto& f : sends) f.get();
      log("crash hook fired after round " + std::to_string(round));
      std::_Exit(3);
    }

    auto inbound = expected_inbound(spec, cfg.params, batch, opts_.id, round);
    std::vector<std::vector<Word>> got;
    std::exception_ptr failed;
    for (const auto& t : inbound) {
      try {
        auto bytes = links[t.from]->recv_frame(eb, t.elements * eb);
        got.push_back(accept_frame(bytes, spec, cfg, invocation, t));
      } catch (...) {
        failed = std::current_exception();
        break;
      }
    }
    for (auto& f : sends) f.get();
    if (failed) std::rethrow_exception(failed);
    for (std::size_t i = 0; i < inbound.size(); ++i) engine->receive(round, inbound[i].from, std::move(got[i]));
  }

  auto out = engine->output();
  const auto proto = static_cast<std::uint8_t>(spec.kind);
  client.send_frame(encode_frame(reply_header(cfg, opts_.id, proto, invocation, tag::output), out, eb));
  client.send_frame(encode_text_frame(reply_header(cfg, opts_.id, proto, invocation, tag::report), meter.to_json()));
  log(std::string(kind_name(spec.kind)) + " x" + std::to_string(batch) + " invocation " + std::to_string(invocation) +
      " done");
}

namespace {

std::atomic<PartyServer*> g_server{nullptr};

extern "C" void on_signal(int) {
  if (auto* s = g_server.load()) s->stop();
}

}  // namespace

int run_party_process(PartyOptions opts) {
  PartyServer server(std::move(opts));
  server.bind();
  g_server = &server;
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  std::signal(SIGPIPE, SIG_IGN);
  server.run();
  g_server = nullptr;
  return 0;
}

}  // namespace b3pc
