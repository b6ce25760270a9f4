#pragma once

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <ostream>
#include <set>
#include <vector>

#include "b3pc/net.hpp"
#include "b3pc/session_config.hpp"
#include "b3pc/simulator.hpp"

namespace b3pc {

struct PartyOptions {
  int id = 0;
  // One process may serve several sessions; all must place this party at the same port.
  std::vector<SessionConfig> sessions;
  std::chrono::milliseconds io_timeout{30000};
  // Debug hook: exit the process right after sending this round.
  int crash_after_round = -1;
  std::ostream* log = nullptr;
  // Sees every frame this party sends to a peer (tests compare against the simulator).
  std::function<void(const TranscriptFrame&)> on_frame;
};

class PartyServer {
 public:
  explicit PartyServer(PartyOptions opts);
  ~PartyServer();

  // Binds the listening socket; run() then serves until stop().
  void bind();
  std::uint16_t port() const { return listener_.port(); }
  void run();
  void stop() { stopping_ = true; }

 private:
  struct Session;

  void serve_connection(TcpStream conn);
  void serve_client(Session& s, TcpStream& conn, const FrameHeader& hello);
  void run_job(Session& s, TcpStream& client, std::uint32_t invocation, const std::string& job_text,
               std::vector<Word> inputs);
  std::shared_ptr<TcpStream> peer(Session& s, int other);
  void drop_links(Session& s);
  void log(const std::string& line);
  void track(TcpStream* c, bool live);

  PartyOptions opts_;
  TcpListener listener_;
  std::map<std::uint64_t, std::unique_ptr<Session>> sessions_;
  std::atomic<bool> stopping_{false};
  std::mutex log_mu_;
  // Connection threads are detached; stop() waits for the count to drain.
  std::mutex workers_mu_;
  std::condition_variable workers_cv_;
  int workers_ = 0;
  std::set<TcpStream*> live_;
};

// Installs SIGINT/SIGTERM handlers and serves until one arrives.
int run_party_process(PartyOptions opts);

}  // namespace b3pc
