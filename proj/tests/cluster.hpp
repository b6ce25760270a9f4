#pragma once

// Three parties on loopback, either as threads in this process or as
// separate CLI processes.

#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <memory>
#include <string>
#include <thread>
#include <vector>

#include "b3pc/net.hpp"
#include "b3pc/party_server.hpp"
#include "harness.hpp"

namespace cluster {

// Ports the kernel handed out a moment ago; good enough on a quiet loopback.
inline std::vector<std::uint16_t> free_ports(std::size_t n) {
  std::vector<b3pc::TcpListener> hold;
  std::vector<std::uint16_t> out;
  for (std::size_t i = 0; i < n; ++i) {
    hold.push_back(b3pc::TcpListener::bind("127.0.0.1", 0));
    out.push_back(hold.back().port());
  }
  return out;
}

inline b3pc::SessionConfig loopback_session(unsigned ell, unsigned ellx, const std::string& pin, std::uint64_t id,
                                            const std::vector<std::uint16_t>& ports) {
  auto cfg = harness::sim_session(ell, ellx, pin, id);
  for (int p = 0; p < 3; ++p) {
    cfg.parties[p].id = p;
    cfg.parties[p].host = "127.0.0.1";
    cfg.parties[p].port = ports[p];
  }
  return cfg;
}

class Threads {
 public:
  // on_frame[p] observes party p's outbound peer frames.
  explicit Threads(const std::vector<b3pc::SessionConfig>& sessions,
                   std::array<std::function<void(const b3pc::TranscriptFrame&)>, 3> on_frame = {}) {
    for (int p = 0; p < 3; ++p) {
      b3pc::PartyOptions o;
      o.id = p;
      o.sessions = sessions;
      o.io_timeout = std::chrono::milliseconds(5000);
      o.on_frame = on_frame[p];
      servers_[p] = std::make_unique<b3pc::PartyServer>(std::move(o));
      servers_[p]->bind();
    }
    for (int p = 0; p < 3; ++p) threads_.emplace_back([this, p] { servers_[p]->run(); });
  }
  ~Threads() {
    for (auto& s : servers_) s->stop();
    for (auto& t : threads_) t.join();
  }

 private:
  std::array<std::unique_ptr<b3pc::PartyServer>, 3> servers_;
  std::vector<std::thread> threads_;
};

class Processes {
 public:
  // configs are written under dir; extra[p] is appended to party p's command line.
  Processes(const std::string& cli, const std::filesystem::path& dir, const std::vector<b3pc::SessionConfig>& sessions,
            std::array<std::vector<std::string>, 3> extra = {}) {
    std::filesystem::create_directories(dir);
    std::vector<std::string> paths;
    for (const auto& s : sessions) {
      auto path = dir / ("session-" + b3pc::session_hex(s.session_id) + ".json");
      std::ofstream(path) << s.dump();
      paths.push_back(path.string());
    }
    for (int p = 0; p < 3; ++p) {
      std::vector<std::string> args = {cli, "party", "--id", std::to_string(p), "--quiet"};
      for (const auto& path : paths) {
        args.push_back("--config");
        args.push_back(path);
      }
      args.insert(args.end(), extra[p].begin(), extra[p].end());
      pids_[p] = spawn(args);
    }
  }
  ~Processes() {
    for (pid_t pid : pids_) {
      if (pid > 0) ::kill(pid, SIGTERM);
    }
    for (pid_t pid : pids_) {
      if (pid > 0) reap(pid);
    }
  }

  // Exit status once the process is gone, -1 while it runs.
  int exited(int party) {
    int status = 0;
    if (pids_[party] <= 0) return done_[party];
    if (::waitpid(pids_[party], &status, WNOHANG) == pids_[party]) {
      pids_[party] = -1;
      done_[party] = WIFEXITED(status) ? WEXITSTATUS(status) : 128 + WTERMSIG(status);
      return done_[party];
    }
    return -1;
  }

 private:
  static pid_t spawn(const std::vector<std::string>& args) {
    pid_t pid = ::fork();
    if (pid == 0) {
      std::vector<char*> argv;
      for (const auto& a : args) argv.push_back(const_cast<char*>(a.c_str()));
      argv.push_back(nullptr);
      ::execv(argv[0], argv.data());
      ::_exit(127);
    }
    return pid;
  }
  static void reap(pid_t pid) {
    for (int i = 0; i < 100; ++i) {
      int status = 0;
      if (::waitpid(pid, &status, WNOHANG) == pid) return;
      std::this_thread::sleep_for(std::chrono::milliseconds(50));
    }
    ::kill(pid, SIGKILL);
    ::waitpid(pid, nullptr, 0);
  }

  std::array<pid_t, 3> pids_{-1, -1, -1};
  std::array<int, 3> done_{-1, -1, -1};
};

}  // namespace cluster
