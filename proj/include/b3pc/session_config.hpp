#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "b3pc/prg.hpp"
#include "b3pc/ring.hpp"

namespace b3pc {

struct SessionSeeds {
  Seed s01, s02, s12, s012, s2;

  static SessionSeeds random();
  // Deterministic seeds from a pin (any byte string, usually hex from the CLI).
  static SessionSeeds derive(const std::string& pin);
  KeyRing keys_for(int party) const { return KeyRing::for_party(party, s01, s02, s12, s012, s2); }
};

struct PartyEndpoint {
  int id = 0;
  std::string host = "127.0.0.1";
  std::uint16_t port = 0;
};

struct SessionConfig {
  std::uint64_t session_id = 1;
  RingParams params;
  std::string sharing = "ass";  // "ass" or "rss"
  SessionSeeds seeds;
  std::array<PartyEndpoint, 3> parties;
  std::size_t batch = 1;

  static SessionConfig parse(const std::string& json_text);
  static SessionConfig load(const std::string& path);
  std::string dump() const;

  // Throws std::invalid_argument; returns advisory warnings.
  std::vector<std::string> validate() const;
  KeyRing keys_for(int party) const { return seeds.keys_for(party); }
};

std::string session_hex(std::uint64_t id);
std::uint64_t parse_session_id(const std::string& text);

}  // namespace b3pc
