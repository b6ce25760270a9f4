#pragma once

#include <array>
#include <cstdint>
#include <set>
#include <string>

namespace b3pc {

// Per directed channel counters for one invocation. "bytes" counts payload
// only (elements at ell/8 bytes each), "frame_bytes" adds the headers.
class ChannelMeter {
 public:
  void record(int from, int to, int round, std::uint64_t elements, std::uint64_t payload_bytes,
              std::uint64_t frame_bytes);
  void merge(const ChannelMeter& other);

  std::uint64_t bytes(int from, int to) const { return bytes_[from][to]; }
  std::uint64_t bits(int from, int to) const { return 8 * bytes_[from][to]; }
  std::uint64_t elements(int from, int to) const { return elements_[from][to]; }
  std::uint64_t frame_bytes(int from, int to) const { return frame_bytes_[from][to]; }
  std::uint64_t messages(int from, int to) const { return messages_[from][to]; }
  std::uint64_t total_bytes() const;

  // Distinct online round tags that carried traffic; the schedule is static,
  // so this is the length of the dependency chain.
  int rounds() const;
  int prologue_rounds() const { return rounds_.count(0) ? 1 : 0; }

  std::string to_json() const;
  static ChannelMeter from_json(const std::string& text);

 private:
  using Grid = std::array<std::array<std::uint64_t, 3>, 3>;
  Grid bytes_{}, elements_{}, frame_bytes_{}, messages_{};
  std::set<int> rounds_;
};

}  // namespace b3pc
