#include "b3pc/meter.hpp"

#include <json.hpp>

#include <stdexcept>

namespace b3pc {

void ChannelMeter::record(int from, int to, int round, std::uint64_t elements, std::uint64_t payload_bytes,
                          std::uint64_t frame_bytes) {
  if (from < 0 || from > 2 || to < 0 || to > 2 || from == to) throw std::invalid_argument("bad channel");
  bytes_[from][to] += payload_bytes;
  elements_[from][to] += elements;
  frame_bytes_[from][to] += frame_bytes;
  messages_[from][to] += 1;
  rounds_.insert(round);
}

void ChannelMeter::merge(const ChannelMeter& o) {
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      bytes_[i][j] += o.bytes_[i][j];
      elements_[i][j] += o.elements_[i][j];
      frame_bytes_[i][j] += o.frame_bytes_[i][j];
      messages_[i][j] += o.messages_[i][j];
    }
  }
  rounds_.insert(o.rounds_.begin(), o.rounds_.end());
}

std::uint64_t ChannelMeter::total_bytes() const {
  std::uint64_t t = 0;
  for (const auto& row : bytes_) {
    for (auto v : row) t += v;
  }
  return t;
}

int ChannelMeter::rounds() const {
  int n = 0;
  for (int r : rounds_) n += r > 0 ? 1 : 0;
  return n;
}

std::string ChannelMeter::to_json() const {
  nlohmann::json j;
  j["bytes"] = bytes_;
  j["elements"] = elements_;
  j["frame_bytes"] = frame_bytes_;
  j["messages"] = messages_;
  j["rounds"] = rounds_;
  return j.dump();
}

ChannelMeter ChannelMeter::from_json(const std::string& text) {
  auto j = nlohmann::json::parse(text);
  ChannelMeter m;
  m.bytes_ = j.at("bytes").get<Grid>();
  m.elements_ = j.at("elements").get<Grid>();
  m.frame_bytes_ = j.at("frame_bytes").get<Grid>();
  m.messages_ = j.at("messages").get<Grid>();
  m.rounds_ = j.at("rounds").get<std::set<int>>();
  return m;
}

}  // namespace b3pc
