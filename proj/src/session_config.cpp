#include "b3pc/session_config.hpp"

#include <sodium.h>

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace b3pc {

namespace {

Seed derived(const std::string& pin, SeedLabel label) {
  if (sodium_init() < 0) throw std::runtime_error("libsodium initialisation failed");
  Seed s;
  s.label = label;
  std::string msg = pin + "/" + seed_label_name(label);
  crypto_generichash(s.key.data(), s.key.size(), reinterpret_cast<const unsigned char*>(msg.data()), msg.size(),
                     nullptr, 0);
  return s;
}

}  // namespace

SessionSeeds SessionSeeds::random() {
  return {random_seed(SeedLabel::S01), random_seed(SeedLabel::S02), random_seed(SeedLabel::S12),
          random_seed(SeedLabel::S012), random_seed(SeedLabel::S2)};
}

SessionSeeds SessionSeeds::derive(const std::string& pin) {
  return {derived(pin, SeedLabel::S01), derived(pin, SeedLabel::S02), derived(pin, SeedLabel::S12),
          derived(pin, SeedLabel::S012), derived(pin, SeedLabel::S2)};
}

std::string session_hex(std::uint64_t id) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(id));
  return buf;
}

std::uint64_t parse_session_id(const std::string& text) {
  std::string t = text;
  if (t.rfind("0x", 0) == 0) t = t.substr(2);
  if (t.empty() || t.size() > 16) throw std::invalid_argument("session id must be up to 16 hex digits");
  std::size_t used = 0;
  std::uint64_t v = std::stoull(t, &used, 16);
  if (used != t.size()) throw std::invalid_argument("session id must be hex");
  return v;
}

SessionConfig SessionConfig::parse(const std::string& json_text) {
  auto j = nlohmann::json::parse(json_text);
  SessionConfig c;
  const auto& sid = j.at("session_id");
  c.session_id = sid.is_string() ? parse_session_id(sid.get<std::string>()) : sid.get<std::uint64_t>();
  c.params.ell = j.at("ell").get<unsigned>();
  c.params.ellx = j.at("ellx").get<unsigned>();
  c.params.frac_bits = j.value("frac_bits", c.params.ellx / 2);
  c.sharing = j.value("sharing", std::string("ass"));
  const auto& s = j.at("seeds");
  c.seeds.s01 = Seed::from_hex(s.at("s01").get<std::string>(), SeedLabel::S01);
  c.seeds.s02 = Seed::from_hex(s.at("s02").get<std::string>(), SeedLabel::S02);
  c.seeds.s12 = Seed::from_hex(s.at("s12").get<std::string>(), SeedLabel::S12);
  c.seeds.s012 = Seed::from_hex(s.at("s012").get<std::string>(), SeedLabel::S012);
  c.seeds.s2 = Seed::from_hex(s.at("s2").get<std::string>(), SeedLabel::S2);
  const auto& parties = j.at("parties");
  if (parties.size() != 3) throw std::invalid_argument("config needs exactly three parties");
  for (const auto& p : parties) {
    int id = p.at("id").get<int>();
    if (id < 0 || id > 2) throw std::invalid_argument("party id must be 0, 1 or 2");
    c.parties[id] = {id, p.value("host", std::string("127.0.0.1")), p.at("port").get<std::uint16_t>()};
  }
  c.batch = j.value("batch", std::size_t{1});
  c.validate();
  return c;
}

SessionConfig SessionConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

std::string SessionConfig::dump() const {
  nlohmann::json j;
  j["session_id"] = session_hex(session_id);
  j["ell"] = params.ell;
  j["ellx"] = params.ellx;
  j["frac_bits"] = params.frac_bits;
  j["sharing"] = sharing;
  j["seeds"] = {{"s01", seeds.s01.to_hex()}, {"s02", seeds.s02.to_hex()}, {"s12", seeds.s12.to_hex()},
                {"s012", seeds.s012.to_hex()}, {"s2", seeds.s2.to_hex()}};
  j["parties"] = nlohmann::json::array();
  for (const auto& p : parties) j["parties"].push_back({{"id", p.id}, {"host", p.host}, {"port", p.port}});
  j["batch"] = batch;
  return j.dump(2);
}

std::vector<std::string> SessionConfig::validate() const {
  params.validate(true);
  if (sharing != "ass" && sharing != "rss") throw std::invalid_argument("sharing must be \"ass\" or \"rss\"");
  if (batch == 0) throw std::invalid_argument("batch must be positive");
  std::vector<std::string> warnings;
  if (params.ell - params.ellx < 20) {
    warnings.push_back("ell - ellx < 20: sign tests fail silently with probability up to ellx * 2^(ellx+1-ell)");
  }
  return warnings;
}

}  // namespace b3pc
