#include "b3pc/protocol.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <set>
#include <stdexcept>

#include "engines.hpp"

namespace b3pc {

namespace {

struct NamedKind {
  const char* name;
  Kind kind;
};

constexpr NamedKind kNames[] = {
    {"drelu", Kind::drelu},         {"msb", Kind::msb},
    {"ucmp", Kind::ucmp},           {"equality", Kind::equality},
    {"relu", Kind::relu},           {"abs", Kind::abs},
    {"dynrelu", Kind::dynamic_relu}, {"max2", Kind::max2},
    {"min2", Kind::min2},           {"funnel", Kind::funnel},
    {"plu", Kind::plu},             {"max", Kind::max_n},
    {"min", Kind::min_n},           {"sort", Kind::sort_desc},
    {"sort-asc", Kind::sort_asc},   {"med", Kind::median},
    {"rss-drelu", Kind::rss_drelu}, {"rss-relu", Kind::rss_relu},
};

std::size_t ceil_half(std::size_t v) { return (v + 1) / 2; }

}  // namespace

const char* kind_name(Kind k) {
  for (const auto& n : kNames) {
    if (n.kind == k) return n.name;
  }
  return "unknown";
}

Kind kind_from_name(const std::string& name) {
  for (const auto& n : kNames) {
    if (name == n.name) return n.kind;
  }
  throw std::invalid_argument("unknown protocol '" + name + "'");
}

bool is_rss(Kind k) { return k == Kind::rss_drelu || k == Kind::rss_relu; }

std::size_t ProtocolSpec::input_arity() const {
  switch (kind) {
    case Kind::ucmp:
    case Kind::equality:
    case Kind::max2:
    case Kind::min2: return 2;
    case Kind::max_n:
    case Kind::min_n:
    case Kind::sort_desc:
    case Kind::sort_asc:
    case Kind::median: return n;
    default: return 1;
  }
}

std::size_t ProtocolSpec::output_arity() const {
  switch (kind) {
    case Kind::ucmp: return 0;
    case Kind::sort_desc:
    case Kind::sort_asc: return n;
    default: return 1;
  }
}

void ProtocolSpec::validate() const {
  switch (kind) {
    case Kind::plu: plu.validate(); break;
    case Kind::max_n:
    case Kind::min_n:
    case Kind::sort_desc:
    case Kind::sort_asc:
    case Kind::median:
      if (n < 2) throw std::invalid_argument("selection protocols need n >= 2");
      break;
    default: break;
  }
}

std::string ProtocolSpec::to_json() const {
  nlohmann::json j;
  j["kind"] = kind_name(kind);
  j["n"] = n;
  j["alpha0"] = alpha0;
  j["alpha1"] = alpha1;
  j["funnel_scale"] = funnel_scale;
  j["funnel_offset"] = funnel_offset;
  j["fast_sort"] = fast_sort;
  if (kind == Kind::plu) {
    j["plu"] = {{"gamma", plu.gamma}, {"alpha", plu.alpha}, {"beta", plu.beta},
                {"skip_zero_slopes", plu.skip_zero_slopes}};
  }
  return j.dump();
}

ProtocolSpec ProtocolSpec::from_json(const std::string& text) {
  ProtocolSpec s;
  auto j = nlohmann::json::parse(text);
  s.kind = kind_from_name(j.at("kind").get<std::string>());
  s.n = j.value("n", std::size_t{2});
  s.alpha0 = j.value("alpha0", std::int64_t{0});
  s.alpha1 = j.value("alpha1", std::int64_t{1});
  s.funnel_scale = j.value("funnel_scale", std::int64_t{0});
  s.funnel_offset = j.value("funnel_offset", std::int64_t{0});
  s.fast_sort = j.value("fast_sort", false);
  if (j.contains("plu")) {
    const auto& p = j["plu"];
    s.plu.gamma = p.at("gamma").get<std::vector<std::int64_t>>();
    s.plu.alpha = p.at("alpha").get<std::vector<std::int64_t>>();
    s.plu.beta = p.at("beta").get<std::vector<std::int64_t>>();
    s.plu.skip_zero_slopes = p.value("skip_zero_slopes", false);
  }
  s.validate();
  return s;
}

ProtocolSpec ProtocolSpec::named(const std::string& raw, unsigned frac_bits) {
  std::string name = raw;
  std::transform(name.begin(), name.end(), name.begin(), [](unsigned char c) { return std::tolower(c); });
  ProtocolSpec s;
  if (name == "relu6") {
    s.kind = Kind::plu;
    s.plu = PluSpec::relu6(frac_bits);
    return s;
  }
  // max9, min4, sort3, sort-asc3, med5 ...
  for (const char* prefix : {"max", "min", "sort-asc", "sort", "med"}) {
    std::string p(prefix);
    if (name.size() > p.size() && name.compare(0, p.size(), p) == 0 &&
        std::all_of(name.begin() + static_cast<std::ptrdiff_t>(p.size()), name.end(),
                    [](unsigned char c) { return std::isdigit(c); })) {
      s.kind = kind_from_name(p);
      s.n = std::stoul(name.substr(p.size()));
      if (s.kind == Kind::max_n && s.n == 2) s.kind = Kind::max2;
      if (s.kind == Kind::min_n && s.n == 2) s.kind = Kind::min2;
      s.validate();
      return s;
    }
  }
  s.kind = kind_from_name(name);
  return s;
}

std::vector<Transfer> schedule(const ProtocolSpec& spec, const RingParams& params, std::size_t batch) {
  spec.validate();
  const std::size_t L = params.ellx + 2;
  std::vector<Transfer> t;
  auto add = [&](int round, int from, int to, std::size_t per_instance) {
    if (per_instance > 0) t.push_back({round, from, to, per_instance * batch});
  };
  auto relu_like = [&](std::size_t arrays) {
    add(1, 0, 2, arrays * L);
    add(1, 1, 2, arrays * L);
    add(1, 0, 1, 1);
    add(1, 1, 0, 1);
  };
  switch (spec.kind) {
    case Kind::drelu:
    case Kind::msb:
      add(1, 0, 2, L);
      add(1, 1, 2, L);
      add(2, 2, 0, 1);
      add(2, 2, 1, 1);
      break;
    case Kind::ucmp:
      add(1, 0, 2, L);
      add(1, 1, 2, L);
      break;
    case Kind::equality:
      add(1, 0, 2, 2 * L);
      add(1, 1, 2, 2 * L);
      add(2, 2, 0, 1);
      add(2, 2, 1, 1);
      break;
    case Kind::relu:
    case Kind::abs:
    case Kind::dynamic_relu:
    case Kind::max2:
    case Kind::min2:
    case Kind::funnel:
      relu_like(1);
      add(2, 2, 0, 1);
      add(2, 2, 1, 2);
      break;
    case Kind::plu: {
      const std::size_t pieces = spec.plu.pieces();
      std::size_t slots = 0;
      for (auto a : spec.plu.alpha) slots += (spec.plu.skip_zero_slopes && a == 0) ? 0 : 1;
      TripleLayout layout = TripleLayout::shared_a(slots);
      relu_like(spec.plu.gamma.size());
      add(2, 2, 0, slots + pieces + layout.corrections_to_p0());
      add(2, 2, 1, slots + pieces + layout.corrections_to_p1());
      break;
    }
    case Kind::max_n:
    case Kind::min_n:
    case Kind::median:
    case Kind::sort_desc:
    case Kind::sort_asc: {
      const std::size_t n = spec.n;
      const std::size_t pairs = n * (n - 1) / 2;
      const bool sort = spec.kind == Kind::sort_desc || spec.kind == Kind::sort_asc;
      const std::size_t slots = sort ? n * n : n;
      add(1, 0, 2, pairs * L);
      add(1, 1, 2, pairs * L);
      add(1, 0, 1, n);
      add(1, 1, 0, n);
      add(2, 2, 0, slots + ceil_half(slots));
      add(2, 2, 1, slots + slots / 2);
      break;
    }
    case Kind::rss_drelu:
    case Kind::rss_relu:
      add(0, 2, 0, 1);
      add(1, 0, 2, L + 1);
      add(1, 1, 2, L);
      add(1, 1, 0, 1);
      add(1, 2, 1, 1);
      add(2, 2, 0, 1);
      add(2, 2, 1, 1);
      if (spec.kind == Kind::rss_relu) {
        add(2, 0, 2, 1);
        add(2, 1, 0, 1);
        add(2, 2, 1, 1);
      }
      break;
  }
  // Same (round, from, to) entries merge into one frame.
  std::vector<Transfer> merged;
  for (const auto& tr : t) {
    auto it = std::find_if(merged.begin(), merged.end(), [&](const Transfer& m) {
      return m.round == tr.round && m.from == tr.from && m.to == tr.to;
    });
    if (it == merged.end()) {
      merged.push_back(tr);
    } else {
      it->elements += tr.elements;
    }
  }
  return merged;
}

int online_rounds(const std::vector<Transfer>& sched) {
  std::set<int> rounds;
  for (const auto& t : sched) {
    if (t.round > 0) rounds.insert(t.round);
  }
  return static_cast<int>(rounds.size());
}

std::unique_ptr<PartyEngine> make_engine(const ProtocolSpec& spec, const EngineContext& ctx,
                                         std::vector<Word> inputs, std::size_t batch) {
  spec.validate();
  ctx.params.validate();
  if (ctx.party < 0 || ctx.party > 2) throw std::invalid_argument("party id must be 0, 1 or 2");
  if (ctx.keys.party() != ctx.party) throw std::invalid_argument("key ring belongs to a different party");
  const std::size_t per_party = is_rss(spec.kind) ? 2 * spec.input_arity() : spec.input_arity();
  const bool holds_input = is_rss(spec.kind) || ctx.party != 2;
  if (holds_input && inputs.size() != per_party * batch) throw std::invalid_argument("input length does not match batch");
  if (!holds_input && !inputs.empty()) throw std::invalid_argument("P2 holds no additive share of the input");
  switch (spec.kind) {
    case Kind::drelu:
    case Kind::msb:
    case Kind::ucmp:
    case Kind::equality: return detail::make_sign_engine(spec, ctx, std::move(inputs), batch);
    case Kind::relu:
    case Kind::abs:
    case Kind::dynamic_relu:
    case Kind::max2:
    case Kind::min2:
    case Kind::funnel: return detail::make_relu_engine(spec, ctx, std::move(inputs), batch);
    case Kind::plu: return detail::make_plu_engine(spec, ctx, std::move(inputs), batch);
    case Kind::max_n:
    case Kind::min_n:
    case Kind::median:
    case Kind::sort_desc:
    case Kind::sort_asc: return detail::make_select_engine(spec, ctx, std::move(inputs), batch);
    case Kind::rss_drelu:
    case Kind::rss_relu: return detail::make_rss_engine(spec, ctx, std::move(inputs), batch);
  }
  throw std::invalid_argument("unknown protocol kind");
}

}  // namespace b3pc
