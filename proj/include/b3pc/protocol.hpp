#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "b3pc/plu_spec.hpp"
#include "b3pc/prg.hpp"
#include "b3pc/ring.hpp"

namespace b3pc {

enum class Kind : std::uint8_t {
  drelu = 1,
  msb = 2,
  ucmp = 3,
  equality = 4,
  relu = 5,
  abs = 6,
  dynamic_relu = 7,
  max2 = 8,
  min2 = 9,
  funnel = 10,
  plu = 11,
  max_n = 12,
  min_n = 13,
  sort_desc = 14,
  sort_asc = 15,
  median = 16,
  rss_drelu = 17,
  rss_relu = 18,
};

const char* kind_name(Kind k);
// Accepts the names above plus "relu6" (PLU preset) and "max9"-style aliases
// handled by the caller. Unknown names throw std::invalid_argument.
Kind kind_from_name(const std::string& name);
bool is_rss(Kind k);

struct ProtocolSpec {
  Kind kind = Kind::drelu;
  std::size_t n = 2;  // inputs per instance for max_n, min_n, sort_*, median
  std::int64_t alpha0 = 0, alpha1 = 1;
  std::int64_t funnel_scale = 0, funnel_offset = 0;
  PluSpec plu;
  bool fast_sort = false;  // extract max and min together when building M

  std::size_t input_arity() const;
  std::size_t output_arity() const;  // per instance; 0 for ucmp (verdict stays at P2)
  // Throws std::invalid_argument on bad parameters.
  void validate() const;

  std::string to_json() const;
  static ProtocolSpec from_json(const std::string& text);
  static ProtocolSpec named(const std::string& name, unsigned frac_bits = 0);
};

// One directed message of the static schedule, counted per instance.
struct Transfer {
  int round;
  int from;
  int to;
  std::size_t elements;
};

// Round 0 is the RSS prologue; online rounds are 1 and 2.
std::vector<Transfer> schedule(const ProtocolSpec& spec, const RingParams& params, std::size_t batch);
int online_rounds(const std::vector<Transfer>& sched);

// Randomness P0 and P1 draw jointly from seed01 for each sign test.
class MaskSource {
 public:
  virtual ~MaskSource() = default;
  virtual unsigned flip() = 0;
  virtual Word mask(const Ring& ring) = 0;  // non-zero
  virtual std::vector<std::uint32_t> permutation(std::size_t n) = 0;
  virtual Word pad(const Ring& ring) = 0;   // re-randomises w shares
};

class StreamMaskSource : public MaskSource {
 public:
  explicit StreamMaskSource(PrgStream s) : s_(std::move(s)) {}
  unsigned flip() override { return s_.draw_bit(); }
  Word mask(const Ring& ring) override { return s_.draw_nonzero(ring); }
  std::vector<std::uint32_t> permutation(std::size_t n) override { return s_.permutation(n); }
  Word pad(const Ring& ring) override { return s_.draw_ring(ring); }

 private:
  PrgStream s_;
};

// What P0/P1 computed for one sign-test array, in slot order [*, 0, 1, .., ellx].
struct SignTrace {
  unsigned t = 0;
  std::vector<Word> u, v;         // this party's shares, before masking
  std::vector<Word> masks;
  std::vector<std::uint32_t> perm;
  std::vector<Word> w;            // this party's shares as sent
};

// What P2 saw.
struct P2Trace {
  std::vector<std::vector<Word>> w;  // reconstructed arrays in arrival order
  std::vector<unsigned> verdicts;    // one per array
  std::vector<unsigned> selection;   // MAX/MIN/MED: theta; SORT: row-major M
};

struct EngineContext {
  RingParams params;
  int party = 0;
  KeyRing keys;
  std::uint64_t session = 0;
  std::uint32_t invocation = 0;
  // Test hooks.
  std::function<std::unique_ptr<MaskSource>()> mask_override;
  std::vector<SignTrace>* sign_trace = nullptr;
  P2Trace* p2_trace = nullptr;
};

struct Message {
  int to;
  std::vector<Word> elems;
};

// One party's side of a protocol invocation over a batch. The runtime calls
// send(r) for each round in order and delivers every message of round r
// before calling send(r + 1).
class PartyEngine {
 public:
  virtual ~PartyEngine() = default;
  virtual std::vector<Message> send(int round) = 0;
  virtual void receive(int round, int from, std::vector<Word> elems) = 0;
  // ASS: one share per output element on P0/P1, nothing on P2 (ucmp: P2's
  // verdicts). RSS: (first, second) per output element on every party.
  virtual std::vector<Word> output() = 0;
};

// inputs: ASS P0/P1 one share per input element; P2 nothing.
// RSS: (first, second) per input element on every party.
std::unique_ptr<PartyEngine> make_engine(const ProtocolSpec& spec, const EngineContext& ctx,
                                         std::vector<Word> inputs, std::size_t batch);

// Stream purposes inside one invocation.
namespace purpose {
inline constexpr std::uint16_t sign_masks = 1;
inline constexpr std::uint16_t triples = 2;
inline constexpr std::uint16_t verdict = 3;
inline constexpr std::uint16_t input_shuffle = 4;
inline constexpr std::uint16_t rss_t = 5;
inline constexpr std::uint16_t rss_s = 6;
inline constexpr std::uint16_t rss_zero_st = 7;
inline constexpr std::uint16_t rss_zero_ux = 8;
}  // namespace purpose

}  // namespace b3pc
