#include "popsim/maxid.hpp"

#include <cmath>
#include <stdexcept>

namespace popsim {

unsigned maxid_params(std::size_t n, bool regular) {
  if (n < 2) throw std::invalid_argument("maxid_params: n must be at least 2");
  const double factor = regular ? 3.0 : 4.0;
  const auto k = static_cast<unsigned>(std::ceil(factor * std::log2(static_cast<double>(n)) - 1e-12));
  return k;
}

double maxid_state_count(unsigned k) { return 6.0 * (std::ldexp(1.0, static_cast<int>(k) + 1) - 1.0); }

namespace {

void append_bit(MaxIdState& s, std::uint64_t bit, std::uint64_t threshold) noexcept {
  if (s.id >= threshold) return;
  s.id = 2 * s.id + bit;
  if (s.id >= threshold) s.sub = token_init(true);
}

void adopt(MaxIdState& s, std::uint64_t partner_id, std::uint64_t threshold) noexcept {
  if (s.id < partner_id && partner_id >= threshold) {
    s.id = partner_id;
    s.sub = token_init(false);
  }
}

}  // namespace

std::pair<MaxIdState, MaxIdState> maxid_transition(MaxIdState a, MaxIdState b, unsigned k) noexcept {
  const std::uint64_t threshold = std::uint64_t{1} << k;
  append_bit(a, 0, threshold);
  append_bit(b, 1, threshold);
  const std::uint64_t id_a = a.id;
  adopt(a, b.id, threshold);
  adopt(b, id_a, threshold);
  auto [sa, sb] = token_transition(a.sub, b.sub);
  a.sub = sa;
  b.sub = sb;
  return {a, b};
}

bool maxid_stable(std::span<const MaxIdState> states, unsigned k) {
  if (states.empty()) return false;
  const std::uint64_t id = states.front().id;
  if (id < (std::uint64_t{1} << k)) return false;
  std::int64_t candidates = 0;
  for (const auto& s : states) {
    if (s.id != id) return false;
    candidates += (s.sub.role == Role::candidate);
  }
  return candidates == 1;
}

MaxIdProtocol::MaxIdProtocol(unsigned k) : k_(k), threshold_(std::uint64_t{1} << k) {
  if (k < 1 || k > 62) throw std::invalid_argument("maxid: k must be in 1..62");
}

bool MaxIdProtocol::valid(const State& s) const noexcept {
  if (s.id < 1 || s.id >= 2 * threshold_) return false;
  if (s.sub.role > Role::candidate || s.sub.token > Token::white) return false;
  return s.id >= threshold_ || s.sub == token_init(false);
}

MaxIdProtocol::Monitor::Monitor(const MaxIdProtocol& protocol, const Graph& g,
                                std::span<const State> states)
    : threshold_(protocol.threshold()), n_(g.node_count()) {
  for (const auto& s : states) {
    if (s.id < threshold_) continue;
    instances_[s.id].counts.add(s.sub);
    if (s.id > max_id_) {
      max_id_ = s.id;
      at_max_ = 0;
    }
    if (s.id == max_id_) ++at_max_;
  }
}

void MaxIdProtocol::Monitor::move(const State& before, const State& after, bool responder) {
  if (before.id >= threshold_) instances_[before.id].counts.add(before.sub, -1);
  if (after.id < threshold_) return;
  instances_[after.id].counts.add(after.sub);
  std::uint64_t appended = before.id;
  if (before.id < threshold_) {
    appended = 2 * before.id + (responder ? 1 : 0);
    if (appended >= threshold_) ++instances_[appended].starts;
  }
  if (after.id != appended) ++adoptions_;
  if (after.id == before.id) return;
  if (before.id == max_id_) --at_max_;
  if (after.id > max_id_) {
    max_id_ = after.id;
    at_max_ = 1;
  } else if (after.id == max_id_) {
    ++at_max_;
  }
}

void MaxIdProtocol::Monitor::observe(const Interaction&, const State& a0, const State& b0,
                                     const State& a1, const State& b1) {
  if (a1.id < a0.id || b1.id < b0.id) ++violations_;
  move(a0, a1, false);
  move(b0, b1, true);
  if (max_id_ >= threshold_) {
    const TokenCounts& c = instances_[max_id_].counts;
    if (!c.conserved()) ++violations_;
  }
}

bool MaxIdProtocol::Monitor::stable() const noexcept {
  if (at_max_ != n_ || max_id_ < threshold_) return false;
  const auto it = instances_.find(max_id_);
  return it != instances_.end() && it->second.counts.candidates == 1;
}

std::int64_t MaxIdProtocol::Monitor::max_starts() const {
  const auto it = instances_.find(max_id_);
  return it == instances_.end() ? 0 : it->second.starts;
}

void MaxIdProtocol::Monitor::report(Counters& out) const {
  std::int64_t started = 0;
  for (const auto& [id, inst] : instances_) started += inst.starts;
  out["instances_started"] += started;
  out["adoptions"] += adoptions_;
  out["duplicate_max"] += (max_starts() >= 2) ? 1 : 0;
}

}  // namespace popsim
