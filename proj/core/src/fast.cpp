#include "popsim/fast.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace popsim {

FastParams fast_params(double b_est, std::size_t max_degree, std::size_t m, std::size_t n, double tau,
                       unsigned alpha) {
  if (!(b_est > 0) || max_degree == 0 || m == 0) {
    throw std::invalid_argument("fast_params: B_est, max degree and m must be positive");
  }
  if (n < 2) throw std::invalid_argument("fast_params: n must be at least 2");
  if (!(tau >= 1)) throw std::invalid_argument("fast_params: tau must be at least 1");
  if (alpha < 2) throw std::invalid_argument("fast_params: alpha must be at least 2");

  FastParams p;
  p.tau = tau;
  p.alpha = alpha;
  const double ratio = b_est * static_cast<double>(max_degree) / static_cast<double>(m);
  const double h = 8.0 + std::ceil(std::log2(ratio) - 1e-12);
  p.h = static_cast<unsigned>(std::max(1.0, h));
  p.L = std::max(2u, static_cast<unsigned>(std::ceil(2.0 * tau * std::log2(static_cast<double>(n)) - 1e-12)));
  p.Lmax = alpha * p.L;
  return p;
}

double fast_state_count(const FastParams& p) {
  return static_cast<double>(p.h) * 2.0 * (p.Lmax + 1.0) * 7.0;
}

namespace {

void update(FastState& self, std::uint32_t partner_level, bool initiator, const FastParams& p) noexcept {
  const std::uint32_t start_level = self.level;
  bool completed = false;
  if (initiator) {
    if (++self.streak == p.h) {
      self.streak = 0;
      completed = true;
    }
  } else {
    self.streak = 0;
  }
  if (completed && self.leader) self.level = std::min(self.level + 1, p.Lmax);
  if (self.level < partner_level && partner_level >= p.L) self.leader = false;
  if (std::max(self.level, partner_level) >= p.L) self.level = std::max(self.level, partner_level);
  if (self.level == p.Lmax && start_level < p.Lmax) self.backup = token_init(self.leader);
}

}  // namespace

std::pair<FastState, FastState> fast_transition(FastState a, FastState b, const FastParams& params) noexcept {
  const std::uint32_t level_a = a.level;
  const std::uint32_t level_b = b.level;
  update(a, level_b, true, params);
  update(b, level_a, false, params);
  if (backup_active(a, params) && backup_active(b, params)) {
    auto [x, y] = token_transition(a.backup, b.backup);
    a.backup = x;
    b.backup = y;
  }
  return {a, b};
}

bool fast_stable(std::span<const FastState> states, const FastParams& params) {
  std::uint32_t max_level = 0;
  for (const auto& s : states) max_level = std::max(max_level, s.level);
  std::size_t leaders = 0;
  bool leader_at_max = false;
  for (const auto& s : states) {
    if (fast_output(s, params) == Output::leader) {
      ++leaders;
      leader_at_max = (s.level == max_level);
    }
  }
  return leaders == 1 && leader_at_max;
}

FastProtocol::FastProtocol(FastParams params, std::vector<bool> candidates)
    : params_(params), candidates_(std::move(candidates)) {
  if (params_.h < 1 || params_.L < 2 || params_.Lmax <= params_.L) {
    throw std::invalid_argument("fast protocol: need h >= 1, L >= 2 and Lmax > L");
  }
  if (!candidates_.empty() && std::none_of(candidates_.begin(), candidates_.end(), [](bool c) { return c; })) {
    throw std::invalid_argument("fast protocol: the candidate set must be nonempty");
  }
}

bool FastProtocol::valid(const State& s) const noexcept {
  if (s.streak >= params_.h || s.level > params_.Lmax) return false;
  if (s.backup.role > Role::candidate || s.backup.token > Token::white) return false;
  return backup_active(s, params_) || s.backup == TokenState{};
}

FastProtocol::Monitor::Monitor(const FastProtocol& protocol, const Graph&, std::span<const State> states)
    : params_(protocol.params()), leaders_at_(protocol.params().Lmax + 1, 0) {
  for (const auto& s : states) {
    max_level_ = std::max(max_level_, s.level);
    add(s, 1);
  }
}

void FastProtocol::Monitor::add(const State& s, std::int64_t sign) {
  if (fast_output(s, params_) == Output::leader) {
    leaders_ += sign;
    leaders_at_[s.level] += sign;
  }
  if (backup_active(s, params_)) {
    backup_.add(s.backup, sign);
    backup_nodes_ += sign;
  }
}

void FastProtocol::Monitor::observe(const Interaction&, const State& a0, const State& b0, const State& a1,
                                    const State& b1) {
  add(a0, -1);
  add(b0, -1);
  add(a1, 1);
  add(b1, 1);
  max_level_ = std::max({max_level_, a1.level, b1.level});
  demotions_ += (a0.leader && !a1.leader) + (b0.leader && !b1.leader);
  level_ups_ += (a1.level > a0.level) + (b1.level > b0.level);
  if (a1.level < a0.level || b1.level < b0.level) ++violations_;
  if (leaders_at_[max_level_] < 1) ++violations_;
  if (backup_nodes_ > 0 && !backup_.conserved()) ++violations_;
}

void FastProtocol::Monitor::report(Counters& out) const {
  out["demotions"] += demotions_;
  out["level_changes"] += level_ups_;
  out["final_max_level"] += max_level_;
  out["backup_nodes"] += backup_nodes_;
}

}  // namespace popsim
