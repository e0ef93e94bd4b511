#include "popsim/engine.hpp"

namespace popsim {

TrialSummary summarize_trials(std::span<const TrialResult> results) {
  TrialSummary s;
  s.trials = results.size();
  std::vector<double> steps;
  steps.reserve(results.size());
  for (const auto& r : results) {
    if (r.stabilization_step) {
      ++s.stabilized;
      steps.push_back(static_cast<double>(*r.stabilization_step));
    } else {
      ++s.failures;
    }
    s.invariant_violations += r.invariant_violations;
    for (const auto& [name, value] : r.counters) s.counters[name] += value;
  }
  s.steps = summarize(steps);
  return s;
}

}  // namespace popsim
