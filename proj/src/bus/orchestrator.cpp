#include "afc/bus/orchestrator.hpp"

#include "afc/errors.hpp"

namespace afc::bus {

std::vector<std::vector<double>> Orchestrator::collect(Field field, std::uint64_t step) {
  std::vector<std::vector<double>> out;
  out.reserve(static_cast<std::size_t>(n_streams()));
  for (int sim = 0; sim < n_sims_; ++sim) {
    for (int pe = 0; pe < n_jets_; ++pe) {
      const std::string k = key(sim, pe, field, step).str();
      auto payload = client_.wait_take(k, timeout_ms_);
      if (!payload) throw WorkerError("timeout waiting for " + k);
      out.push_back(std::move(*payload));
    }
  }
  return out;
}

void Orchestrator::publish_actions(std::uint64_t step, const std::vector<double>& actions) {
  if (actions.size() != static_cast<std::size_t>(n_streams()))
    throw WorkerError("orchestrator: action count mismatch");
  std::size_t i = 0;
  for (int sim = 0; sim < n_sims_; ++sim) {
    for (int pe = 0; pe < n_jets_; ++pe) {
      client_.put(key(sim, pe, Field::action, step).str(), {actions[i++]});
    }
  }
}

Orchestrator::StepData Orchestrator::orchestrate_step(std::uint64_t step, const ActFn& act) {
  StepData data;
  data.states = collect(Field::state, step);
  publish_actions(step, act(data.states));
  data.rewards = collect(Field::reward, step);
  return data;
}

void Orchestrator::broadcast_flag(std::uint64_t episode, double code) {
  for (int sim = 0; sim < n_sims_; ++sim) {
    try {
      client_.put(key(sim, 0, Field::flag, episode).str(), {code});
    } catch (const ProtocolError&) {
      // best effort during aborts; worker may already be gone
    }
  }
}

std::optional<double> Orchestrator::fault_flag(int sim, std::uint64_t episode) {
  auto payload = client_.get(key(sim, 0, Field::flag, kFaultFlagBase + episode).str());
  if (!payload || payload->empty()) return std::nullopt;
  return (*payload)[0];
}

}  // namespace afc::bus
