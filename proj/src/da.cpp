#include "matchkit/da.hpp"

#include <stdexcept>

namespace matchkit {

namespace {

Side outer_side(Wing w) { return w == Wing::Left ? Side::Left : Side::Right; }

Mask union_rejections(const NtuMarket& m, Side outer, Mask avail) {
  Mask rejected = 0;
  for (int a = 0; a < m.agent_count(); ++a) {
    Side s = m.agent_side(a);
    if (s == outer || s == Side::Center) rejected |= m.reject(a, avail);
  }
  return rejected;
}

} // namespace

PhaseResult primary_phase(const NtuMarket& m, Wing primary, Mask a_init,
                          int stage) {
  PhaseResult res;
  Mask a = a_init;
  int step = 1;
  while (true) {
    Mask b = union_rejections(m, outer_side(primary), a);
    res.steps.push_back({stage, primary, step, a, b});
    if (b != 0 && (a & ~b) != 0) {
      a &= ~b;
      ++step;
      continue;
    }
    res.final_set = a & ~b;
    return res;
  }
}

SecondaryPhaseResult secondary_phase(const NtuMarket& m, Wing primary,
                                     Mask a_k, int stage) {
  Wing secondary = primary == Wing::Left ? Wing::Right : Wing::Left;
  Mask secondary_all = m.wing_mask(secondary);
  Mask primary_all = m.wing_mask(primary);

  SecondaryPhaseResult res;
  Mask d = secondary_all;
  int step = 1;
  while (true) {
    Mask avail = a_k | d;
    Mask e = union_rejections(m, outer_side(secondary), avail);
    res.steps.push_back({stage, secondary, step, avail, e});
    // Iterate until no secondary-wing contract is rejected.  The final
    // rejection set must be computed at the terminal D: rejections of
    // primary contracts recorded in earlier steps may hinge on secondary
    // contracts that were themselves rejected in the same step, and only
    // the fixed point determines which primary contracts truly fall.
    if ((e & secondary_all) != 0) {
      d &= ~e;
      ++step;
      continue;
    }
    res.d_final = d & ~e;
    res.a_next_init = a_k & ~e;
    res.primary_rejection = (e & primary_all) != 0;
    return res;
  }
}

AlgorithmTrace run_da(const NtuMarket& m, const DaConfig& cfg) {
  if (!m.tiered()) throw input_error("alternate DA requires a tiered market");
  AlgorithmTrace trace;
  Wing primary = cfg.start_side;
  Mask a_init = m.wing_mask(primary);
  Mask d_prev = 0;
  int stage_cap = m.contract_count() + 2;

  for (int stage = 1; stage <= stage_cap; ++stage) {
    DaStageSets sets;
    sets.a_init = a_init;

    PhaseResult left = primary_phase(m, primary, a_init, stage);
    trace.steps.insert(trace.steps.end(), left.steps.begin(), left.steps.end());
    sets.a_final = left.final_set;

    if (stage >= 2 && cfg.variant == DaVariant::Original &&
        left.final_set == a_init) {
      trace.stages.push_back(sets);
      trace.terminated_phase = primary;
      trace.terminated_stage = stage;
      trace.outcome = left.final_set | d_prev;
      return trace;
    }

    SecondaryPhaseResult right =
        secondary_phase(m, primary, left.final_set, stage);
    trace.steps.insert(trace.steps.end(), right.steps.begin(),
                       right.steps.end());
    sets.has_secondary = true;
    sets.d_final = right.d_final;
    sets.a_next_init = right.a_next_init;
    trace.stages.push_back(sets);

    if (!right.primary_rejection) {
      trace.terminated_phase = primary == Wing::Left ? Wing::Right : Wing::Left;
      trace.terminated_stage = stage;
      trace.outcome = left.final_set | right.d_final;
      return trace;
    }
    a_init = right.a_next_init;
    d_prev = right.d_final;
  }
  throw std::logic_error("alternate DA exceeded its stage bound");
}

std::string format_trace(const NtuMarket& m, const AlgorithmTrace& t) {
  std::string out;
  for (const auto& s : t.steps) {
    out += "stage=" + std::to_string(s.stage);
    out += " phase=";
    out += (s.phase == Wing::Left ? "L" : "R");
    out += " step=" + std::to_string(s.step);
    out += " avail=" + format_bundle(m, s.avail);
    out += " rejected=" + format_bundle(m, s.rejected);
    out += "\n";
  }
  out += "output=" + format_bundle(m, t.outcome);
  out += " terminated=" + wing_name(t.terminated_phase) + "@" +
         std::to_string(t.terminated_stage) + "\n";
  return out;
}

} // namespace matchkit
