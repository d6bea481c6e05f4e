#include "matchkit/tu_solver.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "matchkit/parallel.hpp"

namespace matchkit {

namespace {

struct Bound {
  bool set = false;
  Rat value;
  bool strict = false;
};

void tighten_lower(Bound& b, const Rat& v, bool strict) {
  if (!b.set || v > b.value) {
    b.set = true;
    b.value = v;
    b.strict = strict;
  } else if (v == b.value && strict) {
    b.strict = true;
  }
}

void tighten_upper(Bound& b, const Rat& v, bool strict) {
  if (!b.set || v < b.value) {
    b.set = true;
    b.value = v;
    b.strict = strict;
  } else if (v == b.value && strict) {
    b.strict = true;
  }
}

// Keep one constraint per normalized coefficient vector: the tightest
// constant wins, strictness wins ties.
std::vector<LinConstraint> dedupe(std::vector<LinConstraint> cons) {
  std::map<std::vector<Rat>, std::pair<Rat, bool>> best;
  for (auto& c : cons) {
    const Rat* lead = nullptr;
    for (const auto& x : c.coeff)
      if (x != 0) {
        lead = &x;
        break;
      }
    if (!lead) continue; // handled by the caller
    Rat scale = abs(*lead);
    for (auto& x : c.coeff) x /= scale;
    c.constant /= scale;
    auto it = best.find(c.coeff);
    if (it == best.end()) {
      best.emplace(std::move(c.coeff), std::make_pair(c.constant, c.strict));
    } else if (c.constant < it->second.first ||
               (c.constant == it->second.first && c.strict)) {
      it->second = {c.constant, c.strict};
    }
  }
  std::vector<LinConstraint> out;
  out.reserve(best.size());
  for (auto& [coeff, rhs] : best)
    out.push_back({coeff, rhs.first, rhs.second});
  return out;
}

constexpr std::size_t kLpBlowupCap = 200000;

} // namespace

LpResult lp_solve(int nvars, const std::vector<LinConstraint>& constraints) {
  std::vector<LinConstraint> cur;
  std::vector<LinConstraint> constants;
  for (const auto& c : constraints) {
    bool all_zero = true;
    for (const auto& x : c.coeff)
      if (x != 0) all_zero = false;
    (all_zero ? constants : cur).push_back(c);
  }
  cur = dedupe(std::move(cur));

  std::vector<std::vector<LinConstraint>> levels(nvars);
  for (int k = nvars - 1; k >= 0; --k) {
    levels[k] = cur;
    std::vector<LinConstraint> next;
    std::vector<const LinConstraint*> pos, neg;
    for (const auto& c : cur) {
      if (c.coeff[k] == 0)
        next.push_back(c);
      else if (c.coeff[k] > 0)
        pos.push_back(&c);
      else
        neg.push_back(&c);
    }
    for (const auto* p : pos)
      for (const auto* n : neg) {
        LinConstraint combined;
        combined.coeff.resize(nvars, Rat(0));
        Rat a = p->coeff[k];
        Rat b = -n->coeff[k];
        for (int j = 0; j < k; ++j)
          combined.coeff[j] = b * p->coeff[j] + a * n->coeff[j];
        combined.constant = b * p->constant + a * n->constant;
        combined.strict = p->strict || n->strict;
        bool all_zero = true;
        for (const auto& x : combined.coeff)
          if (x != 0) all_zero = false;
        (all_zero ? constants : next).push_back(std::move(combined));
      }
    cur = dedupe(std::move(next));
    if (cur.size() > kLpBlowupCap)
      throw input_error("price system too large for exact elimination");
  }

  for (const auto& c : constants)
    if (c.strict ? !(c.constant > 0) : !(c.constant >= 0))
      return {false, {}};

  LpResult res;
  res.feasible = true;
  res.point.assign(nvars, Rat(0));
  for (int k = 0; k < nvars; ++k) {
    Bound lo, hi;
    for (const auto& c : levels[k]) {
      if (c.coeff[k] == 0) continue;
      Rat rest = c.constant;
      for (int j = 0; j < k; ++j) rest += c.coeff[j] * res.point[j];
      Rat bound = -rest / c.coeff[k];
      if (c.coeff[k] > 0)
        tighten_lower(lo, bound, c.strict);
      else
        tighten_upper(hi, bound, c.strict);
    }
    if (lo.set && hi.set) {
      if (lo.value < hi.value)
        res.point[k] = (lo.value + hi.value) / 2;
      else if (lo.value == hi.value && !lo.strict && !hi.strict)
        res.point[k] = lo.value;
      else
        throw std::logic_error("elimination claimed feasibility but the "
                               "back-substituted interval is empty");
    } else if (lo.set) {
      res.point[k] = lo.strict ? lo.value + 1 : lo.value;
    } else if (hi.set) {
      res.point[k] = hi.strict ? hi.value - 1 : hi.value;
    }
  }
  return res;
}

Rat welfare_of(const TuMarket& m, Mask phi) {
  Rat w(0);
  for (int a = 0; a < m.agent_count(); ++a)
    w += m.value(a, phi & m.agent_primitives(a));
  return w;
}

Mask maximize_welfare_serial(const TuMarket& m) {
  Mask best = 0;
  Rat best_w = welfare_of(m, 0);
  for (Mask phi : canonical_nonempty_submasks(m.full_mask())) {
    Rat w = welfare_of(m, phi);
    if (w > best_w) {
      best_w = w;
      best = phi;
    }
  }
  return best;
}

Mask maximize_welfare(const TuMarket& m) {
  auto cands = canonical_submasks(m.full_mask());
  std::size_t idx = arg_best(cands.size(), [&](std::size_t i) {
    return welfare_of(m, cands[i]);
  });
  return cands[idx];
}

std::optional<PriceVector> support_prices(const TuMarket& m, Mask phi) {
  int n = m.primitive_count();
  std::vector<LinConstraint> cons;
  for (int a = 0; a < m.agent_count(); ++a) {
    Mask omega = m.agent_primitives(a);
    Mask phi_a = phi & omega;
    for (Mask psi : canonical_submasks(omega)) {
      if (psi == phi_a) continue;
      // v(phi_a) - v(psi) - sum_{phi_a} sigma t + sum_{psi} sigma t >= 0
      LinConstraint c;
      c.coeff.assign(n, Rat(0));
      c.constant = m.value(a, phi_a) - m.value(a, psi);
      for (int w : mask_indices(phi_a ^ psi)) {
        Rat sigma = m.upstream(w) == a ? 1 : -1;
        c.coeff[w] += subset_of(bit(w), psi) ? sigma : -sigma;
      }
      cons.push_back(std::move(c));
    }
  }
  auto lp = lp_solve(n, cons);
  if (!lp.feasible) return std::nullopt;
  return lp.point;
}

std::optional<PriceVector> extend_outcome_prices(const TuMarket& m,
                                                 const TuOutcome& y) {
  Mask phi = 0;
  for (const auto& pc : y) phi |= bit(pc.primitive);
  int n = m.primitive_count();
  std::vector<LinConstraint> cons;
  for (const auto& pc : y) {
    LinConstraint lo, hi;
    lo.coeff.assign(n, Rat(0));
    lo.coeff[pc.primitive] = 1;
    lo.constant = -pc.transfer;
    hi.coeff.assign(n, Rat(0));
    hi.coeff[pc.primitive] = -1;
    hi.constant = pc.transfer;
    cons.push_back(std::move(lo));
    cons.push_back(std::move(hi));
  }
  for (int a = 0; a < m.agent_count(); ++a) {
    Mask omega = m.agent_primitives(a);
    Mask phi_a = phi & omega;
    for (Mask psi : canonical_submasks(omega)) {
      if (psi == phi_a) continue;
      LinConstraint c;
      c.coeff.assign(n, Rat(0));
      c.constant = m.value(a, phi_a) - m.value(a, psi);
      for (int w : mask_indices(phi_a ^ psi)) {
        Rat sigma = m.upstream(w) == a ? 1 : -1;
        c.coeff[w] += subset_of(bit(w), psi) ? sigma : -sigma;
      }
      cons.push_back(std::move(c));
    }
  }
  auto lp = lp_solve(n, cons);
  if (!lp.feasible) return std::nullopt;
  return lp.point;
}

std::vector<Mask> welfare_maximizers(const TuMarket& m) {
  auto cands = canonical_submasks(m.full_mask());
  Rat best = welfare_of(m, maximize_welfare(m));
  auto hits = all_matches(cands.size(), [&](std::size_t i) {
    return welfare_of(m, cands[i]) == best;
  });
  std::vector<Mask> out;
  out.reserve(hits.size());
  for (std::size_t i : hits) out.push_back(cands[i]);
  return out;
}

TuSolveResult solve_equilibrium(const TuMarket& m, SolveRoute route) {
  TuSolveResult res;
  if (route == SolveRoute::Direct) {
    for (Mask phi : welfare_maximizers(m)) {
      auto prices = support_prices(m, phi);
      if (!prices) continue;
      res.found = true;
      res.allocation = phi;
      res.prices = *prices;
      break;
    }
  } else {
    TuMarket flipped = transform_market(m);
    for (Mask psi : welfare_maximizers(flipped)) {
      auto prices = support_prices(flipped, psi);
      if (!prices) continue;
      auto mapped = map_equilibrium(m, psi, *prices);
      res.found = true;
      res.allocation = mapped.allocation;
      res.prices = mapped.prices;
      break;
    }
  }
  if (res.found) {
    if (!is_equilibrium(m, res.allocation, res.prices))
      throw std::logic_error("computed equilibrium failed re-verification");
    res.welfare = welfare_of(m, res.allocation);
  } else if (check_full_complementarity(m).ok()) {
    res.defect = "no equilibrium found although full complementarity holds; "
                 "this indicates a solver defect";
  }
  return res;
}

namespace {

constexpr int kTuBlockGuard = 10;

TuOutcome outcome_for_agent(const TuMarket& m, int a, const TuOutcome& y) {
  TuOutcome out;
  for (const auto& pc : y)
    if (m.participants(pc.primitive).first == a ||
        m.participants(pc.primitive).second == a)
      out.push_back(pc);
  return out;
}

void validate_outcome(const TuMarket& m, const TuOutcome& y) {
  Mask seen = 0;
  for (const auto& pc : y) {
    if (pc.primitive < 0 || pc.primitive >= m.primitive_count())
      throw input_error("outcome references an unknown primitive contract");
    if ((seen & bit(pc.primitive)) != 0)
      throw input_error("outcome signs primitive contract " +
                        m.primitive_id(pc.primitive) + " twice");
    seen |= bit(pc.primitive);
  }
}

} // namespace

std::optional<TuBlockCertificate> find_tu_block(const TuMarket& m,
                                                const TuOutcome& y) {
  validate_outcome(m, y);
  if (m.primitive_count() > kTuBlockGuard)
    throw input_error("blocking search refused: more than " +
                      std::to_string(kTuBlockGuard) + " primitive contracts");

  Mask signed_mask = 0;
  std::vector<Rat> old_transfer(m.primitive_count(), Rat(0));
  for (const auto& pc : y) {
    signed_mask |= bit(pc.primitive);
    old_transfer[pc.primitive] = pc.transfer;
  }
  std::vector<Rat> base_utility(m.agent_count());
  for (int a = 0; a < m.agent_count(); ++a) {
    auto u = utility(m, a, outcome_for_agent(m, a, y));
    if (!u) throw input_error("outcome gives agent " + m.agent_id(a) +
                              " unbounded disutility");
    base_utility[a] = *u;
  }

  for (Mask psi : canonical_nonempty_submasks(m.full_mask())) {
    std::vector<int> var_of(m.primitive_count(), -1);
    std::vector<int> vars = mask_indices(psi);
    for (int i = 0; i < static_cast<int>(vars.size()); ++i)
      var_of[vars[i]] = i;
    int nvars = static_cast<int>(vars.size());

    std::vector<int> members;
    for (int a = 0; a < m.agent_count(); ++a)
      if ((psi & m.agent_primitives(a)) != 0) members.push_back(a);

    // Each member may keep any subset of her old contracts whose primitives
    // are not re-signed by the block.
    std::vector<std::vector<Mask>> keep_options;
    for (int a : members)
      keep_options.push_back(
          canonical_submasks(signed_mask & m.agent_primitives(a) & ~psi));

    std::vector<int> overlap = mask_indices(psi & signed_mask);
    int branch_count = 1 << overlap.size();

    std::vector<std::size_t> pick(members.size(), 0);
    while (true) {
      for (int branch = 0; branch < branch_count; ++branch) {
        std::vector<LinConstraint> cons;
        for (std::size_t mi = 0; mi < members.size(); ++mi) {
          int a = members[mi];
          Mask psi_a = psi & m.agent_primitives(a);
          Mask keep = keep_options[mi][pick[mi]];
          auto sigma_old = [&](Mask s) {
            Rat sum(0);
            for (int w : mask_indices(s))
              sum += m.upstream(w) == a ? old_transfer[w] : -old_transfer[w];
            return sum;
          };
          // strict improvement over the agent's current position
          LinConstraint c;
          c.coeff.assign(nvars, Rat(0));
          c.strict = true;
          c.constant =
              m.value(a, psi_a | keep) - sigma_old(keep) - base_utility[a];
          for (int w : mask_indices(psi_a))
            c.coeff[var_of[w]] = m.upstream(w) == a ? Rat(-1) : Rat(1);
          cons.push_back(c);
          // weak optimality: the kept set must be a best choice from the old
          // and the newly signed contracts combined
          Mask signed_a = signed_mask & m.agent_primitives(a);
          for (Mask sz : canonical_submasks(psi_a))
            for (Mask sy : canonical_submasks(signed_a & ~sz)) {
              if (sz == psi_a && sy == keep) continue;
              LinConstraint o = c;
              o.strict = false;
              o.constant = m.value(a, psi_a | keep) - sigma_old(keep) -
                           m.value(a, sz | sy) + sigma_old(sy);
              for (int w : mask_indices(sz))
                o.coeff[var_of[w]] += m.upstream(w) == a ? Rat(1) : Rat(-1);
              cons.push_back(std::move(o));
            }
        }
        // A re-signed primitive must change its transfer; branch on the
        // direction.
        for (std::size_t oi = 0; oi < overlap.size(); ++oi) {
          int w = overlap[oi];
          LinConstraint c;
          c.coeff.assign(nvars, Rat(0));
          c.strict = true;
          bool above = (branch >> oi) & 1;
          c.coeff[var_of[w]] = above ? 1 : -1;
          c.constant = above ? -old_transfer[w] : old_transfer[w];
          cons.push_back(std::move(c));
        }
        auto lp = lp_solve(nvars, cons);
        if (lp.feasible) {
          TuBlockCertificate cert;
          cert.primitives = psi;
          for (int i = 0; i < nvars; ++i)
            cert.contracts.push_back({vars[i], lp.point[i]});
          return cert;
        }
      }
      std::size_t j = 0;
      for (; j < members.size(); ++j) {
        if (++pick[j] < keep_options[j].size()) break;
        pick[j] = 0;
      }
      if (j == members.size()) break;
    }
  }
  return std::nullopt;
}

TuStabilityVerdict is_tu_stable(const TuMarket& m, const TuOutcome& y) {
  validate_outcome(m, y);
  TuStabilityVerdict v;
  for (int a = 0; a < m.agent_count(); ++a) {
    TuOutcome ya = outcome_for_agent(m, a, y);
    auto full = utility(m, a, ya);
    if (!full) {
      v.ir_violator = a;
      return v;
    }
    int n = static_cast<int>(ya.size());
    for (int sub = 0; sub < (1 << n) - 1; ++sub) {
      TuOutcome part;
      for (int i = 0; i < n; ++i)
        if ((sub >> i) & 1) part.push_back(ya[i]);
      auto u = utility(m, a, part);
      if (u && *u > *full) {
        v.ir_violator = a;
        return v;
      }
    }
  }
  if (auto block = find_tu_block(m, y)) {
    v.block = block;
    return v;
  }
  v.stable = true;
  return v;
}

std::string format_tu_outcome(const TuMarket& m, const TuOutcome& y) {
  TuOutcome sorted = y;
  std::sort(sorted.begin(), sorted.end(),
            [](const PricedContract& a, const PricedContract& b) {
              return a.primitive < b.primitive;
            });
  std::string out = "{";
  bool first = true;
  for (const auto& pc : sorted) {
    if (!first) out += ",";
    first = false;
    out += m.primitive_id(pc.primitive) + ":" + rat_str(pc.transfer);
  }
  return out + "}";
}

} // namespace matchkit
