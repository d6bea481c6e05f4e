#include "matchkit/ntu_market.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace matchkit {

std::string side_name(Side s) {
  switch (s) {
    case Side::Left: return "left";
    case Side::Center: return "center";
    case Side::Right: return "right";
  }
  return "?";
}

std::string wing_name(Wing w) { return w == Wing::Left ? "left" : "right"; }

namespace {

int lookup(const std::vector<std::string>& ids, const std::string& id,
           const char* what) {
  auto it = std::lower_bound(ids.begin(), ids.end(), id);
  if (it == ids.end() || *it != id)
    throw input_error(std::string("unknown ") + what + ": " + id);
  return static_cast<int>(it - ids.begin());
}

} // namespace

NtuMarket NtuMarket::build(const NtuMarketSpec& spec) {
  NtuMarket m;
  m.tiered_ = spec.tiered;

  for (const auto& a : spec.agents) m.agent_ids_.push_back(a.id);
  std::sort(m.agent_ids_.begin(), m.agent_ids_.end());
  if (std::adjacent_find(m.agent_ids_.begin(), m.agent_ids_.end()) !=
      m.agent_ids_.end())
    throw input_error("duplicate agent id");
  m.agent_sides_.resize(m.agent_ids_.size(), Side::Center);
  for (const auto& a : spec.agents)
    m.agent_sides_[lookup(m.agent_ids_, a.id, "agent")] = a.side;

  for (const auto& c : spec.contracts) m.contract_ids_.push_back(c.id);
  std::sort(m.contract_ids_.begin(), m.contract_ids_.end());
  if (std::adjacent_find(m.contract_ids_.begin(), m.contract_ids_.end()) !=
      m.contract_ids_.end())
    throw input_error("duplicate contract id");
  if (m.contract_ids_.size() > 20)
    throw input_error("market too large: at most 20 contracts supported");

  m.participants_.resize(m.contract_ids_.size());
  m.wings_.resize(m.contract_ids_.size());
  m.agent_contract_mask_.assign(m.agent_ids_.size(), 0);
  for (const auto& c : spec.contracts) {
    int ci = lookup(m.contract_ids_, c.id, "contract");
    int a = lookup(m.agent_ids_, c.first, "agent");
    int b = lookup(m.agent_ids_, c.second, "agent");
    if (a == b) throw input_error("contract " + c.id + " joins an agent to itself");
    m.participants_[ci] = {a, b};
    m.wings_[ci] = c.wing;
    if (spec.tiered) {
      if (!c.wing.has_value())
        throw input_error("contract " + c.id + " lacks a wing in a tiered market");
      Side sa = m.agent_sides_[a];
      Side sb = m.agent_sides_[b];
      if (*c.wing == Wing::Left) {
        if (sa != Side::Left || sb != Side::Center)
          throw input_error("left-wing contract " + c.id +
                            " must join a left-side agent and a central agent");
        m.left_mask_ |= bit(ci);
      } else {
        if (sa != Side::Center || sb != Side::Right)
          throw input_error("right-wing contract " + c.id +
                            " must join a central agent and a right-side agent");
        m.right_mask_ |= bit(ci);
      }
    }
    m.agent_contract_mask_[a] |= bit(ci);
    m.agent_contract_mask_[b] |= bit(ci);
  }
  m.full_mask_ =
      m.contract_ids_.empty() ? 0 : (bit(m.contract_count()) - 1);

  m.rankings_.resize(m.agent_ids_.size());
  std::vector<bool> has_pref(m.agent_ids_.size(), false);
  for (const auto& p : spec.preferences) {
    int a = lookup(m.agent_ids_, p.owner, "agent");
    if (has_pref[a]) throw input_error("duplicate preference record for " + p.owner);
    has_pref[a] = true;
    std::set<Mask> seen;
    for (const auto& bundle : p.ranking) {
      Mask mask = 0;
      for (const auto& cid : bundle) {
        int ci = lookup(m.contract_ids_, cid, "contract");
        mask |= bit(ci);
      }
      if (!subset_of(mask, m.agent_contract_mask_[a]))
        throw input_error("bundle in ranking of " + p.owner +
                          " contains a contract not involving the agent");
      if (!seen.insert(mask).second)
        throw input_error("duplicate bundle listed in ranking of " + p.owner);
      m.rankings_[a].push_back(mask);
    }
  }
  for (std::size_t a = 0; a < m.agent_ids_.size(); ++a)
    if (!has_pref[a])
      throw input_error("agent " + m.agent_ids_[a] + " has no preference record");

  return m;
}

int NtuMarket::agent_index(const std::string& id) const {
  return lookup(agent_ids_, id, "agent");
}

int NtuMarket::contract_index(const std::string& id) const {
  return lookup(contract_ids_, id, "contract");
}

Mask NtuMarket::mask_of(const std::vector<std::string>& contract_ids) const {
  Mask m = 0;
  for (const auto& id : contract_ids) m |= bit(contract_index(id));
  return m;
}

std::vector<std::string> NtuMarket::ids_of(Mask m) const {
  std::vector<std::string> out;
  for (int i : mask_indices(m)) out.push_back(contract_ids_[i]);
  return out;
}

std::pair<Mask, Mask> NtuMarket::side_split(Mask y) const {
  if (!tiered_) throw input_error("side_split requires a tiered market");
  return {y & left_mask_, y & right_mask_};
}

Mask NtuMarket::choose(int a, Mask y) const {
  Mask yi = restrict(y, a);
  for (Mask r : rankings_[a])
    if (subset_of(r, yi)) return r;
  return 0;
}

std::optional<int> NtuMarket::individually_rational_violator(Mask y) const {
  for (int a = 0; a < agent_count(); ++a)
    if (restrict(y, a) != choose(a, y)) return a;
  return std::nullopt;
}

int NtuMarket::list_rank(int a, Mask bundle) const {
  const auto& r = rankings_[a];
  for (std::size_t i = 0; i < r.size(); ++i)
    if (r[i] == bundle) return static_cast<int>(i);
  return -1;
}

bool NtuMarket::prefers(int a, Mask lhs, Mask rhs) const {
  if (lhs == rhs) return false;
  int rl = list_rank(a, lhs);
  int rr = list_rank(a, rhs);
  if (rl >= 0 && rr >= 0) return rl < rr;
  if (rl >= 0) return true;
  if (rr >= 0) return false;
  // Both unlisted: the empty bundle ranks first, then canonical order.
  if (lhs == 0) return true;
  if (rhs == 0) return false;
  return canonical_less(lhs, rhs);
}

NtuMarketSpec NtuMarket::to_spec() const {
  NtuMarketSpec spec;
  spec.tiered = tiered_;
  for (int a = 0; a < agent_count(); ++a)
    spec.agents.push_back({agent_ids_[a], agent_sides_[a]});
  for (int c = 0; c < contract_count(); ++c)
    spec.contracts.push_back({contract_ids_[c],
                              agent_ids_[participants_[c].first],
                              agent_ids_[participants_[c].second], wings_[c]});
  for (int a = 0; a < agent_count(); ++a) {
    NtuPreferenceSpec p;
    p.owner = agent_ids_[a];
    for (Mask r : rankings_[a]) p.ranking.push_back(ids_of(r));
    spec.preferences.push_back(std::move(p));
  }
  return spec;
}

std::string format_bundle(const NtuMarket& m, Mask mask) {
  std::string out = "{";
  bool first = true;
  for (const auto& id : m.ids_of(mask)) {
    if (!first) out += ",";
    first = false;
    out += id;
  }
  out += "}";
  return out;
}

} // namespace matchkit
