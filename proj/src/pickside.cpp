#include "matchkit/pickside.hpp"

#include <algorithm>

#include "matchkit/ntu_conditions.hpp"

namespace matchkit {

OrgMarket OrgMarket::build(const OrgMarketSpec& spec) {
  OrgMarket om;
  om.spec_ = spec;
  om.org_ids_ = spec.organizations;
  if (om.org_ids_.size() < 2)
    throw input_error("an organization market needs at least two organizations");
  {
    auto sorted = om.org_ids_;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw input_error("duplicate organization id");
  }
  om.app_ids_ = spec.applicants;
  std::sort(om.app_ids_.begin(), om.app_ids_.end());
  if (std::adjacent_find(om.app_ids_.begin(), om.app_ids_.end()) !=
      om.app_ids_.end())
    throw input_error("duplicate applicant id");
  if (om.app_ids_.size() > 20)
    throw input_error("too many applicants (limit 20)");

  om.org_rankings_.resize(om.org_ids_.size());
  for (int o = 0; o < om.org_count(); ++o) {
    auto it = spec.org_rankings.find(om.org_ids_[o]);
    if (it == spec.org_rankings.end())
      throw input_error("organization " + om.org_ids_[o] +
                        " has no preference record");
    std::vector<Mask> seen;
    for (const auto& subset : it->second) {
      Mask mask = om.applicant_mask_of(subset);
      if (std::find(seen.begin(), seen.end(), mask) != seen.end())
        throw input_error("duplicate subset in ranking of " + om.org_ids_[o]);
      seen.push_back(mask);
      om.org_rankings_[o].push_back(mask);
    }
  }
  om.app_rankings_.resize(om.app_ids_.size());
  for (int a = 0; a < om.applicant_count(); ++a) {
    auto it = spec.app_rankings.find(om.app_ids_[a]);
    if (it == spec.app_rankings.end())
      throw input_error("applicant " + om.app_ids_[a] +
                        " has no preference record");
    for (const auto& org : it->second) {
      int oi = om.org_index(org);
      auto& r = om.app_rankings_[a];
      if (std::find(r.begin(), r.end(), oi) != r.end())
        throw input_error("organization " + org + " listed twice by " +
                          om.app_ids_[a]);
      r.push_back(oi);
    }
  }
  return om;
}

int OrgMarket::org_index(const std::string& id) const {
  auto it = std::find(org_ids_.begin(), org_ids_.end(), id);
  if (it == org_ids_.end()) throw input_error("unknown organization: " + id);
  return static_cast<int>(it - org_ids_.begin());
}

int OrgMarket::applicant_index(const std::string& id) const {
  auto it = std::lower_bound(app_ids_.begin(), app_ids_.end(), id);
  if (it == app_ids_.end() || *it != id)
    throw input_error("unknown applicant: " + id);
  return static_cast<int>(it - app_ids_.begin());
}

Mask OrgMarket::org_choose(int org, Mask available) const {
  for (Mask r : org_rankings_[org])
    if (subset_of(r, available)) return r;
  return 0;
}

int OrgMarket::app_rank(int applicant, int org) const {
  const auto& r = app_rankings_[applicant];
  auto it = std::find(r.begin(), r.end(), org);
  return it == r.end() ? -1 : static_cast<int>(it - r.begin());
}

Mask OrgMarket::applicant_mask_of(const std::vector<std::string>& ids) const {
  Mask m = 0;
  for (const auto& id : ids) m |= bit(applicant_index(id));
  return m;
}

std::vector<std::string> OrgMarket::applicant_ids_of(Mask m) const {
  std::vector<std::string> out;
  for (int i : mask_indices(m)) out.push_back(app_ids_[i]);
  return out;
}

std::string org_contract_id(const std::string& applicant,
                            const std::string& org) {
  return applicant + "@" + org;
}

NtuMarket to_contract_market(const OrgMarket& om) {
  bool two_orgs = om.org_count() == 2;
  NtuMarketSpec spec;
  spec.tiered = two_orgs;

  for (int o = 0; o < om.org_count(); ++o) {
    Side side = Side::Center;
    if (two_orgs) side = o == 0 ? Side::Left : Side::Right;
    spec.agents.push_back({om.org_id(o), side});
  }
  for (int a = 0; a < om.applicant_count(); ++a)
    spec.agents.push_back({om.applicant_id(a), Side::Center});

  for (int a = 0; a < om.applicant_count(); ++a) {
    for (int o = 0; o < om.org_count(); ++o) {
      if (!om.accepts(a, o)) continue;
      NtuContractSpec c;
      c.id = org_contract_id(om.applicant_id(a), om.org_id(o));
      if (two_orgs && o == 0) {
        c.first = om.org_id(o); // left agent upstream
        c.second = om.applicant_id(a);
        c.wing = Wing::Left;
      } else if (two_orgs) {
        c.first = om.applicant_id(a); // central agent upstream
        c.second = om.org_id(o);
        c.wing = Wing::Right;
      } else {
        c.first = om.applicant_id(a);
        c.second = om.org_id(o);
      }
      spec.contracts.push_back(c);
    }
  }

  for (int a = 0; a < om.applicant_count(); ++a) {
    NtuPreferenceSpec p;
    p.owner = om.applicant_id(a);
    const auto& sp = om.spec().app_rankings.at(om.applicant_id(a));
    for (const auto& org : sp)
      p.ranking.push_back({org_contract_id(om.applicant_id(a), org)});
    spec.preferences.push_back(std::move(p));
  }
  for (int o = 0; o < om.org_count(); ++o) {
    NtuPreferenceSpec p;
    p.owner = om.org_id(o);
    for (Mask subset : om.org_ranking(o)) {
      // Subsets containing an applicant who does not list this organization
      // are unrealizable in the contract model and are dropped.
      bool realizable = true;
      std::vector<std::string> bundle;
      for (int a : mask_indices(subset)) {
        if (!om.accepts(a, o)) {
          realizable = false;
          break;
        }
        bundle.push_back(org_contract_id(om.applicant_id(a), om.org_id(o)));
      }
      if (realizable) p.ranking.push_back(std::move(bundle));
    }
    spec.preferences.push_back(std::move(p));
  }
  return NtuMarket::build(spec);
}

OrgDaResult run_org_da(const OrgMarket& om, const std::string& first_org) {
  if (om.org_count() != 2)
    throw input_error("run_org_da requires exactly two organizations");
  int f = om.org_index(first_org);
  int s = 1 - f;

  OrgDaResult res;
  int n = om.applicant_count();
  Mask m_f = 0;
  for (int a = 0; a < n; ++a)
    if (om.accepts(a, f)) m_f |= bit(a);
  Mask m_s = 0;

  int stage_cap = n + 2;
  for (int stage = 1; stage <= stage_cap; ++stage) {
    Mask proposals_f = m_f;
    Mask c_f = om.org_choose(f, proposals_f);
    res.steps.push_back({stage, f, proposals_f, c_f});
    bool rejected = c_f != proposals_f;
    m_f = c_f;
    if (stage >= 2 && !rejected) {
      res.terminated_stage = stage;
      break;
    }

    // Everyone weakly preferring the second organization to her current
    // position proposes to it.
    Mask proposals_s = m_s;
    for (int a = 0; a < n; ++a) {
      Mask ab = bit(a);
      if ((m_s & ab) != 0) continue;
      if ((m_f & ab) != 0) {
        int rs = om.app_rank(a, s);
        if (rs >= 0 && rs < om.app_rank(a, f)) proposals_s |= ab;
      } else if (om.accepts(a, s)) {
        proposals_s |= ab; // currently unmatched
      }
    }
    Mask c_s = om.org_choose(s, proposals_s);
    res.steps.push_back({stage, s, proposals_s, c_s});
    bool takes_from_f = (c_s & m_f) != 0;
    m_f &= ~c_s;
    m_s = c_s;
    if (!takes_from_f) {
      res.terminated_stage = stage;
      break;
    }
  }
  if (res.terminated_stage == 0)
    throw std::logic_error("organization DA exceeded its stage bound");

  res.matching.assignment.assign(n, -1);
  for (int a : mask_indices(m_f)) res.matching.assignment[a] = f;
  for (int a : mask_indices(m_s)) res.matching.assignment[a] = s;
  return res;
}

OrgMatching induced_matching(const OrgMarket& om, const NtuMarket& cm,
                             Mask outcome) {
  OrgMatching matching;
  matching.assignment.assign(om.applicant_count(), -1);
  for (int c : mask_indices(outcome)) {
    const std::string& cid = cm.contract_id(c);
    auto at = cid.find('@');
    int a = om.applicant_index(cid.substr(0, at));
    int o = om.org_index(cid.substr(at + 1));
    if (matching.assignment[a] != -1)
      throw input_error("outcome assigns applicant " + om.applicant_id(a) +
                        " to two organizations");
    matching.assignment[a] = o;
  }
  return matching;
}

OrgEquivalenceReport org_da_equivalence(const OrgMarket& om,
                                        const std::string& first_org) {
  NtuMarket cm = to_contract_market(om);
  for (int o = 0; o < om.org_count(); ++o)
    if (check_complementarity(cm, cm.agent_index(om.org_id(o))))
      throw input_error("organization " + om.org_id(o) +
                        " fails complementarity after conversion");

  OrgEquivalenceReport rep;
  rep.org_da = run_org_da(om, first_org).matching;
  DaConfig cfg;
  cfg.start_side = om.org_index(first_org) == 0 ? Wing::Left : Wing::Right;
  rep.contract_da = induced_matching(om, cm, run_da(cm, cfg).outcome);
  rep.equal = rep.org_da == rep.contract_da;
  return rep;
}

std::string format_matching(const OrgMarket& om, const OrgMatching& m) {
  std::string out;
  for (int o = 0; o < om.org_count(); ++o) {
    Mask members = 0;
    for (int a = 0; a < om.applicant_count(); ++a)
      if (m.assignment[a] == o) members |= bit(a);
    out += om.org_id(o) + "={";
    bool first = true;
    for (const auto& id : om.applicant_ids_of(members)) {
      if (!first) out += ",";
      first = false;
      out += id;
    }
    out += "}\n";
  }
  Mask unmatched = 0;
  for (int a = 0; a < om.applicant_count(); ++a)
    if (m.assignment[a] == -1) unmatched |= bit(a);
  out += "unmatched={";
  bool first = true;
  for (const auto& id : om.applicant_ids_of(unmatched)) {
    if (!first) out += ",";
    first = false;
    out += id;
  }
  out += "}\n";
  return out;
}

} // namespace matchkit
