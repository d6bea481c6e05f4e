#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "matchkit/da.hpp"
#include "matchkit/ntu_market.hpp"

namespace matchkit {

// Two (or more, for nonexistence demonstrations) organizations recruiting
// from a shared applicant pool. Organizations rank applicant subsets;
// applicants strictly order the organizations they find acceptable.
struct OrgMarketSpec {
  std::vector<std::string> organizations; // listed order is significant
  std::vector<std::string> applicants;
  // per organization: ranked applicant subsets, most preferred first
  std::map<std::string, std::vector<std::vector<std::string>>> org_rankings;
  // per applicant: acceptable organizations, most preferred first
  std::map<std::string, std::vector<std::string>> app_rankings;
};

class OrgMarket {
 public:
  static OrgMarket build(const OrgMarketSpec& spec);

  int org_count() const { return static_cast<int>(org_ids_.size()); }
  int applicant_count() const { return static_cast<int>(app_ids_.size()); }
  const std::string& org_id(int o) const { return org_ids_[o]; }
  const std::string& applicant_id(int a) const { return app_ids_[a]; }
  int org_index(const std::string& id) const;
  int applicant_index(const std::string& id) const;

  // Best listed applicant subset contained in `available`, else empty.
  Mask org_choose(int org, Mask available) const;
  const std::vector<Mask>& org_ranking(int org) const {
    return org_rankings_[org];
  }
  // Position of org in the applicant's acceptability list, or -1.
  int app_rank(int applicant, int org) const;
  bool accepts(int applicant, int org) const {
    return app_rank(applicant, org) >= 0;
  }

  Mask applicant_mask_of(const std::vector<std::string>& ids) const;
  std::vector<std::string> applicant_ids_of(Mask m) const;
  const OrgMarketSpec& spec() const { return spec_; }

 private:
  OrgMarket() = default;
  OrgMarketSpec spec_;
  std::vector<std::string> org_ids_; // listed order preserved
  std::vector<std::string> app_ids_; // sorted
  std::vector<std::vector<Mask>> org_rankings_;
  std::vector<std::vector<int>> app_rankings_; // org indices, best first
};

struct OrgMatching {
  // applicant index -> org index, or -1 when unmatched
  std::vector<int> assignment;
  bool operator==(const OrgMatching&) const = default;
};

struct OrgDaStep {
  int stage = 0;
  int org = 0;
  Mask proposals = 0;
  Mask chosen = 0;
};

struct OrgDaResult {
  OrgMatching matching;
  std::vector<OrgDaStep> steps;
  int terminated_stage = 0;
};

// Embeds the organization market into the three-tier contract model: the
// first organization becomes the sole left-side agent, the second the sole
// right-side agent, applicants become central agents with one contract per
// acceptable (applicant, organization) pair. With three or more
// organizations the result is an untiered market (general predicates only).
// Contract ids are "<applicant>@<org>".
NtuMarket to_contract_market(const OrgMarket& om);

std::string org_contract_id(const std::string& applicant,
                            const std::string& org);

// The adapted proposal procedure between two organizations.
OrgDaResult run_org_da(const OrgMarket& om, const std::string& first_org);

struct OrgEquivalenceReport {
  bool equal = false;
  OrgMatching org_da;
  OrgMatching contract_da;
};

// Cross-checks run_org_da against the alternate DA on the embedded market.
// Requires both organizations to pass complementarity after conversion.
OrgEquivalenceReport org_da_equivalence(const OrgMarket& om,
                                        const std::string& first_org);

// The matching induced by a contract-market outcome of the embedding.
OrgMatching induced_matching(const OrgMarket& om, const NtuMarket& cm,
                             Mask outcome);

std::string format_matching(const OrgMarket& om, const OrgMatching& m);

} // namespace matchkit
