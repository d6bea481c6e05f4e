#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "matchkit/mask.hpp"

namespace matchkit {

struct input_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Side { Left, Center, Right };
enum class Wing { Left, Right };

std::string side_name(Side s);
std::string wing_name(Wing w);

// Raw (pre-validation) market description, as read from a file or built in
// tests. Ids are free-form tokens; bundles are id lists.
struct NtuAgentSpec {
  std::string id;
  Side side = Side::Center;
};

struct NtuContractSpec {
  std::string id;
  // Left-wing contracts join (left agent, central agent); right-wing ones
  // join (central agent, right agent). Untiered markets may join any pair
  // and carry no wing.
  std::string first;
  std::string second;
  std::optional<Wing> wing;
};

struct NtuPreferenceSpec {
  std::string owner;
  std::vector<std::vector<std::string>> ranking; // most preferred first
};

struct NtuMarketSpec {
  std::vector<NtuAgentSpec> agents;
  std::vector<NtuContractSpec> contracts;
  std::vector<NtuPreferenceSpec> preferences;
  bool tiered = true;
};

// Immutable NTU market. All operations are pure and thread-safe.
class NtuMarket {
 public:
  // Validates the spec (sides, wings, bundle membership, duplicate ids,
  // duplicate bundle listings) and builds the indexed representation.
  // Throws input_error on any malformed input.
  static NtuMarket build(const NtuMarketSpec& spec);

  bool tiered() const { return tiered_; }
  int agent_count() const { return static_cast<int>(agent_ids_.size()); }
  int contract_count() const { return static_cast<int>(contract_ids_.size()); }

  const std::string& agent_id(int a) const { return agent_ids_[a]; }
  Side agent_side(int a) const { return agent_sides_[a]; }
  const std::string& contract_id(int c) const { return contract_ids_[c]; }

  int agent_index(const std::string& id) const;     // throws input_error
  int contract_index(const std::string& id) const;  // throws input_error

  Mask full_mask() const { return full_mask_; }
  Mask left_mask() const { return left_mask_; }    // X^L
  Mask right_mask() const { return right_mask_; }  // X^R
  Mask agent_contracts(int a) const { return agent_contract_mask_[a]; }
  Mask wing_mask(Wing w) const {
    return w == Wing::Left ? left_mask_ : right_mask_;
  }
  const std::pair<int, int>& participants(int c) const {
    return participants_[c];
  }
  const std::vector<Mask>& ranking(int a) const { return rankings_[a]; }

  Mask mask_of(const std::vector<std::string>& contract_ids) const;
  std::vector<std::string> ids_of(Mask m) const;

  // Y_i: the contracts of Y involving agent a.
  Mask restrict(Mask y, int a) const { return y & agent_contract_mask_[a]; }

  // (Y^L, Y^R). Tiered markets only.
  std::pair<Mask, Mask> side_split(Mask y) const;

  // Ch_i(Y): the highest-ranked listed bundle contained in Y_i, else the
  // empty bundle.
  Mask choose(int a, Mask y) const;

  // Re_i(Y) = Y_i \ Ch_i(Y).
  Mask reject(int a, Mask y) const { return restrict(y, a) & ~choose(a, y); }

  // True iff Y_i = Ch_i(Y) for every agent; otherwise the first violating
  // agent (by id order).
  std::optional<int> individually_rational_violator(Mask y) const;
  bool is_individually_rational(Mask y) const {
    return !individually_rational_violator(y).has_value();
  }

  // Position of a bundle in agent a's listing, or -1 when unlisted.
  int list_rank(int a, Mask bundle) const;

  // Strict preference under the completion order: listed bundles in listing
  // order, then the empty bundle if unlisted, then all other bundles in
  // canonical (cardinality, lex) order.
  bool prefers(int a, Mask lhs, Mask rhs) const;

  NtuMarketSpec to_spec() const;

 private:
  NtuMarket() = default;

  bool tiered_ = true;
  std::vector<std::string> agent_ids_;   // sorted
  std::vector<Side> agent_sides_;
  std::vector<std::string> contract_ids_; // sorted
  std::vector<std::pair<int, int>> participants_;
  std::vector<std::optional<Wing>> wings_;
  std::vector<Mask> agent_contract_mask_;
  std::vector<std::vector<Mask>> rankings_;
  Mask full_mask_ = 0;
  Mask left_mask_ = 0;
  Mask right_mask_ = 0;
};

// Formats a mask as "{a,b,c}" with ids in sorted order (the deterministic
// text convention shared by traces and certificates).
std::string format_bundle(const NtuMarket& m, Mask mask);

} // namespace matchkit
