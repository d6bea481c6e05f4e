#pragma once

#include <optional>
#include <string>
#include <vector>

#include "matchkit/ntu_market.hpp"

namespace matchkit {

struct BlockCertificate {
  Mask blocker = 0; // nonempty, disjoint from the outcome
};

struct SetwiseBlockCertificate {
  Mask blocker = 0;
  Mask renegotiated = 0; // Y*: blocker subset Y* subset Y union blocker
};

// Does Z block Y per Definition 1(i)?
bool blocks(const NtuMarket& m, Mask y, Mask z);

// First Y* (canonical order) witnessing a setwise block of Y by Z, if any.
std::optional<Mask> setwise_block_witness(const NtuMarket& m, Mask y, Mask z);

// First blocker in canonical (cardinality, lex) order, or nullopt.
std::optional<BlockCertificate> find_block(const NtuMarket& m, Mask y);
std::optional<BlockCertificate> find_block_serial(const NtuMarket& m, Mask y);

std::optional<SetwiseBlockCertificate> find_setwise_block(const NtuMarket& m,
                                                          Mask y);
std::optional<SetwiseBlockCertificate> find_setwise_block_serial(
    const NtuMarket& m, Mask y);

enum class InstabilityReason { None, NotIndividuallyRational, Blocked };

struct StabilityVerdict {
  bool stable = false;
  InstabilityReason reason = InstabilityReason::None;
  std::optional<int> ir_violator;
  std::optional<BlockCertificate> block;
  std::optional<SetwiseBlockCertificate> setwise_block;
};

StabilityVerdict is_stable(const NtuMarket& m, Mask y);
StabilityVerdict is_setwise_stable(const NtuMarket& m, Mask y);

enum class StabilityMode { Stable, Setwise };

// All outcomes passing the chosen oracle, in canonical order. |X| <= 12.
std::vector<Mask> enumerate_stable(const NtuMarket& m, StabilityMode mode);
std::vector<Mask> enumerate_stable_serial(const NtuMarket& m,
                                          StabilityMode mode);

struct Prop1Report {
  bool equal = false;
  std::vector<Mask> stable;
  std::vector<Mask> setwise;
  std::optional<Mask> discrepancy; // first outcome in one set but not the other
};

// Checks that the stable and setwise-stable sets coincide. Requires every
// agent to pass same-side complementarity and every central agent to pick
// one side; throws input_error naming the first failing agent otherwise.
Prop1Report check_prop1(const NtuMarket& m);

struct Lemma9Report {
  bool setwise = false; // whether Z was a setwise block (else a Def. 1 block)
  bool left_ok = true;  // Z^L (if nonempty) re-verified as a block
  bool right_ok = true;
  bool ok() const { return left_ok && right_ok; }
};

// Verifies that a (setwise) block projects to one-side (setwise) blocks.
// Requires pick-one-side central agents and that Z actually blocks Y.
Lemma9Report lemma9_check(const NtuMarket& m, Mask y, Mask z);

std::string format_stability_verdict(const NtuMarket& m,
                                     const StabilityVerdict& v, bool setwise);

} // namespace matchkit
