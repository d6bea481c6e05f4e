#pragma once

#include <bit>
#include <cstdint>
#include <vector>

namespace matchkit {

// A set of contracts (or primitive contracts), as a bitmask over the
// market's id-sorted index. Markets are capped well below 32 entries.
using Mask = std::uint32_t;

inline int set_size(Mask m) { return std::popcount(m); }
inline bool subset_of(Mask a, Mask b) { return (a & b) == a; }
inline Mask bit(int i) { return Mask{1} << i; }

// Canonical order on masks: by cardinality, then lexicographic on the
// ascending index sequence. Index order equals contract-id order, so this
// is the (cardinality, lex-on-sorted-ids) order used everywhere a "first"
// witness or certificate is promised.
bool canonical_less(Mask a, Mask b);

// All submasks of `universe` in canonical order. Includes the empty mask.
std::vector<Mask> canonical_submasks(Mask universe);

// All nonempty submasks of `universe` in canonical order.
std::vector<Mask> canonical_nonempty_submasks(Mask universe);

std::vector<int> mask_indices(Mask m);

} // namespace matchkit
