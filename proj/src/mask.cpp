#include "matchkit/mask.hpp"

#include <algorithm>

namespace matchkit {

bool canonical_less(Mask a, Mask b) {
  if (a == b) return false;
  int ca = set_size(a), cb = set_size(b);
  if (ca != cb) return ca < cb;
  // Same cardinality: compare ascending index sequences lexicographically.
  while (a != 0 && b != 0) {
    int ia = std::countr_zero(a);
    int ib = std::countr_zero(b);
    if (ia != ib) return ia < ib;
    a &= a - 1;
    b &= b - 1;
  }
  return false;
}

std::vector<Mask> canonical_submasks(Mask universe) {
  std::vector<Mask> out;
  out.reserve(std::size_t{1} << set_size(universe));
  Mask sub = 0;
  while (true) {
    out.push_back(sub);
    if (sub == universe) break;
    sub = (sub - universe) & universe; // next submask
  }
  std::sort(out.begin(), out.end(), canonical_less);
  return out;
}

std::vector<Mask> canonical_nonempty_submasks(Mask universe) {
  auto out = canonical_submasks(universe);
  out.erase(out.begin()); // empty mask sorts first
  return out;
}

std::vector<int> mask_indices(Mask m) {
  std::vector<int> out;
  while (m != 0) {
    out.push_back(std::countr_zero(m));
    m &= m - 1;
  }
  return out;
}

} // namespace matchkit
