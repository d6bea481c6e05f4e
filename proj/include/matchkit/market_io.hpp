#pragma once

#include <iosfwd>
#include <string>

#include "matchkit/ntu_market.hpp"
#include "matchkit/pickside.hpp"
#include "matchkit/tu_market.hpp"

namespace matchkit {

// Line-oriented market files. Blank lines and lines starting with '#' are
// ignored. The first record picks the dialect:
//
//   market ntu [untiered]      market tu           market org
//   agent <id> <side>          agent <id> <side>   org <id>
//   contract <id> <a> <b> [w]  prim <id> <a> <b> <wing>
//                              value <owner> {w,u} <rational>
//   pref <owner> : {x,y} {x}   ...                 applicant <id>
//                                                  orgpref <o> : {i1,i2} {}
//                                                  apppref <i> : o1 o2
//
// Sides are left|center|right, wings left|right. Bundles are brace lists
// without spaces; {} is the empty bundle.

enum class MarketFileKind { Ntu, Tu, Org };

struct ParsedMarket {
  MarketFileKind kind = MarketFileKind::Ntu;
  NtuMarketSpec ntu;
  TuMarketSpec tu;
  OrgMarketSpec org;
};

// Throws input_error with a "line N:" location on malformed input.
ParsedMarket parse_market_text(const std::string& text);
ParsedMarket parse_market_stream(std::istream& in);
ParsedMarket load_market_file(const std::string& path);

// Canonical emission; parse(emit(spec)) reproduces the spec's market.
std::string emit_market(const NtuMarketSpec& spec);
std::string emit_market(const TuMarketSpec& spec);
std::string emit_market(const OrgMarketSpec& spec);

} // namespace matchkit
