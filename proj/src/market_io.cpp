#include "matchkit/market_io.hpp"

#include <fstream>
#include <sstream>

namespace matchkit {

namespace {

[[noreturn]] void fail(int line, const std::string& msg) {
  throw input_error("line " + std::to_string(line) + ": " + msg);
}

std::vector<std::string> tokens_of(const std::string& line) {
  std::istringstream ss(line);
  std::vector<std::string> out;
  std::string tok;
  while (ss >> tok) out.push_back(tok);
  return out;
}

Side parse_side(const std::string& s, int line) {
  if (s == "left") return Side::Left;
  if (s == "center") return Side::Center;
  if (s == "right") return Side::Right;
  fail(line, "unknown side: " + s);
}

Wing parse_wing(const std::string& s, int line) {
  if (s == "left") return Wing::Left;
  if (s == "right") return Wing::Right;
  fail(line, "unknown wing: " + s);
}

std::vector<std::string> parse_bundle(const std::string& tok, int line) {
  if (tok.size() < 2 || tok.front() != '{' || tok.back() != '}')
    fail(line, "expected a brace bundle, got: " + tok);
  std::vector<std::string> out;
  std::string body = tok.substr(1, tok.size() - 2);
  std::string cur;
  for (char ch : body) {
    if (ch == ',') {
      if (cur.empty()) fail(line, "empty id in bundle: " + tok);
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  else if (!body.empty()) fail(line, "trailing comma in bundle: " + tok);
  return out;
}

std::string emit_bundle(const std::vector<std::string>& ids) {
  std::string out = "{";
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i) out += ",";
    out += ids[i];
  }
  return out + "}";
}

// Tokens after "<record> <owner> :".
std::vector<std::string> ranking_tail(const std::vector<std::string>& toks,
                                      int line) {
  if (toks.size() < 3 || toks[2] != ":")
    fail(line, "expected '<record> <owner> : ...'");
  return {toks.begin() + 3, toks.end()};
}

} // namespace

ParsedMarket parse_market_stream(std::istream& in) {
  ParsedMarket pm;
  bool header_seen = false;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    auto toks = tokens_of(raw);
    if (toks.empty() || toks[0][0] == '#') continue;
    const std::string& rec = toks[0];

    if (!header_seen) {
      if (rec != "market" || toks.size() < 2)
        fail(line, "expected 'market ntu|tu|org' header");
      if (toks[1] == "ntu") {
        pm.kind = MarketFileKind::Ntu;
        pm.ntu.tiered = !(toks.size() >= 3 && toks[2] == "untiered");
        if (toks.size() >= 3 && toks[2] != "untiered")
          fail(line, "unknown market flag: " + toks[2]);
      } else if (toks[1] == "tu") {
        pm.kind = MarketFileKind::Tu;
      } else if (toks[1] == "org") {
        pm.kind = MarketFileKind::Org;
      } else {
        fail(line, "unknown market kind: " + toks[1]);
      }
      header_seen = true;
      continue;
    }

    switch (pm.kind) {
      case MarketFileKind::Ntu:
        if (rec == "agent" && toks.size() == 3) {
          pm.ntu.agents.push_back({toks[1], parse_side(toks[2], line)});
        } else if (rec == "contract" &&
                   (toks.size() == 4 || toks.size() == 5)) {
          NtuContractSpec c;
          c.id = toks[1];
          c.first = toks[2];
          c.second = toks[3];
          if (toks.size() == 5) c.wing = parse_wing(toks[4], line);
          if (pm.ntu.tiered && !c.wing)
            fail(line, "tiered contracts need a wing");
          if (!pm.ntu.tiered && c.wing)
            fail(line, "untiered contracts carry no wing");
          pm.ntu.contracts.push_back(std::move(c));
        } else if (rec == "pref") {
          NtuPreferenceSpec p;
          p.owner = toks.size() >= 2 ? toks[1] : "";
          bool declared = false;
          for (const auto& a : pm.ntu.agents)
            if (a.id == p.owner) declared = true;
          if (!declared)
            fail(line, "pref owner is not a declared agent: " + p.owner);
          for (const auto& tok : ranking_tail(toks, line))
            p.ranking.push_back(parse_bundle(tok, line));
          pm.ntu.preferences.push_back(std::move(p));
        } else {
          fail(line, "bad ntu record: " + raw);
        }
        break;

      case MarketFileKind::Tu:
        if (rec == "agent" && toks.size() == 3) {
          pm.tu.agents.push_back({toks[1], parse_side(toks[2], line)});
        } else if (rec == "prim" && toks.size() == 5) {
          pm.tu.primitives.push_back(
              {toks[1], toks[2], toks[3], parse_wing(toks[4], line)});
        } else if (rec == "value" && toks.size() == 4) {
          TuValuationEntry e;
          e.owner = toks[1];
          e.bundle = parse_bundle(toks[2], line);
          e.value = toks[3];
          try {
            parse_rat(e.value);
          } catch (const input_error&) {
            fail(line, "bad rational: " + toks[3]);
          }
          pm.tu.valuations.push_back(std::move(e));
        } else {
          fail(line, "bad tu record: " + raw);
        }
        break;

      case MarketFileKind::Org:
        if (rec == "org" && toks.size() == 2) {
          pm.org.organizations.push_back(toks[1]);
        } else if (rec == "applicant" && toks.size() == 2) {
          pm.org.applicants.push_back(toks[1]);
        } else if (rec == "orgpref") {
          if (toks.size() < 2) fail(line, "orgpref needs an owner");
          auto& ranking = pm.org.org_rankings[toks[1]];
          if (!ranking.empty())
            fail(line, "duplicate orgpref record for " + toks[1]);
          for (const auto& tok : ranking_tail(toks, line))
            ranking.push_back(parse_bundle(tok, line));
          if (ranking.empty())
            fail(line, "orgpref for " + toks[1] + " lists nothing");
        } else if (rec == "apppref") {
          if (toks.size() < 2) fail(line, "apppref needs an owner");
          auto [it, inserted] =
              pm.org.app_rankings.emplace(toks[1], ranking_tail(toks, line));
          if (!inserted) fail(line, "duplicate apppref record for " + toks[1]);
        } else {
          fail(line, "bad org record: " + raw);
        }
        break;
    }
  }
  if (!header_seen) throw input_error("empty market file");
  return pm;
}

ParsedMarket parse_market_text(const std::string& text) {
  std::istringstream ss(text);
  return parse_market_stream(ss);
}

ParsedMarket load_market_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw input_error("cannot open " + path);
  return parse_market_stream(in);
}

std::string emit_market(const NtuMarketSpec& spec) {
  std::string out = spec.tiered ? "market ntu\n" : "market ntu untiered\n";
  for (const auto& a : spec.agents)
    out += "agent " + a.id + " " + side_name(a.side) + "\n";
  for (const auto& c : spec.contracts) {
    out += "contract " + c.id + " " + c.first + " " + c.second;
    if (c.wing) out += " " + wing_name(*c.wing);
    out += "\n";
  }
  for (const auto& p : spec.preferences) {
    out += "pref " + p.owner + " :";
    for (const auto& b : p.ranking) out += " " + emit_bundle(b);
    out += "\n";
  }
  return out;
}

std::string emit_market(const TuMarketSpec& spec) {
  std::string out = "market tu\n";
  for (const auto& a : spec.agents)
    out += "agent " + a.id + " " + side_name(a.side) + "\n";
  for (const auto& w : spec.primitives)
    out += "prim " + w.id + " " + w.first + " " + w.second + " " +
           wing_name(w.wing) + "\n";
  for (const auto& v : spec.valuations)
    out += "value " + v.owner + " " + emit_bundle(v.bundle) + " " + v.value +
           "\n";
  return out;
}

std::string emit_market(const OrgMarketSpec& spec) {
  std::string out = "market org\n";
  for (const auto& o : spec.organizations) out += "org " + o + "\n";
  for (const auto& a : spec.applicants) out += "applicant " + a + "\n";
  for (const auto& o : spec.organizations) {
    auto it = spec.org_rankings.find(o);
    if (it == spec.org_rankings.end()) continue;
    out += "orgpref " + o + " :";
    for (const auto& b : it->second) out += " " + emit_bundle(b);
    out += "\n";
  }
  for (const auto& a : spec.applicants) {
    auto it = spec.app_rankings.find(a);
    if (it == spec.app_rankings.end()) continue;
    out += "apppref " + a + " :";
    for (const auto& o : it->second) out += " " + o;
    out += "\n";
  }
  return out;
}

} // namespace matchkit
