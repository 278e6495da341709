#include "polattn/scenario_io.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "polattn/errors.hpp"

namespace polattn {

using nlohmann::json;

namespace {

// Maps each JSON pointer in a well-formed document to the line its value starts on.
std::map<std::string, int> pointer_lines(std::string_view text) {
  struct Frame {
    bool object;
    std::string key;
    long index = -1;
    bool want_key = true;
  };
  std::map<std::string, int> lines;
  std::vector<Frame> stack;
  int line = 1;

  auto escape = [](const std::string& s) {
    std::string out;
    for (char c : s) {
      if (c == '~') out += "~0";
      else if (c == '/') out += "~1";
      else out += c;
    }
    return out;
  };
  auto pointer = [&] {
    std::string p;
    for (const auto& f : stack) p += "/" + (f.object ? escape(f.key) : std::to_string(f.index));
    return p;
  };
  auto value_start = [&] {
    if (!stack.empty() && !stack.back().object) ++stack.back().index;
    lines.emplace(pointer(), line);
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    switch (c) {
      case '\n': ++line; break;
      case ' ': case '\t': case '\r': break;
      case '{':
      case '[':
        value_start();
        stack.push_back({c == '{', {}, -1, true});
        break;
      case '}':
      case ']':
        if (!stack.empty()) stack.pop_back();
        break;
      case ',':
        if (!stack.empty() && stack.back().object) stack.back().want_key = true;
        break;
      case ':':
        if (!stack.empty()) stack.back().want_key = false;
        break;
      case '"': {
        std::string s;
        for (++i; i < text.size() && text[i] != '"'; ++i) {
          if (text[i] == '\\' && i + 1 < text.size()) ++i;
          s += text[i];
        }
        if (!stack.empty() && stack.back().object && stack.back().want_key) {
          stack.back().key = s;
        } else {
          value_start();
        }
        break;
      }
      default:
        value_start();
        while (i + 1 < text.size() && std::string_view(",]}: \t\r\n").find(text[i + 1]) == std::string_view::npos) ++i;
        break;
    }
  }
  return lines;
}

struct SchemaError {
  std::string pointer;
  std::string message;
};

[[noreturn]] void fail(const std::string& ptr, const std::string& msg) { throw SchemaError{ptr, msg}; }

std::string type_name(const json& j) { return j.type_name(); }

const json& require(const json& obj, const std::string& ptr, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) fail(ptr, std::string("missing required field '") + key + "'");
  return *it;
}

void allow_keys(const json& obj, const std::string& ptr, std::initializer_list<const char*> keys) {
  if (!obj.is_object()) fail(ptr, "expected an object, found " + type_name(obj));
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* k : keys) known = known || it.key() == k;
    if (!known) fail(ptr + "/" + it.key(), "unknown field '" + it.key() + "'");
  }
}

double number(const json& j, const std::string& ptr) {
  if (!j.is_number()) fail(ptr, "expected a number, found " + type_name(j));
  return j.get<double>();
}

std::vector<double> numbers(const json& j, const std::string& ptr) {
  if (!j.is_array()) fail(ptr, "expected an array of numbers, found " + type_name(j));
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number(j[i], ptr + "/" + std::to_string(i)));
  return out;
}

std::string string(const json& j, const std::string& ptr) {
  if (!j.is_string()) fail(ptr, "expected a string, found " + type_name(j));
  return j.get<std::string>();
}

// Runs a constructor and attributes its ValidationError to ptr.
template <class F>
auto at(const std::string& ptr, F&& f) {
  try {
    return f();
  } catch (const ValidationError& e) {
    fail(ptr, e.what());
  }
}

std::vector<CandidateType> candidate_types(const json& j, const std::string& ptr) {
  if (!j.is_array()) fail(ptr, "expected an array of {type, prob}");
  std::vector<CandidateType> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string p = ptr + "/" + std::to_string(i);
    allow_keys(j[i], p, {"type", "prob"});
    out.push_back({number(require(j[i], p, "type"), p + "/type"), number(require(j[i], p, "prob"), p + "/prob")});
  }
  return out;
}

Scenario from_json(const json& doc) {
  allow_keys(doc, "", {"schema_version", "policies", "utility", "candidates", "electorate", "attention", "news",
                       "commitment", "dissemination", "issues", "assignment"});
  const json& version = require(doc, "", "schema_version");
  if (!version.is_number_integer() || version.get<long long>() != kSchemaVersion)
    fail("/schema_version", "unsupported schema_version (expected " + std::to_string(kSchemaVersion) + ")");

  Scenario s;

  const json& pol = require(doc, "", "policies");
  allow_keys(pol, "/policies", {"beta", "alpha"});
  s.beta_policies = at("/policies/beta", [&] {
    return PolicyAxis(Side::Beta, numbers(require(pol, "/policies", "beta"), "/policies/beta"));
  });
  if (pol.contains("alpha"))
    s.alpha_policies = at("/policies/alpha",
                          [&] { return PolicyAxis(Side::Alpha, numbers(pol["alpha"], "/policies/alpha")); });
  else
    s.alpha_policies = PolicyAxis::mirror_of(s.beta_policies);

  const json& ut = require(doc, "", "utility");
  allow_keys(ut, "/utility", {"voter", "table", "office_rent", "winner_weight", "loser_weight", "loser_sign"});
  CandidateParams cp;
  if (ut.contains("office_rent")) cp.office_rent = number(ut["office_rent"], "/utility/office_rent");
  if (ut.contains("winner_weight")) cp.winner_weight = number(ut["winner_weight"], "/utility/winner_weight");
  if (ut.contains("loser_weight")) cp.loser_weight = number(ut["loser_weight"], "/utility/loser_weight");
  if (ut.contains("loser_sign")) {
    if (!ut["loser_sign"].is_number_integer()) fail("/utility/loser_sign", "expected +1 or -1");
    cp.loser_sign = ut["loser_sign"].get<int>();
    if (cp.loser_sign != 1 && cp.loser_sign != -1) fail("/utility/loser_sign", "expected +1 or -1");
  }
  const std::string voter = string(require(ut, "/utility", "voter"), "/utility/voter");
  if (voter == "absolute_loss") {
    s.utility = UtilitySpec::absolute_loss(cp);
  } else if (voter == "quadratic") {
    s.utility = UtilitySpec::quadratic(cp);
  } else if (voter == "table") {
    const json& tab = require(ut, "/utility", "table");
    allow_keys(tab, "/utility/table", {"policies", "types", "values"});
    auto pols = numbers(require(tab, "/utility/table", "policies"), "/utility/table/policies");
    auto types = numbers(require(tab, "/utility/table", "types"), "/utility/table/types");
    const json& vals = require(tab, "/utility/table", "values");
    if (!vals.is_array() || vals.size() != pols.size())
      fail("/utility/table/values", "expected one row per policy");
    std::vector<double> flat;
    for (std::size_t i = 0; i < vals.size(); ++i) {
      const std::string p = "/utility/table/values/" + std::to_string(i);
      auto row = numbers(vals[i], p);
      if (row.size() != types.size()) fail(p, "expected one value per type");
      flat.insert(flat.end(), row.begin(), row.end());
    }
    s.utility = at("/utility/table", [&] {
      return UtilitySpec::tabulated(UtilityTable(std::move(pols), std::move(types), std::move(flat)), cp);
    });
  } else {
    fail("/utility/voter", "unknown voter family '" + voter + "' (absolute_loss, quadratic, table)");
  }

  const json& cand = require(doc, "", "candidates");
  allow_keys(cand, "/candidates", {"beta", "alpha"});
  s.beta_candidate = at("/candidates/beta", [&] {
    return CandidateSpec(Side::Beta, candidate_types(require(cand, "/candidates", "beta"), "/candidates/beta"));
  });
  if (cand.contains("alpha"))
    s.alpha_candidate = at("/candidates/alpha", [&] {
      return CandidateSpec(Side::Alpha, candidate_types(cand["alpha"], "/candidates/alpha"));
    });
  else
    s.alpha_candidate = CandidateSpec::mirror_of(s.beta_candidate);

  const json& el = require(doc, "", "electorate");
  if (!el.is_array()) fail("/electorate", "expected an array of {type, weight}");
  std::vector<VoterGroup> groups;
  for (std::size_t i = 0; i < el.size(); ++i) {
    const std::string p = "/electorate/" + std::to_string(i);
    allow_keys(el[i], p, {"type", "weight"});
    groups.push_back({number(require(el[i], p, "type"), p + "/type"), number(require(el[i], p, "weight"), p + "/weight")});
  }
  s.electorate = at("/electorate", [&] { return Electorate(std::move(groups)); });

  const json& att = require(doc, "", "attention");
  allow_keys(att, "/attention", {"mu"});
  s.mu = number(require(att, "/attention", "mu"), "/attention/mu");
  if (!(s.mu > 0.0)) fail("/attention/mu", "mu must be positive");

  if (doc.contains("news")) {
    const json& nw = doc["news"];
    allow_keys(nw, "/news", {"family", "xi", "signals", "policies", "rows"});
    const std::string fam = string(require(nw, "/news", "family"), "/news/family");
    std::vector<double> grid(s.beta_policies.values().begin(), s.beta_policies.values().end());
    if (fam == "slant") {
      const double xi = number(require(nw, "/news", "xi"), "/news/xi");
      auto sig = nw.contains("signals") ? numbers(nw["signals"], "/news/signals")
                                         : std::vector<double>{1.0 / 3.0, 2.0 / 3.0};
      s.news = at("/news", [&] { return NewsTechnology::slant(xi, grid, sig); });
    } else if (fam == "rows") {
      auto sig = numbers(require(nw, "/news", "signals"), "/news/signals");
      auto pols = nw.contains("policies") ? numbers(nw["policies"], "/news/policies") : grid;
      const json& rows = require(nw, "/news", "rows");
      if (!rows.is_array() || rows.size() != pols.size()) fail("/news/rows", "expected one row per policy");
      Matrix<double> m(pols.size(), sig.size());
      for (std::size_t i = 0; i < rows.size(); ++i) {
        const std::string p = "/news/rows/" + std::to_string(i);
        auto r = numbers(rows[i], p);
        if (r.size() != sig.size()) fail(p, "expected one probability per signal");
        for (std::size_t k = 0; k < r.size(); ++k) m(i, k) = r[k];
      }
      s.news = at("/news", [&] { return NewsTechnology(sig, pols, m); });
    } else if (fam == "fully_revealing") {
      s.news = at("/news", [&] { return NewsTechnology::fully_revealing(grid); });
    } else {
      fail("/news/family", "unknown news family '" + fam + "' (slant, rows, fully_revealing)");
    }
  }

  if (doc.contains("commitment")) {
    allow_keys(doc["commitment"], "/commitment", {"eta"});
    s.eta = number(require(doc["commitment"], "/commitment", "eta"), "/commitment/eta");
  }
  if (doc.contains("dissemination")) {
    allow_keys(doc["dissemination"], "/dissemination", {"cost"});
    s.dissemination_cost = number(require(doc["dissemination"], "/dissemination", "cost"), "/dissemination/cost");
  }
  if (doc.contains("issues")) {
    const json& is = doc["issues"];
    allow_keys(is, "/issues", {"frontier", "frontier_points", "utility2", "grid_points"});
    IssuesSpec spec;
    if (is.contains("frontier")) spec.frontier = string(is["frontier"], "/issues/frontier");
    if (is.contains("utility2")) spec.utility2 = string(is["utility2"], "/issues/utility2");
    if (is.contains("grid_points")) {
      if (!is["grid_points"].is_number_integer() || is["grid_points"].get<int>() < 3)
        fail("/issues/grid_points", "expected an integer >= 3");
      spec.grid_points = is["grid_points"].get<int>();
    }
    if (is.contains("frontier_points")) {
      const json& fp = is["frontier_points"];
      if (!fp.is_array()) fail("/issues/frontier_points", "expected an array of [a, b] pairs");
      for (std::size_t i = 0; i < fp.size(); ++i) {
        const std::string p = "/issues/frontier_points/" + std::to_string(i);
        auto pair = numbers(fp[i], p);
        if (pair.size() != 2) fail(p, "expected [a, b]");
        spec.frontier_points.emplace_back(pair[0], pair[1]);
      }
    }
    if (spec.frontier != "quarter_circle" && spec.frontier != "tabulated")
      fail("/issues/frontier", "unknown frontier '" + spec.frontier + "' (quarter_circle, tabulated)");
    if (spec.frontier == "tabulated" && spec.frontier_points.empty())
      fail("/issues/frontier_points", "tabulated frontier needs frontier_points");
    if (spec.utility2 != "weighted_exponential")
      fail("/issues/utility2", "unknown two-issue utility '" + spec.utility2 + "' (weighted_exponential)");
    s.issues = spec;
  }
  if (doc.contains("assignment")) {
    allow_keys(doc["assignment"], "/assignment", {"beta"});
    s.assignment = numbers(require(doc["assignment"], "/assignment", "beta"), "/assignment/beta");
  }

  // Cross-reference checks have no single location; attribute them to the root.
  at("", [&] {
    s.validate();
    return 0;
  });
  return s;
}

json candidate_json(const CandidateSpec& c) {
  json arr = json::array();
  for (const auto& t : c.types()) arr.push_back({{"type", t.type}, {"prob", t.prob}});
  return arr;
}

json to_json(const Scenario& s) {
  json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["policies"] = {{"beta", std::vector<double>(s.beta_policies.values().begin(), s.beta_policies.values().end())},
                     {"alpha", std::vector<double>(s.alpha_policies.values().begin(), s.alpha_policies.values().end())}};
  const auto& cp = s.utility.candidate();
  json ut = {{"office_rent", cp.office_rent},
             {"winner_weight", cp.winner_weight},
             {"loser_weight", cp.loser_weight},
             {"loser_sign", cp.loser_sign}};
  switch (s.utility.family()) {
    case VoterFamily::AbsoluteLoss: ut["voter"] = "absolute_loss"; break;
    case VoterFamily::Quadratic: ut["voter"] = "quadratic"; break;
    case VoterFamily::Tabulated: {
      ut["voter"] = "table";
      const UtilityTable& t = *s.utility.table();
      json rows = json::array();
      const std::size_t nt = t.types().size();
      for (std::size_t i = 0; i < t.policies().size(); ++i)
        rows.push_back(std::vector<double>(t.values().begin() + i * nt, t.values().begin() + (i + 1) * nt));
      ut["table"] = {{"policies", std::vector<double>(t.policies().begin(), t.policies().end())},
                     {"types", std::vector<double>(t.types().begin(), t.types().end())},
                     {"values", rows}};
      break;
    }
  }
  doc["utility"] = ut;
  doc["candidates"] = {{"beta", candidate_json(s.beta_candidate)}, {"alpha", candidate_json(s.alpha_candidate)}};
  json el = json::array();
  for (const auto& g : s.electorate.groups()) el.push_back({{"type", g.type}, {"weight", g.weight}});
  doc["electorate"] = el;
  doc["attention"] = {{"mu", s.mu}};
  if (s.news) {
    const auto& f = *s.news;
    std::vector<double> sig(f.signals().begin(), f.signals().end());
    if (f.slant_parameter()) {
      doc["news"] = {{"family", "slant"}, {"xi", *f.slant_parameter()}, {"signals", sig}};
    } else {
      json rows = json::array();
      for (std::size_t i = 0; i < f.rows().rows(); ++i) {
        std::vector<double> r(f.rows().cols());
        for (std::size_t k = 0; k < r.size(); ++k) r[k] = f.rows()(i, k);
        rows.push_back(r);
      }
      doc["news"] = {{"family", "rows"},
                     {"signals", sig},
                     {"policies", std::vector<double>(f.policies().begin(), f.policies().end())},
                     {"rows", rows}};
    }
  }
  if (s.eta != 1.0) doc["commitment"] = {{"eta", s.eta}};
  if (s.dissemination_cost) doc["dissemination"] = {{"cost", *s.dissemination_cost}};
  if (s.issues) {
    json fp = json::array();
    for (const auto& [a, b] : s.issues->frontier_points) fp.push_back({a, b});
    doc["issues"] = {{"frontier", s.issues->frontier},
                     {"utility2", s.issues->utility2},
                     {"grid_points", s.issues->grid_points}};
    if (!fp.empty()) doc["issues"]["frontier_points"] = fp;
  }
  if (s.assignment) doc["assignment"] = {{"beta", *s.assignment}};
  return doc;
}

}  // namespace

Scenario parse_scenario(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    // Translate the byte offset into a line and column.
    std::size_t line = 1, col = 1;
    const std::size_t end = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < end; ++i) {
      if (text[i] == '\n') ++line, col = 1;
      else ++col;
    }
    throw ValidationError("line " + std::to_string(line) + ", column " + std::to_string(col) +
                          ": JSON syntax error: " + e.what());
  }
  try {
    return from_json(doc);
  } catch (const SchemaError& e) {
    const auto lines = pointer_lines(text);
    std::string p = e.pointer;
    for (;;) {
      auto it = lines.find(p);
      if (it != lines.end())
        throw ValidationError("line " + std::to_string(it->second) + ": " + (e.pointer.empty() ? "/" : e.pointer) +
                              ": " + e.message);
      if (p.empty()) break;
      p.erase(p.rfind('/'));
    }
    throw ValidationError((e.pointer.empty() ? "/" : e.pointer) + ": " + e.message);
  }
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open scenario file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str());
}

std::string dump_scenario(const Scenario& scenario, int indent) { return to_json(scenario).dump(indent); }

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string scenario_hash(const Scenario& scenario) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a64(dump_scenario(scenario, -1))));
  return buf;
}

}  // namespace polattn
