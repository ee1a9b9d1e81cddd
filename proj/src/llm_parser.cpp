#include "leducmind/llm/parser.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <regex>
#include <sstream>

namespace leducmind::llm {

using game::PlayerAction;
using game::Rank;

namespace {

std::string lower(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
    return static_cast<char>(std::tolower(c));
  });
  return out;
}

std::string trim(const std::string& s) {
  size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

// Canonical section for a header line, or nullopt if the line is prose.
std::optional<std::string> classify_header(const std::string& line) {
  const std::string t = trim(line);
  if (t.empty() || t.back() != ':' || t.size() > 120) return std::nullopt;
  const std::string l = lower(t);
  if (l.find("plan selection") != std::string::npos) return "Plan Selection";
  if (l.find("chips gain") != std::string::npos ||
      (l.find("expected") != std::string::npos && l.find("gain") != std::string::npos)) {
    return "Expected Gain";
  }
  if (l.find("rate") != std::string::npos) return "Rates";
  if (l.find("belief on my") != std::string::npos ||
      l.find("guess") != std::string::npos) {
    return "Opponent Belief";
  }
  if (l.find("belief") != std::string::npos) return "Belief";
  if (l.find("pattern") != std::string::npos) return "Pattern";
  if (l.find("plan") != std::string::npos) return "Plans";
  if (l.find("reflexion") != std::string::npos || l.find("reflection") != std::string::npos) {
    return "Reflexion";
  }
  return std::nullopt;
}

std::map<std::string, std::string> sectionize(const std::string& text) {
  std::map<std::string, std::string> sections;
  std::istringstream in(text);
  std::string line;
  std::string current;
  std::string buffer;
  auto flush = [&] {
    if (!current.empty() && sections.find(current) == sections.end()) {
      sections[current] = buffer;
    }
    buffer.clear();
  };
  while (std::getline(in, line)) {
    if (const auto name = classify_header(line)) {
      flush();
      current = *name;
    } else if (!current.empty()) {
      buffer += line;
      buffer.push_back('\n');
    }
  }
  flush();
  return sections;
}

const std::regex& rank_percent_re() {
  static const std::regex re(
      R"(\b(jack|queen|king)s?\b[^.;\n()]{0,60}\(\s*(?:probability\s+(?:of\s+)?)?(\d+(?:\.\d+)?)\s*%(?:\s+probability)?\s*\))",
      std::regex::icase);
  return re;
}

std::optional<Rank> rank_from_word(const std::string& word) {
  const std::string w = lower(word);
  if (w == "jack") return Rank::Jack;
  if (w == "queen") return Rank::Queen;
  if (w == "king") return Rank::King;
  return std::nullopt;
}

std::optional<PlayerAction> action_from_word(const std::string& word) {
  const std::string w = lower(word);
  if (w == "call" || w == "calls" || w == "calling") return PlayerAction::Call;
  if (w == "raise" || w == "raises" || w == "raising") return PlayerAction::Raise;
  if (w == "fold" || w == "folds" || w == "folding") return PlayerAction::Fold;
  if (w == "check" || w == "checks" || w == "checking") return PlayerAction::Check;
  return std::nullopt;
}

// Maps "Plan 3" -> action by scanning "Plan N: Action" / "Plan N (Action)".
std::map<int, PlayerAction> plan_action_map(const std::string& text) {
  static const std::regex re(
      R"(plan\s*(\d+)\s*[:(\-]*\s*(call|raise|fold|check))", std::regex::icase);
  std::map<int, PlayerAction> out;
  for (auto it = std::sregex_iterator(text.begin(), text.end(), re);
       it != std::sregex_iterator(); ++it) {
    const int n = std::stoi((*it)[1].str());
    const auto action = action_from_word((*it)[2].str());
    if (action && out.find(n) == out.end()) out[n] = *action;
  }
  return out;
}

}  // namespace

BeliefExtract extract_belief(const std::string& text) {
  BeliefExtract out;
  std::array<std::optional<double>, game::kNumRanks> values{};
  for (auto it = std::sregex_iterator(text.begin(), text.end(), rank_percent_re());
       it != std::sregex_iterator(); ++it) {
    const auto rank = rank_from_word((*it)[1].str());
    if (!rank) continue;
    values[static_cast<size_t>(*rank)] = std::stod((*it)[2].str()) / 100.0;
  }
  double sum = 0.0;
  bool any = false;
  for (size_t i = 0; i < values.size(); ++i) {
    if (values[i]) {
      out.belief.p[i] = *values[i];
      sum += *values[i];
      any = true;
    }
  }
  if (!any || sum <= 0.0) return out;
  out.found = true;
  out.renormalized = std::abs(sum - 1.0) > 0.005;
  for (auto& v : out.belief.p) v /= sum;
  return out;
}

namespace {

double last_number(const std::string& text) {
  static const std::regex re(R"((-?\d+(?:\.\d+)?))");
  double value = 0.0;
  bool found = false;
  for (auto it = std::sregex_iterator(text.begin(), text.end(), re);
       it != std::sregex_iterator(); ++it) {
    value = std::stod((*it)[1].str());
    found = true;
  }
  if (!found) throw ParseError("non-numeric gain in: " + trim(text));
  return value;
}

std::map<PlayerAction, double> parse_gains(const std::string& section,
                                           const std::map<int, PlayerAction>& plans) {
  static const std::regex plan_re(R"(plan\s*(\d+))", std::regex::icase);
  struct Marker {
    int number;
    size_t start;
    size_t end;
  };
  std::vector<Marker> markers;
  for (auto it = std::sregex_iterator(section.begin(), section.end(), plan_re);
       it != std::sregex_iterator(); ++it) {
    markers.push_back({std::stoi((*it)[1].str()),
                       static_cast<size_t>(it->position()),
                       static_cast<size_t>(it->position() + it->length())});
  }
  std::map<PlayerAction, double> gains;
  for (size_t i = 0; i < markers.size(); ++i) {
    const size_t begin = markers[i].end;
    const size_t end = i + 1 < markers.size() ? markers[i + 1].start : section.size();
    const auto plan_it = plans.find(markers[i].number);
    if (plan_it == plans.end()) continue;
    gains[plan_it->second] = last_number(section.substr(begin, end - begin));
  }
  return gains;
}

PlayerAction parse_selection(const std::string& section,
                             const std::map<int, PlayerAction>& plans) {
  const std::string l = lower(section);
  size_t marker = std::string::npos;
  for (const char* word : {"best", "select", "choos"}) {
    const size_t pos = l.rfind(word);
    if (pos != std::string::npos && (marker == std::string::npos || pos > marker)) {
      marker = pos;
    }
  }

  static const std::regex token_re(
      R"(\b(call|raise|fold|check)\b|plan\s*(\d+))", std::regex::icase);
  struct Hit {
    size_t pos;
    std::optional<PlayerAction> action;
    int plan = -1;
  };
  std::vector<Hit> hits;
  for (auto it = std::sregex_iterator(section.begin(), section.end(), token_re);
       it != std::sregex_iterator(); ++it) {
    Hit hit;
    hit.pos = static_cast<size_t>(it->position());
    if ((*it)[1].matched) {
      hit.action = action_from_word((*it)[1].str());
    } else {
      hit.plan = std::stoi((*it)[2].str());
    }
    hits.push_back(hit);
  }

  auto resolve = [&](const Hit& hit) -> std::optional<PlayerAction> {
    if (hit.action) return hit.action;
    const auto it = plans.find(hit.plan);
    if (it != plans.end()) return it->second;
    return std::nullopt;
  };

  if (marker != std::string::npos) {
    constexpr size_t kWindow = 160;
    const Hit* forward = nullptr;
    const Hit* backward = nullptr;
    for (const auto& hit : hits) {
      if (hit.pos >= marker && hit.pos - marker <= kWindow) {
        if (!forward || hit.pos < forward->pos) forward = &hit;
      }
      if (hit.pos < marker && marker - hit.pos <= kWindow) {
        if (!backward || hit.pos > backward->pos) backward = &hit;
      }
    }
    for (const Hit* candidate : {forward, backward}) {
      if (candidate) {
        if (const auto action = resolve(*candidate)) return *action;
      }
    }
  } else {
    // No "best/select/choose" phrasing; accept a unique action mention.
    std::optional<PlayerAction> unique;
    for (const auto& hit : hits) {
      const auto action = resolve(hit);
      if (!action) continue;
      if (unique && *unique != *action) {
        unique.reset();
        break;
      }
      unique = action;
    }
    if (unique) return *unique;
  }
  throw ParseError("illegal selection");
}

}  // namespace

ParsedDeliberation parse_deliberation(const std::string& text,
                                      const std::vector<PlayerAction>& legal) {
  ParsedDeliberation out;
  out.sections = sectionize(text);

  const auto plans = plan_action_map(text);

  if (const auto it = out.sections.find("Belief"); it != out.sections.end()) {
    const auto extracted = extract_belief(it->second);
    if (extracted.found) {
      out.belief = extracted.belief;
      out.has_belief = true;
      out.belief_renormalized = extracted.renormalized;
    }
  }

  if (const auto it = out.sections.find("Expected Gain"); it != out.sections.end()) {
    out.plan_gains = parse_gains(it->second, plans);
  }

  const auto sel_it = out.sections.find("Plan Selection");
  if (sel_it == out.sections.end()) {
    throw ParseError("missing required section: Plan Selection");
  }
  out.selection = parse_selection(sel_it->second, plans);
  if (std::find(legal.begin(), legal.end(), out.selection) == legal.end()) {
    throw ParseError(std::string("illegal selection: ") +
                     game::action_name(out.selection));
  }
  return out;
}

// --- Behaviour pattern text -------------------------------------------------

namespace {

struct ClauseContext {
  std::optional<Rank> rank;
  int round = 0;                 // 0 = unknown -> fill both rounds
  std::optional<bool> facing;    // unset -> fill both
  bool pair_hint = false;        // "public card is a <same rank>"
  bool nonpair_hint = false;     // explicit different-public mention
};

void apply_round_words(const std::string& l, ClauseContext& ctx) {
  if (l.find("1st round") != std::string::npos ||
      l.find("first round") != std::string::npos ||
      l.find("round 1") != std::string::npos) {
    ctx.round = 1;
  }
  if (l.find("2nd round") != std::string::npos ||
      l.find("second round") != std::string::npos ||
      l.find("round 2") != std::string::npos) {
    ctx.round = 2;
  }
}

void store_row(belief::OpponentModel& model, opp::Tier tier, int round,
               std::optional<bool> facing, const opp::ActionDist& row,
               int& rows) {
  for (int f = 0; f < 2; ++f) {
    if (facing && *facing != static_cast<bool>(f)) continue;
    auto& slot = model.static_rows[static_cast<size_t>(tier)]
                                  [static_cast<size_t>(round - 1)][static_cast<size_t>(f)];
    slot = row;
    ++rows;
  }
}

}  // namespace

ParsedPattern parse_behavior_pattern(const std::string& text) {
  ParsedPattern out;
  out.raw_text = text;
  out.model.mode = belief::ModelMode::Static;

  static const std::regex holds_re(R"(holds?\s+a\s+(jack|queen|king))",
                                   std::regex::icase);
  static const std::regex public_re(
      R"(public\s+card\s+is\s+an?\s+(jack|queen|king))", std::regex::icase);
  static const std::regex action_pct_re(
      R"(\b(call|calls|raise|raises|fold|folds|check|checks)\b[^.;()]{0,40}\(\s*(?:probability\s+(?:of\s+)?)?(\d+(?:\.\d+)?)\s*%\s*\))",
      std::regex::icase);

  // Clauses separated by periods or bullet dashes; rank/round context is
  // sticky across clauses within a sentence block.
  std::vector<std::string> clauses;
  {
    std::string current;
    for (char c : text) {
      current.push_back(c);
      if (c == '.' || c == '\n') {
        clauses.push_back(current);
        current.clear();
      }
    }
    if (!trim(current).empty()) clauses.push_back(current);
  }

  ClauseContext ctx;
  for (const auto& clause : clauses) {
    const std::string l = lower(clause);
    apply_round_words(l, ctx);

    std::smatch m;
    if (std::regex_search(clause, m, holds_re)) {
      ctx.rank = rank_from_word(m[1].str());
      ctx.pair_hint = false;
      ctx.nonpair_hint = false;
      ctx.facing.reset();
    }
    if (std::regex_search(clause, m, public_re)) {
      const auto pub = rank_from_word(m[1].str());
      if (ctx.rank && pub == ctx.rank) {
        ctx.pair_hint = true;
      } else {
        ctx.nonpair_hint = true;
      }
    }
    if (l.find("opponent raises") != std::string::npos ||
        l.find("facing a raise") != std::string::npos ||
        l.find("if the opponent raises") != std::string::npos ||
        l.find("facing a bet") != std::string::npos) {
      ctx.facing = true;
    } else if (l.find("checks or calls") != std::string::npos ||
               l.find("unfaced") != std::string::npos ||
               l.find("no outstanding bet") != std::string::npos) {
      ctx.facing = false;
    }

    if (!ctx.rank) continue;
    opp::ActionDist row;
    bool any = false;
    for (auto it = std::sregex_iterator(clause.begin(), clause.end(), action_pct_re);
         it != std::sregex_iterator(); ++it) {
      const auto action = action_from_word((*it)[1].str());
      if (!action) continue;
      row[*action] += std::stod((*it)[2].str()) / 100.0;
      any = true;
    }
    if (!any) continue;
    const double total = row.sum();
    if (total <= 0.0) continue;
    for (auto& v : row.p) v /= total;

    const int round = ctx.round;
    const opp::Tier rank_tier = opp::hand_tier(*ctx.rank, std::nullopt);
    if (round == 2 && ctx.pair_hint) {
      store_row(out.model, opp::Tier::Pair, 2, ctx.facing, row, out.rows_parsed);
    } else if (round == 0) {
      store_row(out.model, rank_tier, 1, ctx.facing, row, out.rows_parsed);
      store_row(out.model, rank_tier, 2, ctx.facing, row, out.rows_parsed);
    } else {
      store_row(out.model, rank_tier, round, ctx.facing, row, out.rows_parsed);
    }
  }
  return out;
}

// --- Canonical rendering ----------------------------------------------------

namespace {

std::string format_percent(double value) {
  std::ostringstream out;
  out.precision(9);
  out << std::fixed << value * 100.0;
  std::string s = out.str();
  while (!s.empty() && s.back() == '0') s.pop_back();
  if (!s.empty() && s.back() == '.') s.pop_back();
  return s + "%";
}

std::string format_gain(double value) {
  std::ostringstream out;
  out.precision(12);
  out << value;
  return out.str();
}

}  // namespace

std::string serialize_deliberation(const ParsedDeliberation& parsed) {
  std::ostringstream out;
  if (parsed.has_belief) {
    out << "Belief:\n";
    out << "I believe the opponent holds a Jack (probability "
        << format_percent(parsed.belief[Rank::Jack]) << "), a Queen (probability "
        << format_percent(parsed.belief[Rank::Queen]) << "), or a King (probability "
        << format_percent(parsed.belief[Rank::King]) << ").\n";
  }
  out << "Plans:\n";
  int n = 0;
  std::map<PlayerAction, int> plan_numbers;
  for (const auto& [action, gain] : parsed.plan_gains) {
    (void)gain;
    plan_numbers[action] = ++n;
    out << "Plan " << n << ": " << game::action_name(action) << " - considered.\n";
  }
  out << "Expected Gain:\n";
  for (const auto& [action, gain] : parsed.plan_gains) {
    out << "Plan " << plan_numbers[action] << ": " << game::action_name(action)
        << " - Expected Chips Gain = " << format_gain(gain) << " chips.\n";
  }
  out << "Plan Selection:\n";
  out << "Based on the estimated expected chips gains, the best plan is to "
      << lower(game::action_name(parsed.selection)) << ".\n";
  return out.str();
}

std::string serialize_pattern(const belief::OpponentModel& model) {
  std::ostringstream out;
  const std::array<Rank, 3> ranks = {Rank::Jack, Rank::Queen, Rank::King};
  for (int round = 1; round <= 2; ++round) {
    out << (round == 1 ? "1st Round:" : "2nd Round:") << "\n";
    for (Rank rank : ranks) {
      for (int f = 1; f >= 0; --f) {
        const bool facing = f == 1;
        for (bool pair : {false, true}) {
          if (pair && round == 1) continue;
          const opp::Tier tier =
              pair ? opp::Tier::Pair : opp::hand_tier(rank, std::nullopt);
          belief::ModelContext ctx{round, facing, std::nullopt};
          const auto row = model.row(tier, ctx);
          out << "When the opponent holds a " << game::rank_name(rank);
          if (round == 2) {
            out << (pair ? std::string(" and the public card is a ") +
                               game::rank_name(rank)
                         : std::string(" and the public card is different"));
          }
          out << (facing ? ", facing a bet, he tends to "
                         : ", with no outstanding bet, he tends to ");
          bool first = true;
          for (auto action : game::all_actions()) {
            if (row[action] <= 0.0) continue;
            if (!first) out << " or ";
            out << lower(game::action_name(action)) << " ("
                << format_percent(row[action]) << ")";
            first = false;
          }
          out << ".\n";
        }
      }
    }
  }
  return out.str();
}

}  // namespace leducmind::llm
