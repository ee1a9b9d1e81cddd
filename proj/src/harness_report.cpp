#include "leducmind/harness/report.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace leducmind::harness {

using nlohmann::json;

std::string action_chart_svg(const std::string& title,
                             const std::array<double, game::kNumActions>& shares) {
  const int width = 360, height = 240, base = 200, bar_width = 60, gap = 24;
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\">\n";
  out << "<text x=\"12\" y=\"20\" font-size=\"14\">" << title << "</text>\n";
  out << "<line x1=\"12\" y1=\"" << base << "\" x2=\"" << width - 12
      << "\" y2=\"" << base << "\" stroke=\"black\"/>\n";
  int x = 30;
  for (auto action : game::all_actions()) {
    const double share = shares[static_cast<size_t>(action)];
    const int bar = static_cast<int>(share * 150.0);
    out << "<rect x=\"" << x << "\" y=\"" << base - bar << "\" width=\""
        << bar_width << "\" height=\"" << bar << "\" fill=\"steelblue\"/>\n";
    out << "<text x=\"" << x << "\" y=\"" << base + 16 << "\" font-size=\"12\">"
        << game::action_name(action) << "</text>\n";
    std::ostringstream pct;
    pct.precision(1);
    pct << std::fixed << share * 100.0 << "%";
    out << "<text x=\"" << x << "\" y=\"" << base - bar - 4
        << "\" font-size=\"11\">" << pct.str() << "</text>\n";
    x += bar_width + gap;
  }
  out << "</svg>\n";
  return out.str();
}

void emit_report(const MatchReport& report, const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);

  {
    json summary;
    summary["agents"] = {report.agent_names[0], report.agent_names[1]};
    summary["protocol"] = report.protocol;
    summary["n_games"] = report.per_game_payoffs.size();
    summary["totals"] = {{report.agent_names[0], report.totals[0]},
                         {report.agent_names[1], report.totals[1]}};
    summary["winner"] = report.winner;
    for (int i = 0; i < 2; ++i) {
      json shares;
      for (auto action : game::all_actions()) {
        shares[game::action_name(action)] =
            report.action_shares[static_cast<size_t>(i)][static_cast<size_t>(action)];
      }
      summary["action_percentages"][report.agent_names[static_cast<size_t>(i)]] =
          std::move(shares);
    }
    if (!report.config_snapshot.empty()) {
      summary["config"] = json::parse(report.config_snapshot);
    }
    std::ofstream file(out_dir + "/summary.json");
    if (!file) throw std::runtime_error("cannot write " + out_dir + "/summary.json");
    file << summary.dump(2) << '\n';
  }

  {
    std::ofstream file(out_dir + "/payoffs.csv");
    if (!file) throw std::runtime_error("cannot write " + out_dir + "/payoffs.csv");
    file << "game," << report.agent_names[0] << "," << report.agent_names[1]
         << "\n";
    for (size_t i = 0; i < report.per_game_payoffs.size(); ++i) {
      file << i << "," << report.per_game_payoffs[i][0] << ","
           << report.per_game_payoffs[i][1] << "\n";
    }
  }

  for (int i = 0; i < 2; ++i) {
    std::ofstream file(out_dir + "/actions_" + std::to_string(i) + ".svg");
    if (!file) throw std::runtime_error("cannot write action chart");
    file << action_chart_svg(report.agent_names[static_cast<size_t>(i)],
                             report.action_shares[static_cast<size_t>(i)]);
  }
}

}  // namespace leducmind::harness
