#pragma once

#include <string>

#include "leducmind/harness/match.hpp"

namespace leducmind::harness {

// Writes summary.json, payoffs.csv and one actions_<n>.svg bar chart per
// agent into out_dir (created if absent).
void emit_report(const MatchReport& report, const std::string& out_dir);

// Minimal standalone SVG bar chart of the four action shares.
std::string action_chart_svg(const std::string& title,
                             const std::array<double, game::kNumActions>& shares);

}  // namespace leducmind::harness
