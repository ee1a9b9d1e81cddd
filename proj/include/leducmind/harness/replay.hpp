#pragma once

#include <string>
#include <vector>

#include "leducmind/game/record.hpp"

namespace leducmind::harness {

struct ReplayError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Line-delimited UTF-8, one JSON object per game:
// {schema_version: 1, game_id, seed, seats: {"0","1"}, deal: {hole0, hole1,
//  public}, steps: [{seat, round, legal, action, deliberation?}], payoffs:
//  [p0, p1], hindsight: bool}.
// redact strips raw prompts/completions from persisted deliberations.
void write_replays(const std::vector<game::GameRecord>& records,
                   const std::string& path, bool redact = false);

// Observations are reconstructed by replaying each deal through the engine;
// inconsistent lines fail with their line number.
std::vector<game::GameRecord> read_replays(const std::string& path,
                                           const game::LeducConfig& config = {});

std::string record_to_line(const game::GameRecord& record, bool redact = false);
game::GameRecord record_from_line(const std::string& line,
                                  const game::LeducConfig& config = {});

}  // namespace leducmind::harness
