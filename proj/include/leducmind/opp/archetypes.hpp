#pragma once

#include <string>
#include <vector>

#include "leducmind/opp/policy.hpp"

namespace leducmind::opp {

// Scripted opponents with fixed probability tables: a pure caller, an
// aggressor that never folds, a polarized bluffer, and a tight folder.
Policy archetype(const std::string& name);

const std::vector<std::string>& archetype_names();

// The folder variant whose response depends on what the opponent just did,
// not only on whether it faces a bet: it folds far more readily to an actual
// raise than when merely facing the blind at its opening decision.
Policy reactive_conservative_folder();

}  // namespace leducmind::opp
