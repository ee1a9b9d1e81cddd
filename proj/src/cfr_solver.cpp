#include "leducmind/cfr/solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace leducmind::cfr {

using game::GameState;
using game::PlayerAction;
using game::Rank;

std::string InfoSetKey::to_string() const {
  std::string out;
  out.push_back('0' + static_cast<char>(player));
  out.push_back('|');
  out.push_back(game::rank_letter(own));
  out.push_back('|');
  out.push_back(public_rank ? game::rank_letter(*public_rank) : '-');
  out.push_back('|');
  out += betting;
  return out;
}

InfoSetKey InfoSetKey::from_observation(const game::Observation& obs,
                                        const game::LeducConfig& config) {
  InfoSetKey key;
  key.player = obs.player;
  key.own = obs.private_card;
  key.public_rank = obs.public_card;
  key.betting = game::betting_string(obs.betting_sequence_public, config);
  return key;
}

std::optional<InfoSetKey> InfoSetKey::parse(const std::string& text) {
  if (text.size() < 6 || text[1] != '|' || text[3] != '|' || text[5] != '|') {
    return std::nullopt;
  }
  if (text[0] != '0' && text[0] != '1') return std::nullopt;
  InfoSetKey key;
  key.player = text[0] - '0';
  try {
    key.own = game::rank_from_letter(text[2]);
    if (text[4] != '-') key.public_rank = game::rank_from_letter(text[4]);
  } catch (const std::invalid_argument&) {
    return std::nullopt;
  }
  key.betting = text.substr(6);
  return key;
}

std::vector<PlayerAction> legal_actions_for_key(const InfoSetKey& key,
                                                const game::LeducConfig& config) {
  std::array<int, 2> contrib = {config.small_blind, config.big_blind};
  int round = 1;
  int to_act = 0;
  int raises = 0;
  int acted = 0;
  for (char c : key.betting) {
    if (c == '/') continue;  // decorative separator; closure is re-derived
    switch (c) {
      case 'c':
        contrib[to_act] = contrib[1 - to_act];
        break;
      case 'r':
        contrib[to_act] = std::max(contrib[to_act], contrib[1 - to_act]) +
                          config.raise_size[static_cast<size_t>(round - 1)];
        ++raises;
        break;
      case 'k':
        break;
      default:
        throw std::invalid_argument(std::string("bad betting char: ") + c);
    }
    ++acted;
    to_act = 1 - to_act;
    if (round == 1 && acted >= 2 && contrib[0] == contrib[1]) {
      round = 2;
      to_act = 0;
      raises = 0;
      acted = 0;
    }
  }
  std::vector<PlayerAction> out;
  const bool raise_ok = raises < config.max_raises_per_round;
  if (contrib[to_act] < contrib[1 - to_act]) {
    out.push_back(PlayerAction::Call);
    if (raise_ok) out.push_back(PlayerAction::Raise);
    out.push_back(PlayerAction::Fold);
  } else {
    out.push_back(PlayerAction::Check);
    if (raise_ok) out.push_back(PlayerAction::Raise);
  }
  return out;
}

namespace {

struct TreeNode {
  bool terminal = false;
  double payoff0 = 0.0;  // terminal payoff, seat-0 perspective
  int player = 0;
  int infoset = -1;
  std::vector<std::pair<PlayerAction, int>> children;
};

struct InfoSetState {
  std::string key;
  std::vector<PlayerAction> actions;
  std::array<double, game::kNumActions> regret_sum{};
  std::array<double, game::kNumActions> strategy_sum{};
};

std::array<double, game::kNumActions> regret_match(const InfoSetState& I) {
  std::array<double, game::kNumActions> sigma{};
  double positive = 0.0;
  for (auto a : I.actions) positive += std::max(0.0, I.regret_sum[static_cast<size_t>(a)]);
  if (positive > 0.0) {
    for (auto a : I.actions) {
      sigma[static_cast<size_t>(a)] =
          std::max(0.0, I.regret_sum[static_cast<size_t>(a)]) / positive;
    }
  } else {
    const double u = 1.0 / static_cast<double>(I.actions.size());
    for (auto a : I.actions) sigma[static_cast<size_t>(a)] = u;
  }
  return sigma;
}

std::array<double, game::kNumActions> average_from_sums(
    const std::array<double, game::kNumActions>& sums,
    const std::vector<PlayerAction>& legal) {
  std::array<double, game::kNumActions> avg{};
  double total = 0.0;
  for (auto a : legal) total += sums[static_cast<size_t>(a)];
  if (total > 0.0) {
    for (auto a : legal) avg[static_cast<size_t>(a)] = sums[static_cast<size_t>(a)] / total;
  } else {
    const double u = 1.0 / static_cast<double>(legal.size());
    for (auto a : legal) avg[static_cast<size_t>(a)] = u;
  }
  return avg;
}

}  // namespace

struct CfrSolver::Impl {
  TrainOptions options;
  std::vector<TreeNode> nodes;
  std::vector<InfoSetState> infosets;
  std::unordered_map<std::string, int> infoset_index;
  std::vector<std::pair<int, double>> roots;  // (node, chance weight)
  int iterations = 0;

  explicit Impl(TrainOptions opts) : options(std::move(opts)) { build(); }

  int infoset_for(const GameState& s) {
    const auto obs = game::observe(s, s.to_act);
    const auto key = InfoSetKey::from_observation(obs, options.config).to_string();
    auto it = infoset_index.find(key);
    if (it != infoset_index.end()) return it->second;
    InfoSetState I;
    I.key = key;
    I.actions = game::legal_actions(s);
    infosets.push_back(std::move(I));
    infoset_index.emplace(key, static_cast<int>(infosets.size() - 1));
    return static_cast<int>(infosets.size() - 1);
  }

  int expand(const GameState& s) {
    const int id = static_cast<int>(nodes.size());
    nodes.emplace_back();
    if (s.terminal) {
      nodes[id].terminal = true;
      nodes[id].payoff0 = static_cast<double>(game::payoff(s)[0]);
      return id;
    }
    nodes[id].player = s.to_act;
    nodes[id].infoset = infoset_for(s);
    const auto legal = game::legal_actions(s);
    std::vector<std::pair<PlayerAction, int>> children;
    children.reserve(legal.size());
    for (auto a : legal) {
      children.emplace_back(a, expand(game::apply_action(s, a)));
    }
    nodes[id].children = std::move(children);
    return id;
  }

  void build() {
    // Rank-level chance enumeration: hole pair weight = copies drawn without
    // replacement out of 6*5 ordered deals, public weight = remaining copies
    // over the 4 cards left.
    const std::array<Rank, 3> ranks = {Rank::Jack, Rank::Queen, Rank::King};
    for (Rank r0 : ranks) {
      for (Rank r1 : ranks) {
        const int copies0 = game::kCopiesPerRank;
        const int copies1 = game::kCopiesPerRank - (r1 == r0 ? 1 : 0);
        const double w_holes = static_cast<double>(copies0 * copies1) / 30.0;
        if (copies1 == 0) continue;
        std::array<int, 3> remaining = {2, 2, 2};
        remaining[static_cast<size_t>(r0)] -= 1;
        remaining[static_cast<size_t>(r1)] -= 1;
        for (Rank p : ranks) {
          const int left = remaining[static_cast<size_t>(p)];
          if (left == 0) continue;
          const double w = w_holes * static_cast<double>(left) / 4.0;
          const game::Card h0{r0, 0};
          const game::Card h1{r1, static_cast<uint8_t>(r1 == r0 ? 1 : 0)};
          uint8_t pub_copy = 0;
          if (p == r0) ++pub_copy;
          if (p == r1) ++pub_copy;
          const game::Card pub{p, pub_copy};
          const auto root =
              game::new_game_with_deal(h0, h1, pub, options.config);
          roots.emplace_back(expand(root), w);
        }
      }
    }
  }

  // One traversal in seat-0 perspective. updater == -1 updates both players
  // (simultaneous); otherwise only the named player's regrets/averages move.
  double walk(int id, int updater, double r0, double r1, double rc) {
    TreeNode& n = nodes[static_cast<size_t>(id)];
    if (n.terminal) return n.payoff0;
    InfoSetState& I = infosets[static_cast<size_t>(n.infoset)];
    const auto sigma = regret_match(I);

    std::array<double, game::kNumActions> child_value{};
    double value = 0.0;
    const bool updating = updater == -1 || updater == n.player;
    for (auto [action, child] : n.children) {
      const size_t a = static_cast<size_t>(action);
      double cv;
      if (n.player == 0) {
        cv = walk(child, updater, r0 * sigma[a], r1, rc);
      } else {
        cv = walk(child, updater, r0, r1 * sigma[a], rc);
      }
      child_value[a] = cv;
      value += sigma[a] * cv;
    }
    if (updating) {
      const double sign = n.player == 0 ? 1.0 : -1.0;
      const double cf_reach = (n.player == 0 ? r1 : r0) * rc;
      const double own_reach = n.player == 0 ? r0 : r1;
      for (auto [action, child] : n.children) {
        (void)child;
        const size_t a = static_cast<size_t>(action);
        I.regret_sum[a] += sign * cf_reach * (child_value[a] - value);
        I.strategy_sum[a] += own_reach * sigma[a];
      }
    }
    return value;
  }

  void iterate() {
    if (options.simultaneous_updates) {
      for (auto [root, w] : roots) walk(root, -1, 1.0, 1.0, w);
    } else {
      for (int player : {0, 1}) {
        for (auto [root, w] : roots) walk(root, player, 1.0, 1.0, w);
      }
    }
    ++iterations;
  }

  // --- Exact best response ------------------------------------------------

  std::vector<std::array<double, game::kNumActions>> average_policy() const {
    std::vector<std::array<double, game::kNumActions>> avg(infosets.size());
    for (size_t i = 0; i < infosets.size(); ++i) {
      avg[i] = average_from_sums(infosets[i].strategy_sum, infosets[i].actions);
    }
    return avg;
  }

  double profile_value(
      const std::vector<std::array<double, game::kNumActions>>& avg) const {
    double total = 0.0;
    for (auto [root, w] : roots) total += w * value_under(avg, root);
    return total;
  }

  double value_under(
      const std::vector<std::array<double, game::kNumActions>>& avg,
      int id) const {
    const TreeNode& n = nodes[static_cast<size_t>(id)];
    if (n.terminal) return n.payoff0;
    const auto& sigma = avg[static_cast<size_t>(n.infoset)];
    double v = 0.0;
    for (auto [action, child] : n.children) {
      v += sigma[static_cast<size_t>(action)] * value_under(avg, child);
    }
    return v;
  }

  struct BrScratch {
    std::vector<double> reach;          // opponent+chance reach per node
    std::vector<double> value;          // memoized weighted value per node
    std::vector<char> value_known;
    std::vector<int> infoset_action;    // chosen BR action per infoset (-1 unset)
    std::vector<std::vector<int>> infoset_nodes;
  };

  void collect_reach(int id, double w, int responder,
                     const std::vector<std::array<double, game::kNumActions>>& avg,
                     BrScratch& scratch) const {
    const TreeNode& n = nodes[static_cast<size_t>(id)];
    scratch.reach[static_cast<size_t>(id)] += w;
    if (n.terminal) return;
    if (n.player == responder) {
      scratch.infoset_nodes[static_cast<size_t>(n.infoset)].push_back(id);
      for (auto [action, child] : n.children) {
        (void)action;
        collect_reach(child, w, responder, avg, scratch);
      }
    } else {
      const auto& sigma = avg[static_cast<size_t>(n.infoset)];
      for (auto [action, child] : n.children) {
        collect_reach(child, w * sigma[static_cast<size_t>(action)], responder,
                      avg, scratch);
      }
    }
  }

  double br_node_value(int id, int responder,
                       const std::vector<std::array<double, game::kNumActions>>& avg,
                       BrScratch& scratch) const {
    if (scratch.value_known[static_cast<size_t>(id)]) {
      return scratch.value[static_cast<size_t>(id)];
    }
    const TreeNode& n = nodes[static_cast<size_t>(id)];
    double v;
    if (n.terminal) {
      const double payoff_b = responder == 0 ? n.payoff0 : -n.payoff0;
      v = scratch.reach[static_cast<size_t>(id)] * payoff_b;
    } else if (n.player != responder) {
      v = 0.0;
      for (auto [action, child] : n.children) {
        (void)action;
        v += br_node_value(child, responder, avg, scratch);
      }
    } else {
      const int choice = br_infoset_action(n.infoset, responder, avg, scratch);
      v = 0.0;
      for (auto [action, child] : n.children) {
        if (static_cast<int>(action) == choice) {
          v = br_node_value(child, responder, avg, scratch);
          break;
        }
      }
    }
    scratch.value[static_cast<size_t>(id)] = v;
    scratch.value_known[static_cast<size_t>(id)] = 1;
    return v;
  }

  int br_infoset_action(int infoset, int responder,
                        const std::vector<std::array<double, game::kNumActions>>& avg,
                        BrScratch& scratch) const {
    int& memo = scratch.infoset_action[static_cast<size_t>(infoset)];
    if (memo >= 0) return memo;
    const auto& I = infosets[static_cast<size_t>(infoset)];
    double best = -1e300;
    int best_action = static_cast<int>(I.actions.front());
    for (auto action : I.actions) {
      double q = 0.0;
      for (int node_id : scratch.infoset_nodes[static_cast<size_t>(infoset)]) {
        const TreeNode& n = nodes[static_cast<size_t>(node_id)];
        for (auto [child_action, child] : n.children) {
          if (child_action == action) {
            q += br_node_value(child, responder, avg, scratch);
            break;
          }
        }
      }
      if (q > best) {
        best = q;
        best_action = static_cast<int>(action);
      }
    }
    memo = best_action;
    return memo;
  }

  double best_response_value(
      int responder,
      const std::vector<std::array<double, game::kNumActions>>& avg) const {
    BrScratch scratch;
    scratch.reach.assign(nodes.size(), 0.0);
    scratch.value.assign(nodes.size(), 0.0);
    scratch.value_known.assign(nodes.size(), 0);
    scratch.infoset_action.assign(infosets.size(), -1);
    scratch.infoset_nodes.resize(infosets.size());
    for (auto [root, w] : roots) {
      collect_reach(root, w, responder, avg, scratch);
    }
    double total = 0.0;
    for (auto [root, w] : roots) {
      (void)w;
      total += br_node_value(root, responder, avg, scratch);
    }
    return total;
  }

  double nash_conv() const {
    const auto avg = average_policy();
    const double u0 = profile_value(avg);
    const double u1 = -u0;
    const double br0 = best_response_value(0, avg);
    const double br1 = best_response_value(1, avg);
    return (br0 - u0) + (br1 - u1);
  }

  StrategyProfile snapshot() const {
    StrategyProfile profile;
    profile.config = options.config;
    for (const auto& I : infosets) {
      InfoSetEntry entry;
      entry.regret_sum = I.regret_sum;
      entry.strategy_sum = I.strategy_sum;
      profile.entries.emplace(I.key, entry);
    }
    return profile;
  }

  void load(const StrategyProfile& profile) {
    for (auto& I : infosets) {
      auto it = profile.entries.find(I.key);
      if (it == profile.entries.end()) continue;
      I.regret_sum = it->second.regret_sum;
      I.strategy_sum = it->second.strategy_sum;
    }
  }
};

CfrSolver::CfrSolver(TrainOptions options)
    : impl_(std::make_unique<Impl>(std::move(options))) {}
CfrSolver::~CfrSolver() = default;
CfrSolver::CfrSolver(CfrSolver&&) noexcept = default;
CfrSolver& CfrSolver::operator=(CfrSolver&&) noexcept = default;

void CfrSolver::run(int iterations) {
  if (iterations < 1) throw std::invalid_argument("iterations must be >= 1");
  for (int i = 0; i < iterations; ++i) impl_->iterate();
}

int CfrSolver::iterations_done() const { return impl_->iterations; }

StrategyProfile CfrSolver::snapshot() const { return impl_->snapshot(); }

void CfrSolver::load(const StrategyProfile& profile) { impl_->load(profile); }

double CfrSolver::nash_conv() const { return impl_->nash_conv(); }

StrategyProfile train(int iterations, uint64_t seed, const TrainOptions& options) {
  (void)seed;  // exact chance enumeration: nothing left to randomize
  CfrSolver solver(options);
  solver.run(iterations);
  return solver.snapshot();
}

opp::ActionDist average_strategy(const StrategyProfile& profile,
                                 const InfoSetKey& key) {
  const auto legal = legal_actions_for_key(key, profile.config);
  opp::ActionDist dist;
  const auto it = profile.entries.find(key.to_string());
  if (it == profile.entries.end()) {
    profile.unknown_key_lookups.fetch_add(1, std::memory_order_relaxed);
    return opp::uniform_over(legal);
  }
  const auto avg = average_from_sums(it->second.strategy_sum, legal);
  for (auto a : game::all_actions()) dist[a] = avg[static_cast<size_t>(a)];
  return dist;
}

double nash_conv(const StrategyProfile& profile) {
  TrainOptions options;
  options.config = profile.config;
  CfrSolver solver(options);
  solver.load(profile);
  return solver.nash_conv();
}

opp::Policy make_cfr_policy(std::shared_ptr<const StrategyProfile> profile,
                            std::string name) {
  opp::Policy policy;
  policy.name = std::move(name);
  policy.distribution = [profile](const game::Observation& obs) {
    const auto key = InfoSetKey::from_observation(obs, profile->config);
    auto dist = average_strategy(*profile, key);
    return opp::legalize(dist, obs.legal);
  };
  return policy;
}

}  // namespace leducmind::cfr
