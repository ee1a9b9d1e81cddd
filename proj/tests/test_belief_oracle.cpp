#include <cmath>

#include "doctest.h"
#include "naive_rates.hpp"

using namespace leducmind;
using namespace leducmind_test;

TEST_CASE("outcome_rates agrees with the naive engine-driven enumerator") {
  RandomSource rng(0xbe11ef);
  int cases = 0;
  double worst = 0.0;
  while (cases < 2000) {
    const auto test_case = random_case(rng);
    const auto obs = game::observe(test_case.state, test_case.state.to_act);
    const auto view = belief::view_from_observation(obs, test_case.state.config);
    for (auto action : obs.legal) {
      const auto fast =
          belief::outcome_rates(view, test_case.belief, test_case.model, action);
      const auto naive = naive_outcome_rates(test_case, action);
      worst = std::max({worst, std::abs(fast.win - naive.win),
                        std::abs(fast.lose - naive.lose),
                        std::abs(fast.draw - naive.draw)});
      REQUIRE(std::abs(fast.win - naive.win) < 1e-12);
      REQUIRE(std::abs(fast.lose - naive.lose) < 1e-12);
      REQUIRE(std::abs(fast.draw - naive.draw) < 1e-12);
      REQUIRE(fast.win + fast.lose + fast.draw == doctest::Approx(1.0).epsilon(1e-9));
      ++cases;
    }
  }
  CHECK(worst < 1e-12);
}
