#include "desing/invariant.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace desing;

namespace {
InvValue chain(std::vector<Head> hs) { return InvValue::chain(std::move(hs), false); }
InvValue chain_inf(std::vector<Head> hs) { return InvValue::chain(std::move(hs), true); }
}  // namespace

TEST_CASE("head order: t lexicographic, gamma below t") {
  CHECK(compare(Head::t(rat(2), 0), Head::t(rat(1), 5)) > 0);
  CHECK(compare(Head::t(rat(1), 1), Head::t(rat(1), 0)) > 0);
  CHECK(compare(Head::t(rat(3, 2), 0), Head::t(rat(3, 2), 0)) == 0);
  CHECK(compare(Head::t(rat(0), 0), Head::gamma(1, rat(100), {9})) > 0);
  // gamma: smaller p wins (compare -p), then larger w, then lex-larger idx
  CHECK(compare(Head::gamma(1, rat(1), {1}), Head::gamma(2, rat(5), {3, 2})) > 0);
  CHECK(compare(Head::gamma(1, rat(2), {1}), Head::gamma(1, rat(1), {2})) > 0);
  CHECK(compare(Head::gamma(1, rat(1), {2}), Head::gamma(1, rat(1), {1})) > 0);
  CHECK(compare(Head::gamma(2, rat(1), {3, 1}), Head::gamma(2, rat(1), {2, 1})) > 0);
}

TEST_CASE("chain order: slotwise with infinity tail dominating") {
  InvValue cusp = chain_inf({Head::t(rat(1), 0), Head::t(rat(3, 2), 0)});
  InvValue resolved_earlier = chain_inf({Head::t(rat(1), 0)});
  // slot 2: oo vs (3/2, 0)
  CHECK(resolved_earlier > cusp);
  CHECK(cusp < resolved_earlier);
  CHECK(cusp == cusp);

  InvValue smaller_first = chain_inf({Head::t(rat(1, 2), 7)});
  CHECK(smaller_first < cusp);

  // gamma-terminated chains sit below the same prefix with inf tail
  InvValue with_gamma = chain({Head::t(rat(1), 0), Head::gamma(1, rat(1), {2})});
  CHECK(with_gamma < resolved_earlier);
  CHECK(with_gamma < cusp);  // gamma loses to the t-head (3/2, 0)

  InvValue bottom = InvValue::make_bottom();
  CHECK(bottom < with_gamma);
  CHECK(bottom < cusp);
  CHECK(bottom == InvValue::make_bottom());

  // strict decrease chains for the monotonicity suite compare transitively
  CHECK(resolved_earlier > cusp);
  CHECK(cusp > with_gamma);
  CHECK(resolved_earlier > with_gamma);
}

TEST_CASE("lambda embed preserves head data") {
  InvValue v = chain_inf({Head::t(rat(1), 0), Head::t(rat(3, 2), 0)});
  CHECK(lambda_embed(v, 3) == v);
  CHECK(lambda_embed(v, 7) == v);
}

TEST_CASE("rendering is stable") {
  CHECK(to_string(Head::t(rat(3, 2), 1)) == "(3/2, 1)");
  CHECK(to_string(Head::gamma(2, rat(3), {4, 1})) == "gamma(-2, 3; 4,1)");
  CHECK(to_string(chain_inf({Head::t(rat(1), 0)})) == "[(1, 0), oo]");
  CHECK(to_string(InvValue::make_bottom()) == "bottom");
  CHECK(to_string(chain({Head::gamma(1, rat(1), {2})})) == "[gamma(-1, 1; 2)]");
}
