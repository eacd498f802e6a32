#include <doctest.h>

#include <cstdint>
#include <vector>

#include "subwigner/combinatorics.hpp"
#include "subwigner/errors.hpp"

using namespace subwigner;

namespace {

// Independent oracle: count Dyck paths of length 2n by explicit recursive
// enumeration (never the closed form).
std::uint64_t dyck_paths(int up_left, int down_left, int height) {
  if (up_left == 0 && down_left == 0) return 1;
  std::uint64_t total = 0;
  if (up_left > 0) total += dyck_paths(up_left - 1, down_left, height + 1);
  if (down_left > 0 && height > 0) total += dyck_paths(up_left, down_left - 1, height - 1);
  return total;
}

std::uint64_t catalan_oracle(int n) { return dyck_paths(n, n, 0); }

// Independent oracle: enumerate all r-part compositions of S and accumulate
// the product of Catalan numbers (oracle Catalans, not the library's).
std::uint64_t composition_sum_oracle(int S, int r, const std::vector<std::uint64_t>& cat) {
  if (r == 1) return cat[S];
  std::uint64_t total = 0;
  for (int first = 0; first <= S; ++first)
    total += cat[first] * composition_sum_oracle(S - first, r - 1, cat);
  return total;
}

}  // namespace

TEST_CASE("catalan matches Dyck-path enumeration") {
  for (int n = 0; n <= 10; ++n) CHECK(catalan(n) == BigInt(catalan_oracle(n)));
  CHECK(catalan(0) == 1);
  CHECK(catalan(3) == 5);
  CHECK(catalan(5) == 42);
  CHECK(catalan(-1) == 0);
  CHECK(catalan(-7) == 0);
}

TEST_CASE("binomial basics") {
  CHECK(binomial(0, 0) == 1);
  CHECK(binomial(6, 2) == 15);
  CHECK(binomial(6, -1) == 0);
  CHECK(binomial(6, 7) == 0);
  CHECK(binomial(64, 32) == BigInt("1832624140942590534"));
}

TEST_CASE("catalan_composition_sum equals brute-force enumeration") {
  std::vector<std::uint64_t> cat;
  for (int n = 0; n <= 12; ++n) cat.push_back(catalan_oracle(n));
  for (int S = 0; S <= 12; ++S)
    for (int r = 1; r <= 12; ++r)
      CHECK(catalan_composition_sum(S, r) == BigInt(composition_sum_oracle(S, r, cat)));
}

TEST_CASE("catalan_composition_sum spec values") {
  CHECK(catalan_composition_sum(0, 1) == 1);
  CHECK(catalan_composition_sum(0, 5) == 1);   // all parts zero
  CHECK(catalan_composition_sum(1, 2) == 2);   // (1,0), (0,1)
  CHECK(catalan_composition_sum(2, 3) == 9);   // 3 C_2 + 3 C_1 C_1
  CHECK_THROWS_AS(catalan_composition_sum(-1, 2), ValidationError);
  CHECK_THROWS_AS(catalan_composition_sum(2, 0), ValidationError);
}
