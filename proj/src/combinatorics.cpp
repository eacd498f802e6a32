#include "subwigner/combinatorics.hpp"

#include "subwigner/errors.hpp"

namespace subwigner {

BigInt binomial(long n, long k) {
  if (k < 0 || k > n || n < 0) return 0;
  if (k > n - k) k = n - k;
  BigInt result = 1;
  for (long i = 1; i <= k; ++i) {
    result *= (n - k + i);
    result /= i;  // exact at every step: result is binom(n-k+i, i)
  }
  return result;
}

BigInt catalan(long n) {
  if (n < 0) return 0;
  BigInt c = binomial(2 * n, n);
  c /= (n + 1);
  return c;
}

BigInt catalan_composition_sum(long S, long r) {
  if (S < 0) throw ValidationError("catalan_composition_sum: S must be >= 0");
  if (r < 1) throw ValidationError("catalan_composition_sum: r must be >= 1");
  BigInt num = binomial(2 * S + r, S) * r;
  const long den = 2 * S + r;
  if (num % den != 0) throw NumericalContractError("catalan_composition_sum: inexact division");
  return num / den;
}

}  // namespace subwigner
