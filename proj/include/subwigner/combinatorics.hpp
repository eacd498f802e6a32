#pragma once
#include <boost/multiprecision/cpp_int.hpp>

// Exact integer combinatorics backing the limiting-covariance evaluators.
// Everything here is arbitrary precision; callers convert to double only
// after the integer coefficient is fully assembled.

namespace subwigner {

using BigInt = boost::multiprecision::cpp_int;

// binom(n, k); 0 when k < 0 or k > n.
BigInt binomial(long n, long k);

// Catalan number C_n; 0 for n < 0.
BigInt catalan(long n);

// Sum over compositions (s_1,...,s_r) of S with s_i >= 0 of prod C_{s_i},
// evaluated through the closed form binom(2S+r, S) * r / (2S+r).
BigInt catalan_composition_sum(long S, long r);

}  // namespace subwigner
