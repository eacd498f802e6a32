#pragma once
#include <cstdint>
#include <span>
#include <vector>

// Sequences of pairwise distinct naturals, their prefixes A_{i,m}, exact
// overlap counts, and the limiting overlap profile alpha of a good family.

namespace subwigner {

enum class SeqKind {
  Identity,    // a_n = n
  Arithmetic,  // a_n = offset + stride * n
  BlockSwap,   // a_n = n+L (n<=L), n-L (L<n<=2L), n (n>2L); tied to the ambient L
  Explicit,    // finite list, extended by the smallest unused naturals
};

struct IndexSequence {
  SeqKind kind = SeqKind::Identity;
  std::uint64_t stride = 1;
  std::uint64_t offset = 0;
  std::vector<std::uint64_t> values;  // Explicit head

  static IndexSequence identity() { return {}; }
  static IndexSequence arithmetic(std::uint64_t stride, std::uint64_t offset);
  static IndexSequence block_swap() { return {SeqKind::BlockSwap, 1, 0, {}}; }
  // Validates injectivity and positivity of the head.
  static IndexSequence explicit_list(std::vector<std::uint64_t> head);

  // a_n for n >= 1.  L is the ambient large parameter (used by BlockSwap only).
  std::uint64_t value(std::uint64_t n, std::uint64_t L) const;
};

// {a_1, ..., a_m} in sequence order; pairwise distinct.
std::vector<std::uint64_t> prefix(const IndexSequence& seq, std::uint64_t m, std::uint64_t L);

// |prefix(seqA, mA) ∩ prefix(seqB, mB)|, exact.
std::uint64_t overlap_count(const IndexSequence& seqA, std::uint64_t mA,
                            const IndexSequence& seqB, std::uint64_t mB, std::uint64_t L);

// Closed-form limit of |A_{[xL]} ∩ B_{[yL]}| / L for two *distinct* sequences
// of built-in kinds.  Throws NoClosedFormError for unregistered kind pairs
// (anything involving Explicit); callers fall back to alpha_estimate.
double alpha_limit(const IndexSequence& seqA, double x, const IndexSequence& seqB, double y);

// True iff a closed form is registered for the ordered kind pair.
bool alpha_registered(SeqKind a, SeqKind b);

struct AlphaEstimate {
  std::uint64_t count;  // overlap of the [xL], [yL] prefixes
  std::uint64_t L;
  double value;  // count / L
};

// Finite-L overlap ratios along a grid of L values; converges to alpha_limit
// for the built-in kinds.
std::vector<AlphaEstimate> alpha_estimate(const IndexSequence& seqA, const IndexSequence& seqB,
                                          double x, double y,
                                          std::span<const std::uint64_t> L_grid);

// A finite family of sequences with the limiting overlap profile attached.
struct GoodFamily {
  std::vector<IndexSequence> sequences;

  // alpha(i, x; j, y).  The diagonal i == j is min(x, y) for every kind;
  // off-diagonal pairs use the registered closed forms.
  double alpha(std::size_t i, double x, std::size_t j, double y) const;

  std::size_t size() const { return sequences.size(); }
};

// The four-sequence example family:
//   a_{1,n} = n, a_{2,n} = 2n, a_{3,n} = 2n+1, a_{4,n} = block swap.
GoodFamily example_family();

// floor(x * L) with a guard against representation noise in x.
std::uint64_t scaled_floor(double x, std::uint64_t L);

}  // namespace subwigner
