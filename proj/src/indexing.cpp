#include "subwigner/indexing.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

#include "subwigner/errors.hpp"

namespace subwigner {

IndexSequence IndexSequence::arithmetic(std::uint64_t stride, std::uint64_t offset) {
  if (stride < 1) throw ValidationError("Arithmetic: stride must be >= 1");
  return {SeqKind::Arithmetic, stride, offset, {}};
}

IndexSequence IndexSequence::explicit_list(std::vector<std::uint64_t> head) {
  std::vector<std::uint64_t> sorted = head;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw ValidationError("Explicit: injectivity violated (duplicate values)");
  if (!sorted.empty() && sorted.front() < 1)
    throw ValidationError("Explicit: values must be naturals >= 1");
  return {SeqKind::Explicit, 1, 0, std::move(head)};
}

std::uint64_t IndexSequence::value(std::uint64_t n, std::uint64_t L) const {
  if (n < 1) throw ValidationError("sequence index n must be >= 1");
  switch (kind) {
    case SeqKind::Identity:
      return n;
    case SeqKind::Arithmetic:
      return offset + stride * n;
    case SeqKind::BlockSwap:
      if (L < 1) throw ValidationError("BlockSwap requires ambient L >= 1");
      if (n <= L) return n + L;
      if (n <= 2 * L) return n - L;
      return n;
    case SeqKind::Explicit: {
      if (n <= values.size()) return values[n - 1];
      // Continue with the smallest unused naturals in increasing order.
      std::unordered_set<std::uint64_t> used(values.begin(), values.end());
      std::uint64_t need = n - values.size();
      std::uint64_t v = 0;
      while (need > 0) {
        ++v;
        if (!used.count(v)) --need;
      }
      return v;
    }
  }
  throw ValidationError("unknown sequence kind");
}

std::vector<std::uint64_t> prefix(const IndexSequence& seq, std::uint64_t m, std::uint64_t L) {
  std::vector<std::uint64_t> out;
  out.reserve(m);
  if (seq.kind == SeqKind::Explicit) {
    // Sequential generation avoids the quadratic cost of value-by-value calls.
    std::unordered_set<std::uint64_t> used(seq.values.begin(), seq.values.end());
    std::uint64_t v = 0;
    for (std::uint64_t n = 1; n <= m; ++n) {
      if (n <= seq.values.size()) {
        out.push_back(seq.values[n - 1]);
      } else {
        do {
          ++v;
        } while (used.count(v));
        out.push_back(v);
      }
    }
    return out;
  }
  for (std::uint64_t n = 1; n <= m; ++n) out.push_back(seq.value(n, L));
  return out;
}

std::uint64_t overlap_count(const IndexSequence& seqA, std::uint64_t mA,
                            const IndexSequence& seqB, std::uint64_t mB, std::uint64_t L) {
  const std::vector<std::uint64_t> a = prefix(seqA, mA, L);
  const std::vector<std::uint64_t> b = prefix(seqB, mB, L);
  const auto& small = a.size() <= b.size() ? a : b;
  const auto& large = a.size() <= b.size() ? b : a;
  std::unordered_set<std::uint64_t> set(small.begin(), small.end());
  std::uint64_t count = 0;
  for (std::uint64_t v : large) count += set.count(v);
  return count;
}

namespace {

// Continuum description of a prefix at scale L: for block-structured kinds a
// union of intervals carrying density 1, for progressions the interval
// (0, stride*x] carrying density 1/stride on the residue class offset mod
// stride.
using Intervals = std::vector<std::pair<double, double>>;

Intervals block_swap_profile(double y) {
  if (y <= 0) return {};
  if (y <= 1) return {{1.0, 1.0 + y}};
  if (y <= 2) return {{0.0, y - 1.0}, {1.0, 2.0}};
  return {{0.0, y}};
}

double measure_clipped(const Intervals& iv, double hi) {
  double m = 0;
  for (auto [a, b] : iv) m += std::max(0.0, std::min(b, hi) - a);
  return m;
}

double measure_intersection(const Intervals& u, const Intervals& v) {
  double m = 0;
  for (auto [a, b] : u)
    for (auto [c, d] : v) m += std::max(0.0, std::min(b, d) - std::max(a, c));
  return m;
}

bool is_progression(SeqKind k) { return k == SeqKind::Identity || k == SeqKind::Arithmetic; }

double alpha_prog_prog(const IndexSequence& A, double x, const IndexSequence& B, double y) {
  const std::uint64_t sa = A.kind == SeqKind::Identity ? 1 : A.stride;
  const std::uint64_t oa = A.kind == SeqKind::Identity ? 0 : A.offset;
  const std::uint64_t sb = B.kind == SeqKind::Identity ? 1 : B.stride;
  const std::uint64_t ob = B.kind == SeqKind::Identity ? 0 : B.offset;
  const std::uint64_t g = std::gcd(sa, sb);
  const std::uint64_t diff = oa > ob ? oa - ob : ob - oa;
  if (diff % g != 0) return 0.0;  // residue classes never meet
  const double l = static_cast<double>(std::lcm(sa, sb));
  return std::min(static_cast<double>(sa) * x, static_cast<double>(sb) * y) / l;
}

double alpha_prog_block(const IndexSequence& A, double x, double y) {
  const std::uint64_t s = A.kind == SeqKind::Identity ? 1 : A.stride;
  return measure_clipped(block_swap_profile(y), static_cast<double>(s) * x) /
         static_cast<double>(s);
}

}  // namespace

bool alpha_registered(SeqKind a, SeqKind b) {
  if (a == SeqKind::Explicit || b == SeqKind::Explicit) return false;
  return (is_progression(a) || a == SeqKind::BlockSwap) &&
         (is_progression(b) || b == SeqKind::BlockSwap);
}

double alpha_limit(const IndexSequence& seqA, double x, const IndexSequence& seqB, double y) {
  if (!(x > 0) || !(y > 0)) throw ValidationError("alpha_limit: x, y must be > 0");
  if (!alpha_registered(seqA.kind, seqB.kind))
    throw NoClosedFormError("alpha_limit: no closed form registered for this kind pair");
  if (is_progression(seqA.kind) && is_progression(seqB.kind))
    return alpha_prog_prog(seqA, x, seqB, y);
  if (is_progression(seqA.kind) && seqB.kind == SeqKind::BlockSwap)
    return alpha_prog_block(seqA, x, y);
  if (seqA.kind == SeqKind::BlockSwap && is_progression(seqB.kind))
    return alpha_prog_block(seqB, y, x);
  return measure_intersection(block_swap_profile(x), block_swap_profile(y));
}

std::uint64_t scaled_floor(double x, std::uint64_t L) {
  if (x < 0) throw ValidationError("scaled_floor: x must be >= 0");
  return static_cast<std::uint64_t>(std::floor(x * static_cast<double>(L) + 1e-9));
}

std::vector<AlphaEstimate> alpha_estimate(const IndexSequence& seqA, const IndexSequence& seqB,
                                          double x, double y,
                                          std::span<const std::uint64_t> L_grid) {
  for (std::size_t i = 1; i < L_grid.size(); ++i)
    if (L_grid[i] <= L_grid[i - 1])
      throw ValidationError("alpha_estimate: L grid must be strictly increasing");
  std::vector<AlphaEstimate> out;
  out.reserve(L_grid.size());
  for (std::uint64_t L : L_grid) {
    const std::uint64_t c =
        overlap_count(seqA, scaled_floor(x, L), seqB, scaled_floor(y, L), L);
    out.push_back({c, L, static_cast<double>(c) / static_cast<double>(L)});
  }
  return out;
}

double GoodFamily::alpha(std::size_t i, double x, std::size_t j, double y) const {
  if (i >= sequences.size() || j >= sequences.size())
    throw ValidationError("GoodFamily::alpha: sheet index out of range");
  if (!(x > 0) || !(y > 0)) throw ValidationError("GoodFamily::alpha: x, y must be > 0");
  if (i == j) return std::min(x, y);
  return alpha_limit(sequences[i], x, sequences[j], y);
}

GoodFamily example_family() {
  GoodFamily f;
  f.sequences = {IndexSequence::identity(), IndexSequence::arithmetic(2, 0),
                 IndexSequence::arithmetic(2, 1), IndexSequence::block_swap()};
  return f;
}

}  // namespace subwigner
