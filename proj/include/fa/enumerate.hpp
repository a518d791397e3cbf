#pragma once

#include <cstdint>
#include <limits>
#include <ranges>
#include <string>

#include "fa/types.hpp"

namespace fa {

namespace detail {

inline std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r = 0;
  if (__builtin_mul_overflow(a, b, &r)) throw CountOverflow("count exceeds 64 bits");
  return r;
}

inline std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r = 0;
  if (__builtin_add_overflow(a, b, &r)) throw CountOverflow("count exceeds 64 bits");
  return r;
}

inline std::uint64_t checked_pow(std::uint64_t base, std::size_t exp) {
  std::uint64_t r = 1;
  for (std::size_t i = 0; i < exp; ++i) r = checked_mul(r, base);
  return r;
}

// Σ_{k=1..n} base^k with overflow checks.
inline std::uint64_t geometric_sum(std::uint64_t base, std::size_t n) {
  std::uint64_t total = 0;
  std::uint64_t term = 1;
  for (std::size_t k = 1; k <= n; ++k) {
    term = checked_mul(term, base);
    total = checked_add(total, term);
  }
  return total;
}

}  // namespace detail

struct ExpandedCount {
  std::uint64_t structures = 0;
  std::uint64_t bound_sequences = 0;
  friend bool operator==(const ExpandedCount&, const ExpandedCount&) = default;
};

/// Size of S^{*,n} as skeletons and as bound sequences, in closed form.
/// Throws CountOverflow when either count does not fit in 64 bits.
inline ExpandedCount count_expanded(const SearchSpace& space, std::size_t n) {
  if (n < 1) throw ConfigError("n", "sequence length bound must be >= 1");
  // Skeletons starting with primitive j carry |π_j| * P^{k-1} assignments,
  // so the bound sequences of length k number P^k with P = Σ|π_j|.
  return {detail::geometric_sum(space.size(), n), detail::geometric_sum(space.step_count(), n)};
}

/// Skeleton at position `ordinal` of the canonical order (ascending length,
/// then lexicographic by primitive index).
inline SequenceSkeleton structure_at(const SearchSpace& space, std::size_t n, std::uint64_t ordinal) {
  const std::uint64_t m = space.size();
  std::uint64_t block = 1;
  for (std::size_t k = 1; k <= n; ++k) {
    block = detail::checked_mul(block, m);
    if (ordinal < block) {
      SequenceSkeleton s;
      s.step_ids.assign(k, 0);
      for (std::size_t i = k; i-- > 0;) {
        s.step_ids[i] = static_cast<std::size_t>(ordinal % m);
        ordinal /= m;
      }
      return s;
    }
    ordinal -= block;
  }
  throw std::out_of_range("structure ordinal past the end of the expanded space");
}

/// Every skeleton of length 1..n, each once, in canonical order. The view is
/// random access, so disjoint index ranges can be consumed independently.
inline auto enumerate_structures(const SearchSpace& space, std::size_t n) {
  const auto total = count_expanded(space, n).structures;
  return std::views::iota(std::uint64_t{0}, total) |
         std::views::transform([&space, n](std::uint64_t i) { return structure_at(space, n, i); });
}

inline std::uint64_t assignment_count(const SearchSpace& space, const SequenceSkeleton& skel) {
  std::uint64_t total = 1;
  for (auto id : skel.step_ids) total = detail::checked_mul(total, space.at(id).param_count());
  return total;
}

/// Parameter assignment number `ordinal` of a skeleton in odometer order
/// (last step varies fastest).
inline BoundSequence assignment_at(const SearchSpace& space, const SequenceSkeleton& skel,
                                   std::uint64_t ordinal) {
  BoundSequence seq;
  seq.steps.resize(skel.length());
  for (std::size_t i = skel.length(); i-- > 0;) {
    const auto radix = space.at(skel.step_ids[i]).param_count();
    seq.steps[i] = {skel.step_ids[i], static_cast<std::size_t>(ordinal % radix)};
    ordinal /= radix;
  }
  return seq;
}

inline auto enumerate_assignments(const SearchSpace& space, SequenceSkeleton skeleton) {
  validate(space, skeleton);
  const auto total = assignment_count(space, skeleton);
  return std::views::iota(std::uint64_t{0}, total) |
         std::views::transform([&space, skel = std::move(skeleton)](std::uint64_t i) {
           return assignment_at(space, skel, i);
         });
}

/// First bound sequence of the canonical order.
inline BoundSequence first_sequence() { return BoundSequence{{Step{0, 0}}}; }

/// Moves `seq` to its successor in the canonical order of S^{*,n}.
/// Returns false when `seq` was the last element.
inline bool advance(const SearchSpace& space, std::size_t n, BoundSequence& seq) {
  auto& steps = seq.steps;
  for (std::size_t i = steps.size(); i-- > 0;) {
    if (steps[i].param + 1 < space.at(steps[i].primitive).param_count()) {
      ++steps[i].param;
      for (std::size_t j = i + 1; j < steps.size(); ++j) steps[j].param = 0;
      return true;
    }
  }
  for (std::size_t i = steps.size(); i-- > 0;) {
    if (steps[i].primitive + 1 < space.size()) {
      ++steps[i].primitive;
      for (std::size_t j = i + 1; j < steps.size(); ++j) steps[j].primitive = 0;
      for (auto& st : steps) st.param = 0;
      return true;
    }
  }
  if (steps.size() >= n) return false;
  steps.assign(steps.size() + 1, Step{0, 0});
  return true;
}

/// Position of `seq` in the canonical order of the expanded space.
inline std::uint64_t canonical_rank(const SearchSpace& space, const BoundSequence& seq) {
  validate(space, seq);
  const std::uint64_t P = space.step_count();
  const std::size_t k = seq.length();
  std::uint64_t rank = detail::geometric_sum(P, k - 1);
  // Skeleton blocks: choosing primitive j at position i (after prefix weight W)
  // skips W * |π_j'| * P^{k-i-1} sequences for every j' < j.
  std::uint64_t weight = 1;
  for (std::size_t i = 0; i < k; ++i) {
    const auto tail = detail::checked_pow(P, k - i - 1);
    for (std::size_t j = 0; j < seq.steps[i].primitive; ++j) {
      rank += weight * space.at(j).param_count() * tail;
    }
    weight *= space.at(seq.steps[i].primitive).param_count();
  }
  std::uint64_t odometer = 0;
  for (const auto& st : seq.steps) odometer = odometer * space.at(st.primitive).param_count() + st.param;
  return rank + odometer;
}

/// Inverse of canonical_rank over S^{*,n}.
inline BoundSequence canonical_unrank(const SearchSpace& space, std::size_t n, std::uint64_t index) {
  const std::uint64_t P = space.step_count();
  std::uint64_t level = 1;
  for (std::size_t k = 1; k <= n; ++k) {
    level = detail::checked_mul(level, P);
    if (index >= level) {
      index -= level;
      continue;
    }
    SequenceSkeleton skel;
    std::uint64_t weight = 1;
    for (std::size_t i = 0; i < k; ++i) {
      const auto tail = detail::checked_pow(P, k - i - 1);
      for (std::size_t j = 0; j < space.size(); ++j) {
        const auto block = weight * space.at(j).param_count() * tail;
        if (index < block) {
          skel.step_ids.push_back(j);
          weight *= space.at(j).param_count();
          break;
        }
        index -= block;
      }
    }
    return assignment_at(space, skel, index);
  }
  throw std::out_of_range("canonical index past the end of the expanded space");
}

/// Calls `fn(seq)` for every bound sequence of S^{*,n} in canonical order.
template <typename Fn>
void for_each_bound_sequence(const SearchSpace& space, std::size_t n, Fn&& fn) {
  if (n < 1) return;
  BoundSequence seq = first_sequence();
  do {
    fn(static_cast<const BoundSequence&>(seq));
  } while (advance(space, n, seq));
}

}  // namespace fa
