#pragma once

// Test-only reference computations. Each one takes a different route from
// the library code it checks: plain recursion instead of canonical ranking,
// full enumeration instead of breadth-first closure, closed forms instead of
// running sums.

#include <cstdint>
#include <functional>
#include <random>
#include <set>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "fa/fa.hpp"

namespace fa::oracle {

using boost::multiprecision::cpp_int;

/// (b^{n+1} - b) / (b - 1), or n when b = 1.
inline cpp_int geometric_closed_form(std::uint64_t b, std::size_t n) {
  if (b == 1) return n;
  cpp_int p = 1;
  for (std::size_t i = 0; i < n + 1; ++i) p *= b;
  return (p - b) / (b - 1);
}

/// All bound sequences of length 1..n, generated by depth-first recursion.
inline std::vector<BoundSequence> all_sequences(const SearchSpace& space, std::size_t n) {
  std::vector<BoundSequence> out;
  std::function<void(BoundSequence&)> rec = [&](BoundSequence& cur) {
    if (!cur.steps.empty()) out.push_back(cur);
    if (cur.steps.size() == n) return;
    for (std::size_t j = 0; j < space.size(); ++j) {
      for (std::size_t p = 0; p < space.at(j).param_count(); ++p) {
        cur.steps.push_back({j, p});
        rec(cur);
        cur.steps.pop_back();
      }
    }
  };
  BoundSequence start;
  rec(start);
  return out;
}

/// Function tables realized by explicit sequences of length <= n.
inline std::set<FunctionTable> tables_by_enumeration(const SearchSpace& space, std::size_t n) {
  std::set<FunctionTable> out;
  const auto domain = carrier_grid(space.carrier());
  for (const auto& seq : all_sequences(space, n)) {
    FunctionTable t;
    for (const auto& x : domain) t.push_back(eval_sequence(space, seq, x));
    out.insert(t);
  }
  return out;
}

/// Smallest approximation error over every sequence of length <= n.
inline double min_error(const SearchSpace& space, std::size_t n, const SampleSet& samples, const Metric& metric) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& seq : all_sequences(space, n)) best = std::min(best, approximation_error(space, seq, samples, metric));
  return best;
}

/// Whether the 0/1 outputs of `hypotheses` (one output vector per
/// hypothesis, over the same points) shatter the points selected by `subset`.
inline bool shatters(const std::vector<std::vector<int>>& hypotheses, const std::vector<std::size_t>& subset) {
  std::set<std::vector<int>> patterns;
  for (const auto& h : hypotheses) {
    std::vector<int> pat;
    for (auto i : subset) pat.push_back(h[i]);
    patterns.insert(pat);
  }
  return patterns.size() == (std::size_t{1} << subset.size());
}

/// Largest shattered subset size, by testing every subset of the points.
inline std::size_t vc_by_subsets(const std::vector<std::vector<int>>& hypotheses, std::size_t points) {
  std::size_t best = 0;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << points); ++mask) {
    std::vector<std::size_t> subset;
    for (std::size_t i = 0; i < points; ++i)
      if ((mask >> i) & 1u) subset.push_back(i);
    if (subset.size() > best && shatters(hypotheses, subset)) best = subset.size();
  }
  return best;
}

struct Fixture {
  SearchSpace space;
  SampleSet samples;
  std::size_t n;
};

/// Random finite space (1..3 primitives over Z_K, K in 2..3, grids of 1..2
/// parameters, occasional restriction sets) with a random target sampled on a
/// random nonempty subset of Z_K, and n in 1..4.
inline Fixture random_fixture(std::mt19937_64& rng) {
  auto pick = [&](std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
  };
  const auto k = pick(2, 3);
  const auto prims = pick(1, 3);
  std::vector<Primitive> ps;
  for (std::int64_t i = 0; i < prims; ++i) {
    Primitive p;
    p.id = "p" + std::to_string(i);
    const auto params = pick(1, 2);
    p.params.clear();
    for (std::int64_t q = 0; q < params; ++q) p.params.push_back({static_cast<double>(q)});
    LookupTable t;
    for (std::int64_t e = 0; e < k * params; ++e) t.outputs.push_back(pick(0, k - 1));
    p.rule = t;
    if (pick(0, 4) == 0) p.excluded = {pick(0, k - 1)};
    ps.push_back(std::move(p));
  }
  SearchSpace space(Carrier::finite(k), std::move(ps));
  std::vector<SampleSet::Point> pts;
  for (std::int64_t x = 0; x < k; ++x) {
    if (x == 0 || pick(0, 3) != 0) pts.push_back({Value::element(x), Value::element(pick(0, k - 1))});
  }
  std::shuffle(pts.begin(), pts.end(), rng);
  return {space, SampleSet(space.carrier(), pts), static_cast<std::size_t>(pick(1, 4))};
}

}  // namespace fa::oracle
