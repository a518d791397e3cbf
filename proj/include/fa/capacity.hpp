#pragma once

#include <bit>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "fa/closure.hpp"
#include "fa/enumerate.hpp"
#include "fa/io.hpp"
#include "fa/solvers.hpp"

namespace fa {

using BigInt = boost::multiprecision::cpp_int;

struct CapacityReport {
  BigInt cardinality = 0;
  /// Strict: |dom|, |π_1|, |img_1|, ..., |π_n|, |img_n|. Collapsed: |dom|, |Π|, |img_n|.
  std::vector<std::uint64_t> factor_sizes;
  bool collapsed = false;
  /// Real carriers: sizes are taken over the sample grid.
  bool sampled = false;
};

/// One element of a sequence's capacity: an input with the parameter index
/// and output of every step.
struct TraceTuple {
  Value x;
  std::vector<std::pair<std::size_t, Value>> steps;
  Value output() const { return steps.empty() ? x : steps.back().second; }
};

/// Trace of `seq` at x, or nullopt when some step is undefined.
inline std::optional<TraceTuple> trace(const SearchSpace& space, const BoundSequence& seq, const Value& x) {
  TraceTuple t{x, {}};
  Value cur = x;
  for (const auto& st : seq.steps) {
    cur = detail::eval_unchecked(space.at(st.primitive), st.param, cur);
    if (!cur.defined()) return std::nullopt;
    t.steps.emplace_back(st.param, cur);
  }
  return t;
}

/// Size of the capacity product of a skeleton. Images are the outputs the
/// step actually attains on its incoming domain, restricted values removed.
inline CapacityReport information_capacity(const SearchSpace& space, const SequenceSkeleton& skeleton,
                                           bool collapsed, std::size_t grid_points = 64) {
  validate(space, skeleton);
  CapacityReport report;
  report.collapsed = collapsed;
  report.sampled = !space.carrier().is_finite();

  std::vector<Value> domain = carrier_grid(space.carrier(), grid_points);
  const std::uint64_t dom_size = domain.size();
  std::vector<std::uint64_t> strict{dom_size};
  std::set<ParamTuple> param_union;
  for (std::size_t i = 0; i < skeleton.length(); ++i) {
    const auto& prim = space.at(skeleton.step_ids[i]);
    std::set<Value> image;
    for (const auto& x : domain) {
      for (std::size_t p = 0; p < prim.param_count(); ++p) {
        auto y = detail::eval_unchecked(prim, p, x);
        if (y.defined()) image.insert(y);
      }
    }
    if (image.empty())
      throw EmptyCapacity("step " + std::to_string(i + 1) + " ('" + prim.id + "') has an empty image");
    param_union.insert(prim.params.begin(), prim.params.end());
    strict.push_back(prim.param_count());
    strict.push_back(image.size());
    domain.assign(image.begin(), image.end());
  }
  report.factor_sizes = collapsed ? std::vector<std::uint64_t>{dom_size, param_union.size(), strict.back()} : strict;
  report.cardinality = 1;
  for (auto f : report.factor_sizes) report.cardinality *= f;
  return report;
}

struct PotentialReport {
  std::uint64_t cardinality = 0;
  bool sampled = false;
};

/// Size of the union of the capacities of all sequences of length <= n,
/// counted over realized traces. Traces of different lengths are distinct.
/// Collapsed mode counts (x, Π, final output) triples; Π is the same for
/// every sequence of the space, so that is the set of realized (x, y) pairs.
inline PotentialReport information_potential(const SearchSpace& space, std::size_t n, bool collapsed,
                                             const SearchOptions& opts = {}, std::size_t grid_points = 64) {
  const auto total = count_expanded(space, n).bound_sequences;
  detail::check_budget(total, opts);
  const auto domain = carrier_grid(space.carrier(), grid_points);
  PotentialReport report;
  report.sampled = !space.carrier().is_finite();

  if (collapsed) {
    std::set<std::pair<Value, Value>> pairs;
    for (const auto& level : detail::realized_levels(space, domain, n, std::numeric_limits<std::size_t>::max())) {
      for (const auto& t : level) {
        for (std::size_t i = 0; i < t.size(); ++i) {
          if (t[i].defined()) pairs.emplace(domain[i], t[i]);
        }
      }
    }
    report.cardinality = pairs.size();
    return report;
  }

  // Key layout: length, x, then per step the parameter tuple (arity first)
  // and the output.
  std::set<std::vector<double>> traces;
  std::vector<double> key;
  for_each_bound_sequence(space, n, [&](const BoundSequence& seq) {
    for (const auto& x : domain) {
      auto t = trace(space, seq, x);
      if (!t) continue;
      key.clear();
      key.push_back(static_cast<double>(seq.length()));
      key.push_back(x.number());
      for (std::size_t i = 0; i < seq.length(); ++i) {
        const auto& tuple = space.at(seq.steps[i].primitive).params[t->steps[i].first];
        key.push_back(static_cast<double>(tuple.size()));
        key.insert(key.end(), tuple.begin(), tuple.end());
        key.push_back(t->steps[i].second.number());
      }
      traces.insert(key);
    }
  });
  report.cardinality = traces.size();
  return report;
}

struct GrowthRow {
  std::size_t n = 0;
  /// Distinct capacities (realized graphs) among sequences of length <= n.
  std::size_t capacities = 0;
  /// Collapsed potential: realized (x, Π, y) triples.
  std::size_t collapsed_union = 0;
};

struct GrowthReport {
  std::vector<GrowthRow> rows;
  /// Smallest n after which no sequence realizes a new capacity, if within n_max.
  std::optional<std::size_t> saturation;
  bool sampled = false;
};

/// Potential for n = 1..n_max. Each sequence contributes its graph as one
/// capacity, so the count stops growing exactly when the set of realized
/// functions does.
inline GrowthReport potential_growth(const SearchSpace& space, std::size_t n_max, const SearchOptions& opts = {},
                                     std::size_t grid_points = 64) {
  if (n_max < 1) throw ConfigError("n", "sequence length bound must be >= 1");
  const auto domain = carrier_grid(space.carrier(), grid_points);
  const auto levels = detail::realized_levels(space, domain, n_max + 1, opts.budget_ceiling);
  GrowthReport report;
  report.sampled = !space.carrier().is_finite();
  std::size_t capacities = 0;
  std::set<std::pair<Value, Value>> pairs;
  for (std::size_t n = 1; n <= n_max; ++n) {
    if (n <= levels.size()) {
      capacities += levels[n - 1].size();
      for (const auto& t : levels[n - 1]) {
        for (std::size_t i = 0; i < t.size(); ++i) {
          if (t[i].defined()) pairs.emplace(domain[i], t[i]);
        }
      }
    }
    report.rows.push_back({n, capacities, pairs.size()});
  }
  if (levels.size() <= n_max) report.saturation = std::max<std::size_t>(levels.size(), 1);
  return report;
}

struct VcReport {
  std::size_t dimension = 0;
  /// Shattered points (positions into the supplied domain points).
  std::vector<std::size_t> witness_points;
  /// witness_sequences[b] realizes pattern b on witness_points, where bit j of
  /// b is the output at witness_points[j].
  std::vector<BoundSequence> witness_sequences;
  std::size_t realized_dichotomies = 0;
};

namespace detail {

inline std::optional<bool> as_bit(const Value& v) {
  if (v.is_element() && (v.index() == 0 || v.index() == 1)) return v.index() == 1;
  if (v.is_real()) {
    if (std::fabs(v.number()) <= kRealTolerance) return false;
    if (std::fabs(v.number() - 1.0) <= kRealTolerance) return true;
  }
  return std::nullopt;
}

inline std::uint64_t project(std::uint64_t mask, const std::vector<std::size_t>& subset) {
  std::uint64_t out = 0;
  for (std::size_t j = 0; j < subset.size(); ++j) out |= ((mask >> subset[j]) & 1u) << j;
  return out;
}

// Advances `c` to the next d-combination of [0, m) in lexicographic order.
inline bool next_combination(std::vector<std::size_t>& c, std::size_t m) {
  const std::size_t d = c.size();
  for (std::size_t i = d; i-- > 0;) {
    if (c[i] < m - d + i) {
      ++c[i];
      for (std::size_t j = i + 1; j < d; ++j) c[j] = c[j - 1] + 1;
      return true;
    }
  }
  return false;
}

}  // namespace detail

/// Brute-force VC dimension of the dichotomies realized on `points` by all
/// sequences of length <= n, capped at max_d.
inline VcReport vc_dimension(const SearchSpace& space, std::size_t n, const std::vector<Value>& points,
                             std::size_t max_d, const SearchOptions& opts = {}) {
  if (points.size() > 64) throw ConfigError("points", "at most 64 domain points are supported");
  if (points.size() < max_d) throw ConfigError("max_d", "max_d exceeds the number of domain points");
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!contains(space.carrier(), points[i]))
      throw ConfigError("points[" + std::to_string(i) + "]", "point is not a carrier value");
  }
  detail::check_budget(count_expanded(space, n).bound_sequences, opts);

  std::map<std::uint64_t, BoundSequence> dichotomies;
  for_each_bound_sequence(space, n, [&](const BoundSequence& seq) {
    std::uint64_t mask = 0;
    for (std::size_t i = 0; i < points.size(); ++i) {
      auto bit = detail::as_bit(detail::eval_sequence_unchecked(space, seq, points[i]));
      if (!bit)
        throw ContractViolation("sequence " + render(space, seq) + " is not binary-valued on the domain points");
      if (*bit) mask |= std::uint64_t{1} << i;
    }
    dichotomies.try_emplace(mask, seq);
  });

  VcReport report;
  report.realized_dichotomies = dichotomies.size();
  for (std::size_t d = 1; d <= max_d; ++d) {
    std::vector<std::size_t> subset(d);
    for (std::size_t j = 0; j < d; ++j) subset[j] = j;
    bool shattered = false;
    do {
      std::vector<std::optional<BoundSequence>> seen(std::size_t{1} << d);
      std::size_t hits = 0;
      for (const auto& [mask, seq] : dichotomies) {
        auto& slot = seen[detail::project(mask, subset)];
        if (!slot) {
          slot = seq;
          ++hits;
        }
      }
      if (hits == seen.size()) {
        report.dimension = d;
        report.witness_points = subset;
        report.witness_sequences.clear();
        for (auto& s : seen) report.witness_sequences.push_back(*s);
        shattered = true;
      }
    } while (!shattered && detail::next_combination(subset, points.size()));
    if (!shattered) break;
  }
  return report;
}

}  // namespace fa
