#pragma once

#include <cstdint>
#include <limits>
#include <set>
#include <vector>

#include "fa/eval.hpp"

namespace fa {

/// Outputs of a sequence at each point of a fixed domain; for finite
/// carriers the domain is the whole carrier, so a table is the function.
using FunctionTable = std::vector<Value>;

inline bool is_total(const FunctionTable& t) {
  return std::all_of(t.begin(), t.end(), [](const Value& v) { return v.defined(); });
}

namespace detail {

/// Tables first realized at each length 1, 2, ...: `levels[k-1]` holds the
/// tables realized by some length-k sequence and by none shorter. Stops after
/// `max_depth` levels or at the first empty level.
inline std::vector<std::set<FunctionTable>> realized_levels(const SearchSpace& space,
                                                            const std::vector<Value>& domain,
                                                            std::size_t max_depth,
                                                            std::size_t max_tables) {
  std::vector<std::set<FunctionTable>> levels;
  std::set<FunctionTable> seen;
  auto extend = [&](const FunctionTable& base, const Primitive& prim, std::size_t param) {
    FunctionTable out(base.size());
    for (std::size_t i = 0; i < base.size(); ++i) {
      out[i] = base[i].defined() ? eval_unchecked(prim, param, base[i]) : Value::undefined();
    }
    return out;
  };

  std::set<FunctionTable> frontier{FunctionTable(domain.begin(), domain.end())};
  for (std::size_t depth = 1; depth <= max_depth; ++depth) {
    std::set<FunctionTable> next;
    for (const auto& base : frontier) {
      for (const auto& prim : space.primitives()) {
        for (std::size_t p = 0; p < prim.param_count(); ++p) {
          auto t = extend(base, prim, p);
          if (!seen.contains(t)) next.insert(std::move(t));
        }
      }
    }
    if (next.empty()) break;
    seen.insert(next.begin(), next.end());
    if (seen.size() > max_tables)
      throw BudgetExceeded(seen.size(), max_tables);
    levels.push_back(next);
    frontier = std::move(next);
  }
  return levels;
}

inline void require_finite(const SearchSpace& space, const char* what) {
  if (!space.carrier().is_finite())
    throw Unsupported(std::string(what) + " is defined for finite carriers only");
}

}  // namespace detail

/// Distinct function tables (total or partial) realized by bound sequences of
/// length <= n, built breadth first with deduplication.
inline std::set<FunctionTable> closure(const SearchSpace& space, std::size_t n) {
  detail::require_finite(space, "closure");
  if (n < 1) throw ConfigError("n", "sequence length bound must be >= 1");
  std::set<FunctionTable> out;
  for (auto& level : detail::realized_levels(space, carrier_grid(space.carrier()), n,
                                             std::numeric_limits<std::size_t>::max())) {
    out.merge(level);
  }
  return out;
}

struct ClosureFixpoint {
  /// Smallest n with closure(n) == closure(n + 1).
  std::size_t depth = 0;
  std::set<FunctionTable> tables;
  /// |closure(k)| for k = 1..depth.
  std::vector<std::size_t> sizes;

  std::size_t total_count() const {
    return static_cast<std::size_t>(std::count_if(tables.begin(), tables.end(), is_total));
  }
};

inline ClosureFixpoint closure_fixpoint(const SearchSpace& space) {
  detail::require_finite(space, "closure");
  ClosureFixpoint fp;
  for (auto& level : detail::realized_levels(space, carrier_grid(space.carrier()),
                                             std::numeric_limits<std::size_t>::max(),
                                             std::numeric_limits<std::size_t>::max())) {
    fp.tables.merge(level);
    fp.sizes.push_back(fp.tables.size());
  }
  fp.depth = fp.sizes.size();
  return fp;
}

/// Every total function table on Z_K, in lexicographic order.
inline std::vector<FunctionTable> all_total_tables(std::int64_t k) {
  std::vector<FunctionTable> out;
  FunctionTable t(static_cast<std::size_t>(k), Value::element(0));
  while (true) {
    out.push_back(t);
    std::size_t i = t.size();
    while (i-- > 0) {
      if (t[i].index() + 1 < k) {
        t[i] = Value::element(t[i].index() + 1);
        break;
      }
      t[i] = Value::element(0);
    }
    if (i == static_cast<std::size_t>(-1)) break;
  }
  return out;
}

}  // namespace fa
