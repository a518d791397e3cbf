#pragma once

#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "fa/catalog.hpp"
#include "fa/closure.hpp"
#include "fa/io.hpp"
#include "fa/solvers.hpp"

namespace fa {

struct AblationRow {
  std::string removed;
  std::size_t nonzero_targets = 0;
};

struct SweepReport {
  std::int64_t k = 0;
  std::size_t n = 0;
  std::size_t targets = 0;
  std::size_t exact_targets = 0;
  std::vector<AblationRow> ablations;

  bool passed() const {
    if (exact_targets != targets) return false;
    return std::all_of(ablations.begin(), ablations.end(), [](const AblationRow& a) { return a.nonzero_targets >= 1; });
  }
};

/// Number of total targets on Z_K that asp_solve cannot match exactly.
inline std::size_t count_nonzero_targets(const SearchSpace& space, std::size_t n, const SearchOptions& opts = {}) {
  std::size_t nonzero = 0;
  for (const auto& table : all_total_tables(space.carrier().size())) {
    if (asp_solve(space, n, table_samples(space.carrier(), table), Metric::zero_one(), opts).error > 0.0) ++nonzero;
  }
  return nonzero;
}

/// Sweeps every total target on Z_K with the full generator catalog and with
/// each single generator removed, all at the same length bound n.
inline SweepReport generator_sweep(const SearchSpace& generators, std::size_t n, const SearchOptions& opts = {}) {
  if (!generators.carrier().is_finite()) throw Unsupported("generator sweeps need a finite carrier");
  SweepReport report;
  report.k = generators.carrier().size();
  report.n = n;
  const auto targets = all_total_tables(report.k);
  report.targets = targets.size();
  report.exact_targets = targets.size() - count_nonzero_targets(generators, n, opts);
  for (std::size_t i = 0; i < generators.size(); ++i) {
    report.ablations.push_back({generators.at(i).id, count_nonzero_targets(generators.without(i), n, opts)});
  }
  return report;
}

/// First total table on Z_K (lexicographic) that no sequence of length <= n
/// realizes; nullopt when the closure already holds every table.
inline std::optional<FunctionTable> find_unreachable_target(const SearchSpace& space, std::size_t n) {
  const auto reached = closure(space, n);
  for (auto& table : all_total_tables(space.carrier().size())) {
    if (!reached.contains(table)) return table;
  }
  return std::nullopt;
}

struct Fraction {
  std::uint64_t num = 0;
  std::uint64_t den = 1;
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  friend bool operator==(const Fraction&, const Fraction&) = default;
};

inline Fraction reduced(std::uint64_t num, std::uint64_t den) {
  const auto g = std::gcd(num, den);
  return g == 0 ? Fraction{0, 1} : Fraction{num / g, den / g};
}

/// Mean zero-one error of a fixed sequence over every total target on Z_K
/// with σ = Z_K, as an exact fraction. The sequence must be total.
inline Fraction nfl_mean_error(const SearchSpace& space, const BoundSequence& seq) {
  if (!space.carrier().is_finite()) throw Unsupported("nfl averaging needs a finite carrier");
  validate(space, seq);
  const auto k = space.carrier().size();
  for (const auto& x : carrier_grid(space.carrier())) {
    if (!detail::eval_sequence_unchecked(space, seq, x).defined())
      throw ContractViolation("sequence " + render(space, seq) + " is undefined at " + std::to_string(x.index()));
  }
  std::uint64_t mismatches = 0;
  std::uint64_t terms = 0;
  for (const auto& table : all_total_tables(k)) {
    const auto samples = table_samples(space.carrier(), table);
    // ε·|σ| is an integer count under the zero-one metric.
    const double e = approximation_error(space, seq, samples, Metric::zero_one());
    mismatches += static_cast<std::uint64_t>(std::llround(e * static_cast<double>(samples.size())));
    terms += samples.size();
  }
  return reduced(mismatches, terms);
}

}  // namespace fa
