#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "fa/enumerate.hpp"
#include "fa/eval.hpp"
#include "fa/parallel.hpp"
#include "fa/rng.hpp"

namespace fa {

inline constexpr std::uint64_t kDefaultBudgetCeiling = 100'000'000;

struct SearchOptions {
  /// Largest number of bound sequences a single exhaustive pass may score.
  std::uint64_t budget_ceiling = kDefaultBudgetCeiling;
  unsigned workers = 1;
};

/// Per-round summary of a builder-driven search.
struct RoundSummary {
  std::size_t round = 0;
  std::size_t length = 0;      // longest candidate in the round
  std::size_t candidates = 0;  // candidates ranked in the round
  double round_best = 0.0;     // best ranking score in the round
  double incumbent = 0.0;      // best full-sample error so far
};

struct SolveResult {
  BoundSequence best;
  double error = 0.0;
  std::uint64_t evaluated = 0;
  std::vector<RoundSummary> frontier_trace;
  std::int64_t wall_ms = 0;
};

struct Scored {
  BoundSequence seq;
  double error = 0.0;
};

/// Best (error, canonical position) pair seen so far. Ties go to the
/// canonically smaller sequence, which makes the winner independent of the
/// order candidates were scored in.
class Incumbent {
public:
  void offer(const BoundSequence& seq, double error) {
    if (!best_ || error < best_->error || (error == best_->error && canonical_less(seq, best_->seq))) {
      best_ = Scored{seq, error};
    }
  }
  void merge(const Incumbent& other) {
    if (other.best_) offer(other.best_->seq, other.best_->error);
  }
  bool has_value() const noexcept { return best_.has_value(); }
  const Scored& get() const { return *best_; }

private:
  std::optional<Scored> best_;
};

namespace detail {

using Clock = std::chrono::steady_clock;

inline std::int64_t elapsed_ms(Clock::time_point start) {
  return std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start).count();
}

inline void check_compatible(const SearchSpace& space, const SampleSet& samples) {
  if (!(space.carrier() == samples.carrier()))
    throw ConfigError("target.carrier", "target carrier differs from the space carrier");
}

inline void check_budget(std::uint64_t required, const SearchOptions& opts) {
  if (required > opts.budget_ceiling) throw BudgetExceeded(required, opts.budget_ceiling);
}

struct RangeBest {
  Incumbent best;
  std::uint64_t evaluated = 0;
};

/// Scores every sequence of a candidate list, in parallel.
inline std::vector<double> score_all(const SearchSpace& space, const std::vector<BoundSequence>& candidates,
                                     const SampleSet& samples, const Metric& metric, unsigned workers) {
  std::vector<double> errors(candidates.size());
  parallel_chunks<int>(candidates.size(), workers, 0, [&](int&, std::uint64_t b, std::uint64_t e) {
    for (auto i = b; i < e; ++i) errors[i] = approximation_error_unchecked(space, candidates[i], samples, metric);
  });
  return errors;
}

}  // namespace detail

/// Grid search over the parameter assignments of one fixed skeleton.
inline SolveResult ml_solve(const SearchSpace& space, const SequenceSkeleton& fixed, const SampleSet& samples,
                            const Metric& metric, const SearchOptions& opts = {}) {
  const auto start = detail::Clock::now();
  validate(space, fixed);
  detail::check_compatible(space, samples);
  const auto total = assignment_count(space, fixed);
  detail::check_budget(total, opts);
  auto locals = parallel_chunks<detail::RangeBest>(
      total, opts.workers, {}, [&](detail::RangeBest& local, std::uint64_t b, std::uint64_t e) {
        for (auto i = b; i < e; ++i) {
          const auto seq = assignment_at(space, fixed, i);
          local.best.offer(seq, detail::approximation_error_unchecked(space, seq, samples, metric));
          ++local.evaluated;
        }
      });
  detail::RangeBest all;
  for (const auto& l : locals) {
    all.best.merge(l.best);
    all.evaluated += l.evaluated;
  }
  return {all.best.get().seq, all.best.get().error, all.evaluated, {}, detail::elapsed_ms(start)};
}

/// Exhaustive search over every bound sequence of length <= n. The winner is
/// the first minimum in canonical order, whatever the worker count.
inline SolveResult asp_solve(const SearchSpace& space, std::size_t n, const SampleSet& samples,
                             const Metric& metric, const SearchOptions& opts = {}) {
  const auto start = detail::Clock::now();
  detail::check_compatible(space, samples);
  const auto total = count_expanded(space, n).bound_sequences;
  detail::check_budget(total, opts);
  auto locals = parallel_chunks<detail::RangeBest>(
      total, opts.workers, {}, [&](detail::RangeBest& local, std::uint64_t b, std::uint64_t e) {
        BoundSequence seq = canonical_unrank(space, n, b);
        for (auto i = b; i < e; ++i) {
          local.best.offer(seq, detail::approximation_error_unchecked(space, seq, samples, metric));
          ++local.evaluated;
          if (i + 1 < e) advance(space, n, seq);
        }
      });
  detail::RangeBest all;
  for (const auto& l : locals) {
    all.best.merge(l.best);
    all.evaluated += l.evaluated;
  }
  return {all.best.get().seq, all.best.get().error, all.evaluated, {}, detail::elapsed_ms(start)};
}

/// How an a-ASP search picks the candidates it scores.
struct BuilderSpec {
  enum class Strategy : std::uint8_t { exhaustive, greedy, beam, random, epsilon_greedy };

  Strategy strategy = Strategy::greedy;
  std::size_t width = 1;       // beam
  std::uint64_t budget = 1;    // random, epsilon-greedy
  double epsilon = 0.0;        // epsilon-greedy
  std::uint64_t seed = 0;
  /// Rank candidates on a seeded half of the samples and score only the kept
  /// ones on the full sample set.
  bool history_aware = false;

  static BuilderSpec exhaustive() { return {Strategy::exhaustive}; }
  static BuilderSpec greedy() { return {Strategy::greedy}; }
  static BuilderSpec beam(std::size_t w) { return {Strategy::beam, w}; }
  static BuilderSpec random(std::uint64_t budget, std::uint64_t seed) {
    return {Strategy::random, 1, budget, 0.0, seed};
  }
  static BuilderSpec epsilon_greedy(double eps, std::uint64_t budget, std::uint64_t seed) {
    return {Strategy::epsilon_greedy, 1, budget, eps, seed};
  }

  void validate() const {
    if (strategy == Strategy::beam && width < 1) throw ConfigError("builder.width", "beam width must be >= 1");
    if ((strategy == Strategy::random || strategy == Strategy::epsilon_greedy) && budget < 1)
      throw ConfigError("builder.budget", "budget must be >= 1");
    if (strategy == Strategy::epsilon_greedy && !(epsilon >= 0.0 && epsilon <= 1.0))
      throw ConfigError("builder.epsilon", "epsilon must lie in [0, 1]");
  }

  /// Number of candidates per round that survive into the next round.
  std::size_t kept_per_round() const {
    switch (strategy) {
      case Strategy::beam: return width;
      case Strategy::greedy:
      case Strategy::epsilon_greedy: return 1;
      default: return static_cast<std::size_t>(-1);
    }
  }
};

struct BuilderStep {
  std::vector<BoundSequence> candidates;
  bool done = false;
};

namespace detail {

inline std::vector<BoundSequence> all_of_length_one(const SearchSpace& space) {
  std::vector<BoundSequence> out;
  for (std::size_t j = 0; j < space.size(); ++j) {
    for (std::size_t p = 0; p < space.at(j).param_count(); ++p) out.push_back(BoundSequence{{Step{j, p}}});
  }
  return out;
}

inline std::vector<BoundSequence> extensions(const SearchSpace& space, const BoundSequence& prefix) {
  std::vector<BoundSequence> out;
  for (std::size_t j = 0; j < space.size(); ++j) {
    for (std::size_t p = 0; p < space.at(j).param_count(); ++p) out.push_back(prefix.extended(Step{j, p}));
  }
  return out;
}

inline bool ranked_before(const Scored& a, const Scored& b) {
  if (a.error != b.error) return a.error < b.error;
  return canonical_less(a.seq, b.seq);
}

/// `count` distinct values drawn uniformly from [0, total), ascending (Floyd).
inline std::vector<std::uint64_t> sample_without_replacement(std::uint64_t total, std::uint64_t count,
                                                             CounterRng& rng) {
  std::vector<std::uint64_t> out;
  if (count >= total) {
    out.resize(total);
    for (std::uint64_t i = 0; i < total; ++i) out[i] = i;
    return out;
  }
  std::set<std::uint64_t> chosen;
  for (std::uint64_t j = total - count; j < total; ++j) {
    const auto t = rng.below(j + 1);
    if (!chosen.insert(t).second) chosen.insert(j);
  }
  return {chosen.begin(), chosen.end()};
}

}  // namespace detail

/// Next candidate set of a builder, as a pure function of the builder and the
/// (sequence, ranking score) history of all earlier rounds in order.
inline BuilderStep builder_step(const SearchSpace& space, std::size_t n, const BuilderSpec& builder,
                                const std::vector<Scored>& history, const SearchOptions& opts = {}) {
  builder.validate();
  using S = BuilderSpec::Strategy;
  const bool exact_scores = !builder.history_aware;
  const bool found_exact =
      exact_scores && std::any_of(history.begin(), history.end(), [](const Scored& s) { return s.error == 0.0; });

  switch (builder.strategy) {
    case S::exhaustive: {
      if (!history.empty()) return {{}, true};
      detail::check_budget(count_expanded(space, n).bound_sequences, opts);
      BuilderStep step;
      for_each_bound_sequence(space, n, [&](const BoundSequence& s) { step.candidates.push_back(s); });
      return step;
    }
    case S::random: {
      if (!history.empty()) return {{}, true};
      const auto total = count_expanded(space, n).bound_sequences;
      const auto count = std::min(builder.budget, total);
      detail::check_budget(count, opts);
      CounterRng rng(builder.seed);
      BuilderStep step;
      for (auto idx : detail::sample_without_replacement(total, count, rng))
        step.candidates.push_back(canonical_unrank(space, n, idx));
      return step;
    }
    case S::greedy:
    case S::beam: {
      if (history.empty()) return {detail::all_of_length_one(space), false};
      const std::size_t length = history.back().seq.length();
      if (length >= n || found_exact) return {{}, true};
      std::vector<Scored> round;
      double earlier_best = std::numeric_limits<double>::infinity();
      for (const auto& h : history) {
        if (h.seq.length() == length) round.push_back(h);
        else earlier_best = std::min(earlier_best, h.error);
      }
      std::sort(round.begin(), round.end(), detail::ranked_before);
      if (builder.strategy == S::greedy && length > 1 && !(round.front().error < earlier_best)) return {{}, true};
      const auto keep = std::min(round.size(), builder.strategy == S::greedy ? std::size_t{1} : builder.width);
      BuilderStep step;
      for (std::size_t i = 0; i < keep; ++i) {
        auto ext = detail::extensions(space, round[i].seq);
        step.candidates.insert(step.candidates.end(), ext.begin(), ext.end());
      }
      return step;
    }
    case S::epsilon_greedy: {
      const auto used = static_cast<std::uint64_t>(history.size());
      if (used >= builder.budget || found_exact) return {{}, true};
      const std::uint64_t per_round = space.step_count();
      std::optional<BoundSequence> prefix;
      if (!history.empty()) {
        // Every round but a budget-truncated last one holds exactly per_round entries.
        const auto round_index = used / per_round;
        const auto first = history.begin() + static_cast<std::ptrdiff_t>((round_index - 1) * per_round);
        std::vector<Scored> last(first, first + static_cast<std::ptrdiff_t>(per_round));
        CounterRng rng(builder.seed, round_index);
        const Scored* pick = nullptr;
        if (rng.uniform() < builder.epsilon) {
          pick = &last[rng.below(last.size())];
        } else {
          pick = &*std::min_element(last.begin(), last.end(), detail::ranked_before);
        }
        if (pick->seq.length() < n) prefix = pick->seq;
      }
      BuilderStep step{prefix ? detail::extensions(space, *prefix) : detail::all_of_length_one(space), false};
      const auto room = builder.budget - used;
      if (step.candidates.size() > room) step.candidates.resize(room);
      return step;
    }
  }
  return {{}, true};
}

namespace detail {

/// Seeded half of the sample positions (at least one), ascending.
inline std::vector<std::size_t> subsample_positions(std::size_t size, std::uint64_t seed) {
  CounterRng rng(seed, 0xFFFF);
  const auto picks = sample_without_replacement(size, (size + 1) / 2, rng);
  return {picks.begin(), picks.end()};
}

}  // namespace detail

/// Builder-driven search: scores only what the builder proposes, round by
/// round, and returns the best full-sample error found.
inline SolveResult a_asp_solve(const SearchSpace& space, std::size_t n, const SampleSet& samples,
                               const Metric& metric, const BuilderSpec& builder, const SearchOptions& opts = {}) {
  const auto start = detail::Clock::now();
  builder.validate();
  detail::check_compatible(space, samples);
  if (n < 1) throw ConfigError("n", "sequence length bound must be >= 1");

  std::optional<SampleSet> ranking;
  if (builder.history_aware) {
    const auto pos = detail::subsample_positions(samples.size(), builder.seed);
    ranking = samples.subset(pos);
  }

  std::vector<Scored> history;
  Incumbent incumbent;
  SolveResult result;
  for (std::size_t round = 0;; ++round) {
    auto step = builder_step(space, n, builder, history, opts);
    if (step.done || step.candidates.empty()) break;
    const auto& cands = step.candidates;
    const auto rank_errors =
        detail::score_all(space, cands, ranking ? *ranking : samples, metric, opts.workers);

    RoundSummary summary{round, 0, cands.size(), std::numeric_limits<double>::infinity(), 0.0};
    std::vector<std::size_t> order(cands.size());
    for (std::size_t i = 0; i < cands.size(); ++i) {
      order[i] = i;
      summary.length = std::max(summary.length, cands[i].length());
      summary.round_best = std::min(summary.round_best, rank_errors[i]);
    }
    if (!ranking) {
      for (std::size_t i = 0; i < cands.size(); ++i) incumbent.offer(cands[i], rank_errors[i]);
      result.evaluated += cands.size();
    } else {
      const auto keep = std::min(cands.size(), builder.kept_per_round());
      std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(keep), order.end(),
                        [&](std::size_t a, std::size_t b) {
                          return detail::ranked_before({cands[a], rank_errors[a]}, {cands[b], rank_errors[b]});
                        });
      for (std::size_t i = 0; i < keep; ++i) {
        const auto& c = cands[order[i]];
        incumbent.offer(c, detail::approximation_error_unchecked(space, c, samples, metric));
      }
      result.evaluated += keep;
    }
    summary.incumbent = incumbent.get().error;
    result.frontier_trace.push_back(summary);
    for (std::size_t i = 0; i < cands.size(); ++i) history.push_back({std::move(step.candidates[i]), rank_errors[i]});
  }
  result.best = incumbent.get().seq;
  result.error = incumbent.get().error;
  result.wall_ms = detail::elapsed_ms(start);
  return result;
}

/// PAC mode: every (primitive, parameter) pair is one hypothesis, scored by
/// the fraction of sample points where it disagrees with the target. No
/// compositions are searched. Ties go to catalog order.
inline SolveResult pac_solve(const SearchSpace& hypotheses, const SampleSet& samples) {
  const auto start = detail::Clock::now();
  detail::check_compatible(hypotheses, samples);
  Incumbent best;
  std::uint64_t evaluated = 0;
  for (const auto& h : detail::all_of_length_one(hypotheses)) {
    best.offer(h, detail::approximation_error_unchecked(hypotheses, h, samples, Metric::zero_one()));
    ++evaluated;
  }
  return {best.get().seq, best.get().error, evaluated, {}, detail::elapsed_ms(start)};
}

}  // namespace fa
