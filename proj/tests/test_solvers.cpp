#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "fa/fa.hpp"
#include "support/oracles.hpp"

using namespace fa;

namespace {

SampleSet finite_samples(std::int64_t m, std::vector<std::pair<std::int64_t, std::int64_t>> xy) {
  std::vector<SampleSet::Point> pts;
  for (auto [x, y] : xy) pts.push_back({Value::element(x), Value::element(y)});
  return SampleSet(Carrier::finite(m), pts);
}

SampleSet table_target(const FunctionTable& t) {
  std::vector<SampleSet::Point> pts;
  for (std::size_t x = 0; x < t.size(); ++x) pts.push_back({Value::element(static_cast<std::int64_t>(x)), t[x]});
  return SampleSet(Carrier::finite(static_cast<std::int64_t>(t.size())), pts);
}

/// Z_10 thresholds: parameter θ in 0..9, h_θ(x) = [x >= θ].
SearchSpace threshold_space() {
  std::vector<std::int64_t> outputs;
  Primitive p;
  p.id = "thr";
  p.params.clear();
  for (std::int64_t theta = 0; theta < 10; ++theta) {
    p.params.push_back({static_cast<double>(theta)});
    for (std::int64_t x = 0; x < 10; ++x) outputs.push_back(x >= theta ? 1 : 0);
  }
  p.rule = LookupTable{outputs};
  return SearchSpace(Carrier::finite(10), {p});
}

std::vector<BuilderSpec> all_builders(std::uint64_t seed) {
  auto ha = BuilderSpec::beam(2);
  ha.history_aware = true;
  ha.seed = seed;
  return {BuilderSpec::exhaustive(), BuilderSpec::greedy(),           BuilderSpec::beam(1),
          BuilderSpec::beam(3),      BuilderSpec::random(5, seed),    BuilderSpec::epsilon_greedy(0.3, 12, seed),
          ha};
}

}  // namespace

TEST_CASE("ml_solve", "[solvers]") {
  SECTION("grid search finds an exact affine member") {
    Primitive aff = builtin_primitive("affine", BuiltinForm::affine, {{0, 0}, {0, 1}, {1, 0}, {1, 1}});
    const SearchSpace space(Carrier::real(-1.0, 2.0), {aff});
    const SampleSet samples(space.carrier(), {{Value::real(0.0), Value::real(0.0)}, {Value::real(1.0), Value::real(1.0)}});
    const auto r = ml_solve(space, {{0}}, samples, Metric::abs());
    CHECK(r.best == BoundSequence{{Step{0, 2}}});
    CHECK(r.error == 0.0);
    CHECK(r.evaluated == 4);
  }
  SECTION("a constant cannot fit a balanced target") {
    const auto t2 = elementary_catalog("t2-generators");
    const auto r = ml_solve(t2, parse_skeleton(t2, "const0"), finite_samples(2, {{0, 1}, {1, 0}}), Metric::zero_one());
    CHECK(r.error == 0.5);
  }
  SECTION("a singleton grid scores one assignment") {
    const auto t3 = elementary_catalog("t3-generators");
    const auto r = ml_solve(t3, parse_skeleton(t3, "cycle,swap01"), finite_samples(3, {{0, 0}}), Metric::abs());
    CHECK(r.evaluated == 1);
    CHECK(r.best == parse_sequence(t3, "cycle·swap01"));
  }
  SECTION("ties go to the first assignment in odometer order") {
    Primitive p = table_primitive("f", {0, 0, 0, 0});
    p.params = {{0}, {1}};
    const SearchSpace space(Carrier::finite(2), {p});
    CHECK(ml_solve(space, {{0, 0}}, finite_samples(2, {{0, 1}}), Metric::abs()).best ==
          BoundSequence{{Step{0, 0}, Step{0, 0}}});
  }
  SECTION("invalid skeleton") {
    const auto t2 = elementary_catalog("t2-generators");
    CHECK_THROWS_AS(ml_solve(t2, {{5}}, finite_samples(2, {{0, 1}}), Metric::abs()), ConfigError);
  }
}

TEST_CASE("asp_solve", "[solvers]") {
  SECTION("unique exact composition") {
    const SearchSpace space(Carrier::finite(3), {table_primitive("inc", {1, 2, 0})});
    const auto r = asp_solve(space, 2, finite_samples(3, {{0, 2}, {1, 0}, {2, 1}}), Metric::zero_one());
    CHECK(r.error == 0.0);
    CHECK(r.best == parse_sequence(space, "inc·inc"));
  }
  SECTION("no power of not is constant") {
    const SearchSpace space(Carrier::finite(2), {table_primitive("not", {1, 0})});
    const auto r = asp_solve(space, 3, finite_samples(2, {{0, 0}, {1, 0}}), Metric::zero_one());
    CHECK(r.error == 0.5);
    CHECK(r.evaluated == 3);
    CHECK(r.best == parse_sequence(space, "not"));
  }
  SECTION("budget ceiling refuses with the exact count") {
    const auto t3 = elementary_catalog("t3-generators");
    SearchOptions opts;
    opts.budget_ceiling = 100;
    try {
      asp_solve(t3, 5, finite_samples(3, {{0, 0}}), Metric::abs(), opts);
      FAIL("expected a budget refusal");
    } catch (const BudgetExceeded& e) {
      CHECK(e.required() == 363);
      CHECK(e.ceiling() == 100);
    }
  }
  SECTION("carrier mismatch") {
    const auto t3 = elementary_catalog("t3-generators");
    CHECK_THROWS_AS(asp_solve(t3, 2, finite_samples(2, {{0, 0}}), Metric::abs()), ConfigError);
  }
}

TEST_CASE("asp_solve recovers any sequence drawn from the space", "[solvers][property]") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 40; ++trial) {
    const auto fx = oracle::random_fixture(rng);
    const auto seqs = oracle::all_sequences(fx.space, fx.n);
    const auto& pick = seqs[std::uniform_int_distribution<std::size_t>(0, seqs.size() - 1)(rng)];
    std::vector<SampleSet::Point> pts;
    for (const auto& x : carrier_grid(fx.space.carrier())) {
      const auto y = eval_sequence(fx.space, pick, x);
      if (y.defined()) pts.push_back({x, y});
    }
    if (pts.empty()) continue;
    const SampleSet samples(fx.space.carrier(), pts);
    CHECK(asp_solve(fx.space, fx.n, samples, Metric::abs()).error == 0.0);
  }
}

TEST_CASE("builder_step", "[solvers]") {
  const auto t3 = elementary_catalog("t3-generators");
  SECTION("greedy starts from every length-1 sequence") {
    const auto step = builder_step(t3, 3, BuilderSpec::greedy(), {});
    CHECK_FALSE(step.done);
    CHECK(step.candidates == std::vector<BoundSequence>{parse_sequence(t3, "swap01"), parse_sequence(t3, "cycle"),
                                                        parse_sequence(t3, "merge10")});
  }
  SECTION("beam(2) extends only the two best") {
    const std::vector<Scored> history{{parse_sequence(t3, "swap01"), 0.6},
                                      {parse_sequence(t3, "cycle"), 0.3},
                                      {parse_sequence(t3, "merge10"), 0.5}};
    const auto step = builder_step(t3, 3, BuilderSpec::beam(2), history);
    REQUIRE(step.candidates.size() == 6);
    for (std::size_t i = 0; i < 3; ++i) CHECK(step.candidates[i].steps.front() == Step{1, 0});
    for (std::size_t i = 3; i < 6; ++i) CHECK(step.candidates[i].steps.front() == Step{2, 0});
  }
  SECTION("random is reproducible from its seed") {
    const auto a = builder_step(t3, 4, BuilderSpec::random(10, 99), {});
    const auto b = builder_step(t3, 4, BuilderSpec::random(10, 99), {});
    CHECK(a.candidates == b.candidates);
    CHECK(a.candidates.size() == 10);
    CHECK(std::set<BoundSequence, decltype(&canonical_less)>(a.candidates.begin(), a.candidates.end(), &canonical_less).size() == 10);
    CHECK(builder_step(t3, 4, BuilderSpec::random(10, 100), {}).candidates != a.candidates);
  }
  SECTION("greedy stops when an extension does not improve") {
    const std::vector<Scored> history{{parse_sequence(t3, "cycle"), 0.3},
                                      {parse_sequence(t3, "cycle·swap01"), 0.3},
                                      {parse_sequence(t3, "cycle·cycle"), 0.6},
                                      {parse_sequence(t3, "cycle·merge10"), 0.9}};
    CHECK(builder_step(t3, 5, BuilderSpec::greedy(), history).done);
  }
  SECTION("greedy and beam stop once a round holds an exact match") {
    const std::vector<Scored> history{{parse_sequence(t3, "swap01"), 0.0}, {parse_sequence(t3, "cycle"), 0.3}};
    CHECK(builder_step(t3, 5, BuilderSpec::beam(2), history).done);
  }
  SECTION("epsilon-greedy respects its budget") {
    std::vector<Scored> history;
    const auto spec = BuilderSpec::epsilon_greedy(0.5, 7, 3);
    std::size_t total = 0;
    for (;;) {
      const auto step = builder_step(t3, 4, spec, history);
      if (step.done || step.candidates.empty()) break;
      for (const auto& c : step.candidates) history.push_back({c, 0.5});
      total += step.candidates.size();
    }
    CHECK(total == 7);
  }
  SECTION("invalid builders") {
    CHECK_THROWS_AS(builder_step(t3, 3, BuilderSpec::beam(0), {}), ConfigError);
    CHECK_THROWS_AS(builder_step(t3, 3, BuilderSpec::random(0, 1), {}), ConfigError);
    CHECK_THROWS_AS(builder_step(t3, 3, BuilderSpec::epsilon_greedy(1.5, 3, 1), {}), ConfigError);
  }
}

TEST_CASE("a_asp_solve", "[solvers]") {
  const auto t3 = elementary_catalog("t3-generators");
  const auto target = finite_samples(3, {{0, 0}, {1, 0}, {2, 0}});
  const auto exact = asp_solve(t3, 5, target, Metric::zero_one());
  REQUIRE(exact.error == 0.0);

  SECTION("a beam wider than any frontier matches ASP") {
    const auto r = a_asp_solve(t3, 5, target, Metric::zero_one(), BuilderSpec::beam(1000));
    CHECK(r.error == exact.error);
  }
  SECTION("random with the full budget matches ASP") {
    const auto r = a_asp_solve(t3, 5, target, Metric::zero_one(), BuilderSpec::random(363, 12345));
    CHECK(r.error == exact.error);
    CHECK(r.evaluated == 363);
    CHECK(r.best == exact.best);
  }
  SECTION("exhaustive builder is ASP") {
    const auto r = a_asp_solve(t3, 5, target, Metric::zero_one(), BuilderSpec::exhaustive());
    CHECK(r.best == exact.best);
    CHECK(r.evaluated == exact.evaluated);
  }
  SECTION("frontier trace has one row per round") {
    const auto r = a_asp_solve(t3, 3, target, Metric::abs(), BuilderSpec::beam(2));
    REQUIRE_FALSE(r.frontier_trace.empty());
    CHECK(r.frontier_trace.front().candidates == 3);
    CHECK(r.frontier_trace.back().incumbent == r.error);
  }
}

TEST_CASE("pac_solve", "[solvers]") {
  SECTION("realizable by a catalog hypothesis") {
    const auto t3 = elementary_catalog("t3-generators");
    const auto r = pac_solve(t3, finite_samples(3, {{0, 1}, {1, 2}, {2, 0}}));
    CHECK(r.error == 0.0);
    CHECK(r.best == parse_sequence(t3, "cycle"));
  }
  SECTION("two constants against not tie at 1/2") {
    const SearchSpace h(Carrier::finite(2), {table_primitive("const0", {0, 0}), table_primitive("const1", {1, 1})});
    const auto r = pac_solve(h, finite_samples(2, {{0, 1}, {1, 0}}));
    CHECK(r.error == 0.5);
    CHECK(r.best == parse_sequence(h, "const0"));
    CHECK(r.evaluated == 2);
  }
  SECTION("realizable threshold") {
    const auto space = threshold_space();
    std::vector<std::pair<std::int64_t, std::int64_t>> xy;
    for (std::int64_t x = 0; x < 10; ++x) xy.push_back({x, x >= 5 ? 1 : 0});
    const auto r = pac_solve(space, finite_samples(10, xy));
    CHECK(r.error == 0.0);
    CHECK(r.best == BoundSequence{{Step{0, 5}}});
  }
}

TEST_CASE("solver dominance, determinism and round-trip", "[solvers][property]") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 60; ++trial) {
    const auto fx = oracle::random_fixture(rng);
    for (auto metric : {Metric::abs(), Metric::squared(), Metric::zero_one()}) {
      const auto asp = asp_solve(fx.space, fx.n, fx.samples, metric);
      CHECK(asp.error == oracle::min_error(fx.space, fx.n, fx.samples, metric));
      CHECK(asp.error == approximation_error(fx.space, asp.best, fx.samples, metric));
      CHECK(asp.evaluated >= 1);

      for (unsigned workers : {2u, 3u, 4u}) {
        SearchOptions opts;
        opts.workers = workers;
        const auto par = asp_solve(fx.space, fx.n, fx.samples, metric, opts);
        CHECK(par.best == asp.best);
        CHECK(par.error == asp.error);
        CHECK(par.evaluated == asp.evaluated);
      }

      for (const auto& builder : all_builders(static_cast<std::uint64_t>(trial))) {
        const auto a = a_asp_solve(fx.space, fx.n, fx.samples, metric, builder);
        CHECK(a.error >= asp.error);
        CHECK(a.error == approximation_error(fx.space, a.best, fx.samples, metric));
        CHECK(a.best.length() <= fx.n);
        SearchOptions opts;
        opts.workers = 3;
        const auto again = a_asp_solve(fx.space, fx.n, fx.samples, metric, builder, opts);
        CHECK(again.best == a.best);
        CHECK(again.evaluated == a.evaluated);
      }

      for (const auto& skel : enumerate_structures(fx.space, fx.n)) {
        const auto ml = ml_solve(fx.space, skel, fx.samples, metric);
        CHECK(ml.error >= asp.error);
        CHECK(ml.error == approximation_error(fx.space, ml.best, fx.samples, metric));
      }

      const auto pac = pac_solve(fx.space, fx.samples);
      CHECK(pac.error == approximation_error(fx.space, pac.best, fx.samples, Metric::zero_one()));
    }
  }
}

TEST_CASE("adding a primitive never raises the ASP error", "[solvers][property]") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 60; ++trial) {
    const auto fx = oracle::random_fixture(rng);
    if (fx.space.size() < 2) continue;
    const auto full = asp_solve(fx.space, fx.n, fx.samples, Metric::abs());
    for (std::size_t i = 0; i < fx.space.size(); ++i) {
      CHECK(asp_solve(fx.space.without(i), fx.n, fx.samples, Metric::abs()).error >= full.error);
    }
  }
}

TEST_CASE("generator catalogs reach every total target", "[solvers][experiments]") {
  SECTION("K = 2") {
    const auto r = generator_sweep(elementary_catalog("t2-generators"), 2);
    CHECK(r.targets == 4);
    CHECK(r.exact_targets == 4);
    REQUIRE(r.ablations.size() == 2);
    for (const auto& a : r.ablations) CHECK(a.nonzero_targets > 0);
    CHECK(r.passed());
  }
  SECTION("K = 3") {
    const auto r = generator_sweep(elementary_catalog("t3-generators"), 5);
    CHECK(r.targets == 27);
    CHECK(r.exact_targets == 27);
    REQUIRE(r.ablations.size() == 3);
    for (const auto& a : r.ablations) CHECK(a.nonzero_targets > 0);
    CHECK(r.passed());
  }
  SECTION("below the fixpoint depth some target is missed") {
    const auto r = generator_sweep(elementary_catalog("t3-generators"), 4);
    CHECK(r.exact_targets < 27);
    CHECK_FALSE(r.passed());
  }
}

TEST_CASE("unreachable targets exist whenever closure is not everything", "[solvers][experiments][property]") {
  std::mt19937_64 rng(51);
  for (int trial = 0; trial < 40; ++trial) {
    const auto fx = oracle::random_fixture(rng);
    const auto reached = closure(fx.space, fx.n);
    const auto all = all_total_tables(fx.space.carrier().size());
    const bool covers = std::all_of(all.begin(), all.end(), [&](const auto& t) { return reached.contains(t); });
    const auto missing = find_unreachable_target(fx.space, fx.n);
    CHECK(missing.has_value() == !covers);
    if (missing) CHECK(asp_solve(fx.space, fx.n, table_target(*missing), Metric::zero_one()).error > 0.0);
  }
}

TEST_CASE("mean zero-one error over all targets is (K-1)/K", "[solvers][experiments]") {
  for (auto name : {"t2-generators", "t3-generators"}) {
    const auto space = elementary_catalog(name);
    const auto k = static_cast<std::uint64_t>(space.carrier().size());
    for (const auto& seq : oracle::all_sequences(space, 2))
      CHECK(nfl_mean_error(space, seq) == reduced(k - 1, k));
  }
  const SearchSpace partial(Carrier::finite(2), {table_primitive("drop1", {0, 1}, {1})});
  CHECK_THROWS_AS(nfl_mean_error(partial, parse_sequence(partial, "drop1")), ContractViolation);
}

TEST_CASE("greedy is strictly suboptimal on the trap fixture", "[solvers]") {
  const auto space = resolve_space(FA_FIXTURE_DIR "/greedy_trap_space.json");
  const auto target = load_target_file(FA_FIXTURE_DIR "/greedy_trap_target.json");
  for (auto metric : {Metric::abs(), Metric::zero_one()}) {
    const auto asp = asp_solve(space, 2, target.samples, metric);
    CHECK(asp.error == 0.0);
    CHECK(a_asp_solve(space, 2, target.samples, metric, BuilderSpec::greedy()).error > 0.0);
    CHECK(a_asp_solve(space, 2, target.samples, metric, BuilderSpec::beam(1)).error > 0.0);
    CHECK(a_asp_solve(space, 2, target.samples, metric, BuilderSpec::beam(2)).error == 0.0);
  }
}
