// Command-line front end: solve, compare, theorem2, nfl, capacity.
//
// Exit status: 0 success, 1 failed expectation (theorem2/nfl), 2 configuration
// error, 3 budget ceiling refusal, 4 operation unsupported on the carrier.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>

#include "fa/fa.hpp"

namespace {

namespace fs = std::filesystem;

struct CommonOptions {
  std::string space;
  std::string target;
  std::size_t n = 1;
  std::string metric = "abs";
  bool signed_fallback = false;
  std::uint64_t seed = 0;
  std::optional<std::uint64_t> budget;
  unsigned workers = 1;
  std::string output;
  bool no_timing = false;
};

fa::Metric parse_metric(const CommonOptions& o) {
  fa::Metric m;
  if (o.metric == "abs") m.kind = fa::Metric::Kind::abs_diff;
  else if (o.metric == "sq") m.kind = fa::Metric::Kind::squared_diff;
  else if (o.metric == "01") m.kind = fa::Metric::Kind::zero_one;
  else throw fa::ConfigError("metric", "expected abs, sq or 01");
  if (o.signed_fallback) m.fallback = fa::Metric::Fallback::signed_target;
  return m;
}

fa::SearchOptions search_options(const CommonOptions& o) {
  fa::SearchOptions s;
  if (o.budget) {
    s.budget_ceiling = *o.budget;
  } else if (const char* env = std::getenv("FA_BUDGET_CEILING"); env != nullptr && *env != '\0') {
    s.budget_ceiling = fa::detail::parse_number<std::uint64_t>(env, "FA_BUDGET_CEILING");
  }
  s.workers = std::max(1u, o.workers);
  return s;
}

// Prefixes configuration errors from a file-valued flag with the flag name.
template <class F>
auto from_flag(std::string_view flag, F&& load) {
  try {
    return load();
  } catch (const fa::ConfigError& e) {
    throw fa::ConfigError(std::string(flag) + " " + e.where(), e.message());
  }
}

fa::SearchSpace load_space_flag(const std::string& ref) {
  return from_flag("--space", [&] { return fa::resolve_space(ref); });
}

fa::Target load_target_flag(const std::string& path) {
  return from_flag("--target", [&] { return fa::load_target_file(path); });
}

void require_n(std::size_t n) {
  if (n < 1) throw fa::ConfigError("n", "must be >= 1");
}

// Writes to --output when given, stdout otherwise.
class Sink {
public:
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
      if (!*file_) throw fa::ConfigError("output", "cannot open '" + path + "' for writing");
    }
  }
  std::ostream& out() { return file_ ? *file_ : std::cout; }

private:
  std::unique_ptr<std::ofstream> file_;
};

fa::ReportRow make_row(const fa::SolverChoice& choice, const std::string& space_label, const fa::Target& target,
                       std::size_t n, const fa::SearchSpace& space, const fa::SolveResult& r, bool no_timing) {
  std::string label = choice.label;
  if (choice.kind == fa::SolverChoice::Kind::ml) label = "ml:" + fa::render(space, fa::parse_skeleton(space, choice.skeleton));
  return {label, space_label, target.label, n, r.error, r.evaluated, no_timing ? 0 : r.wall_ms,
          fa::render(space, r.best), std::nullopt};
}

int cmd_solve(const CommonOptions& o, const std::string& solver) {
  require_n(o.n);
  const auto space = load_space_flag(o.space);
  const auto target = load_target_flag(o.target);
  const auto choice = fa::parse_solver(solver, o.seed);
  const auto result = fa::run_solver(choice, space, o.n, target.samples, parse_metric(o), search_options(o));
  const auto row = make_row(choice, fa::space_label(o.space), target, o.n, space, result, o.no_timing);
  Sink sink(o.output);
  sink.out() << fa::kReportHeader << '\n' << fa::to_csv(row) << '\n';
  std::cerr << row.solver << " on " << row.space << " / " << row.target << " (n=" << o.n << "): error "
            << fa::format_double(row.error) << " after " << row.evaluated << " sequences, best " << row.best << '\n';
  return 0;
}

int cmd_compare(const CommonOptions& o, const std::vector<std::string>& solvers) {
  require_n(o.n);
  if (solvers.size() < 2) throw fa::ConfigError("solver", "compare needs at least two --solver entries");
  const auto space = load_space_flag(o.space);
  const auto target = load_target_flag(o.target);
  const auto metric = parse_metric(o);
  const auto opts = search_options(o);

  std::vector<fa::ReportRow> rows;
  std::optional<double> asp_error;
  for (const auto& s : solvers) {
    const auto choice = fa::parse_solver(s, o.seed);
    const auto result = fa::run_solver(choice, space, o.n, target.samples, metric, opts);
    if (choice.kind == fa::SolverChoice::Kind::asp) asp_error = result.error;
    rows.push_back(make_row(choice, fa::space_label(o.space), target, o.n, space, result, o.no_timing));
  }
  if (asp_error) {
    for (auto& r : rows) r.regret = r.error - *asp_error;
  }
  std::stable_sort(rows.begin(), rows.end(), [](const fa::ReportRow& a, const fa::ReportRow& b) {
    if (a.error != b.error) return a.error < b.error;
    return a.wall_ms < b.wall_ms;
  });

  Sink sink(o.output);
  sink.out() << fa::kReportHeader << (asp_error ? ",regret" : "") << '\n';
  for (const auto& r : rows) sink.out() << fa::to_csv(r) << '\n';
  for (const auto& r : rows) {
    std::cerr << std::left << std::setw(28) << r.solver << " error " << fa::format_double(r.error);
    if (r.regret) std::cerr << "  regret " << fa::format_double(*r.regret);
    std::cerr << "  evaluated " << r.evaluated << "  best " << r.best << '\n';
  }
  return 0;
}

fs::path cache_dir() {
  if (const char* env = std::getenv("FA_CACHE_DIR"); env != nullptr && *env != '\0') return env;
  return ".fa-cache";
}

// Closure fixpoint depth, cached in a sidecar file keyed by the space hash.
std::size_t fixpoint_depth(const fa::SearchSpace& space) {
  const auto hash = fa::space_hash(space);
  std::ostringstream name;
  name << "fixpoint-" << std::hex << std::setw(16) << std::setfill('0') << hash << ".json";
  const auto path = cache_dir() / name.str();
  if (std::ifstream in(path); in) {
    try {
      const auto doc = fa::json::parse(in);
      if (doc.at("space_hash").get<std::uint64_t>() == hash) return doc.at("depth").get<std::size_t>();
    } catch (const std::exception&) {
      // Unreadable cache entries are recomputed and overwritten.
    }
  }
  const auto depth = fa::closure_fixpoint(space).depth;
  std::error_code ec;
  fs::create_directories(path.parent_path(), ec);
  if (std::ofstream out(path); out) out << fa::json{{"space_hash", hash}, {"depth", depth}}.dump() << '\n';
  return depth;
}

int cmd_theorem2(const CommonOptions& o, int k, std::optional<std::size_t> n) {
  if (k != 2 && k != 3) throw fa::ConfigError("K", "theorem2 supports K = 2 or 3");
  const auto space = fa::transformation_generators(k);
  const std::size_t depth = n ? *n : fixpoint_depth(space);
  require_n(depth);
  const auto report = fa::generator_sweep(space, depth, search_options(o));

  Sink sink(o.output);
  auto& out = sink.out();
  out << "theorem2 K=" << k << " n=" << depth << (n ? "" : " (closure fixpoint depth)") << '\n';
  const bool full_ok = report.exact_targets == report.targets;
  out << "t" << k << "-generators: " << report.exact_targets << "/" << report.targets << " targets at error 0 "
      << (full_ok ? "[ok]" : "[FAIL]") << '\n';
  for (const auto& a : report.ablations) {
    out << "without " << a.removed << ": " << a.nonzero_targets << " targets with error > 0 "
        << (a.nonzero_targets >= 1 ? "[ok]" : "[FAIL]") << '\n';
  }
  out << "result: " << (report.passed() ? "PASS" : "FAIL") << '\n';
  return report.passed() ? 0 : 1;
}

int cmd_nfl(const CommonOptions& o, int k, const std::vector<std::string>& sequences) {
  if (k != 2 && k != 3) throw fa::ConfigError("K", "nfl supports K = 2 or 3");
  if (sequences.size() != 2) throw fa::ConfigError("seq", "nfl needs exactly two --seq entries");
  const auto space = o.space.empty() ? fa::transformation_generators(k) : load_space_flag(o.space);
  if (!space.carrier().is_finite()) throw fa::Unsupported("nfl needs a finite carrier");
  if (space.carrier().size() != k) throw fa::ConfigError("space", "space carrier is not Z_" + std::to_string(k));

  const auto expected = fa::reduced(static_cast<std::uint64_t>(k - 1), static_cast<std::uint64_t>(k));
  Sink sink(o.output);
  auto& out = sink.out();
  out << "nfl K=" << k << '\n';
  bool ok = true;
  std::vector<fa::Fraction> means;
  for (const auto& text : sequences) {
    const auto seq = fa::parse_sequence(space, text);
    const auto mean = fa::nfl_mean_error(space, seq);
    means.push_back(mean);
    out << fa::render(space, seq) << ": mean error " << mean.num << "/" << mean.den << " ("
        << fa::format_double(mean.value()) << ")\n";
    ok = ok && mean == expected;
  }
  ok = ok && means[0] == means[1];
  out << "expected " << expected.num << "/" << expected.den << '\n';
  out << "result: " << (ok ? "PASS" : "FAIL") << '\n';
  return ok ? 0 : 1;
}

struct CapacityFlags {
  std::string skeleton;
  bool potential = false;
  bool growth = false;
  bool vc = false;
  bool collapsed = false;
  std::string points;
  std::size_t max_d = 0;
  std::size_t grid = 64;
};

int cmd_capacity(const CommonOptions& o, const CapacityFlags& f) {
  const auto space = load_space_flag(o.space);
  const auto label = fa::space_label(o.space);
  const std::string mode = f.collapsed ? "collapsed" : "strict";
  const int chosen = static_cast<int>(!f.skeleton.empty()) + f.potential + f.growth + f.vc;
  if (chosen != 1) throw fa::ConfigError("capacity", "choose exactly one of --skeleton, --potential, --growth, --vc");

  Sink sink(o.output);
  auto& out = sink.out();
  out << "quantity,space,argument,mode,value,detail\n";
  if (!f.skeleton.empty()) {
    const auto skel = fa::parse_skeleton(space, f.skeleton);
    const auto rep = fa::information_capacity(space, skel, f.collapsed, f.grid);
    std::string factors;
    for (std::size_t i = 0; i < rep.factor_sizes.size(); ++i) factors += (i ? "x" : "") + std::to_string(rep.factor_sizes[i]);
    out << "capacity," << fa::csv_field(label) << ',' << fa::render(space, skel) << ',' << mode << ','
        << rep.cardinality.str() << ',' << factors << (rep.sampled ? ";sampled" : "") << '\n';
    std::cerr << "capacity of " << fa::render(space, skel) << " (" << mode << "): " << rep.cardinality.str() << " = "
              << factors << '\n';
    return 0;
  }
  require_n(o.n);
  const auto opts = search_options(o);
  if (f.potential) {
    const auto rep = fa::information_potential(space, o.n, f.collapsed, opts, f.grid);
    out << "potential," << fa::csv_field(label) << ",n=" << o.n << ',' << mode << ',' << rep.cardinality << ','
        << (rep.sampled ? "sampled" : "exact") << '\n';
    std::cerr << "information potential (" << mode << ", n=" << o.n << "): " << rep.cardinality << '\n';
    return 0;
  }
  if (f.growth) {
    const auto rep = fa::potential_growth(space, o.n, opts, f.grid);
    for (const auto& row : rep.rows) {
      out << "growth," << fa::csv_field(label) << ",n=" << row.n << ",capacities," << row.capacities
          << ",collapsed_union=" << row.collapsed_union << '\n';
    }
    if (rep.saturation) {
      out << "saturation," << fa::csv_field(label) << ",n=" << o.n << ",capacities," << *rep.saturation << ",\n";
      std::cerr << "potential saturates at n=" << *rep.saturation << '\n';
    } else {
      std::cerr << "no saturation up to n=" << o.n << '\n';
    }
    return 0;
  }
  std::vector<fa::Value> points;
  if (f.points.empty()) {
    points = fa::carrier_grid(space.carrier(), f.grid);
  } else {
    for (const auto& tok : fa::detail::split(f.points, ',')) {
      points.push_back(space.carrier().is_finite()
                           ? fa::Value::element(fa::detail::parse_number<std::int64_t>(tok, "points"))
                           : fa::Value::real(fa::detail::parse_number<double>(tok, "points")));
    }
  }
  const std::size_t max_d = f.max_d == 0 ? points.size() : f.max_d;
  const auto rep = fa::vc_dimension(space, o.n, points, max_d, opts);
  std::string witness;
  for (std::size_t i = 0; i < rep.witness_points.size(); ++i) {
    witness += (i ? " " : "") + fa::format_double(points[rep.witness_points[i]].number());
  }
  out << "vc," << fa::csv_field(label) << ",n=" << o.n << ",brute-force," << rep.dimension << ",witness=" << witness
      << ";dichotomies=" << rep.realized_dichotomies << '\n';
  std::cerr << "VC dimension (n=" << o.n << "): " << rep.dimension << ", shattered points {" << witness << "}\n";
  return 0;
}

void add_common(CLI::App* sub, CommonOptions& o, bool needs_target) {
  sub->add_option("--space", o.space, "Space spec (JSON path or catalog:NAME)")->required();
  if (needs_target) sub->add_option("--target", o.target, "Target spec (JSON path)")->required();
  sub->add_option("-n", o.n, "Sequence length bound");
  sub->add_option("--metric", o.metric, "abs | sq | 01");
  sub->add_flag("--signed-fallback", o.signed_fallback, "Charge undefined outputs the signed target value");
  sub->add_option("--seed", o.seed, "Seed for random builders");
  sub->add_option("--budget", o.budget, "Ceiling on exhaustively scored sequences");
  sub->add_option("--workers", o.workers, "Worker threads");
  sub->add_option("--output", o.output, "Write the report here instead of stdout");
  sub->add_flag("--no-timing", o.no_timing, "Report wall_ms as 0 for reproducible output");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Function approximation search over composition sequences"};
  app.require_subcommand(1);

  CommonOptions o;
  std::string solver = "asp";
  std::vector<std::string> solvers;
  int k = 0;
  std::optional<std::size_t> theorem_n;
  std::vector<std::string> sequences;
  CapacityFlags cap;

  auto* solve = app.add_subcommand("solve", "Run one solver and emit a CSV report row");
  add_common(solve, o, true);
  solve->add_option("--solver", solver, "ml:SKELETON | asp | a-asp:STRAT[:ARG] | pac");

  auto* compare = app.add_subcommand("compare", "Run several solvers on the same input");
  add_common(compare, o, true);
  compare->add_option("--solver", solvers, "Solver (repeat for each)")->required();

  auto* theorem2 = app.add_subcommand("theorem2", "Generator-catalog sweep over all total targets on Z_K");
  theorem2->add_option("-K", k, "Carrier size (2 or 3)")->required();
  theorem2->add_option("-n", theorem_n, "Length bound (default: closure fixpoint depth)");
  theorem2->add_option("--workers", o.workers, "Worker threads");
  theorem2->add_option("--budget", o.budget, "Ceiling on exhaustively scored sequences");
  theorem2->add_option("--output", o.output, "Write the summary here instead of stdout");

  auto* nfl = app.add_subcommand("nfl", "Mean error of two fixed sequences over all targets on Z_K");
  nfl->add_option("-K", k, "Carrier size (2 or 3)")->required();
  nfl->add_option("--seq", sequences, "Rendered sequence (give twice)")->required();
  nfl->add_option("--space", o.space, "Space the sequences refer to (default: catalog tK-generators)");
  nfl->add_option("--output", o.output, "Write the summary here instead of stdout");

  auto* capacity = app.add_subcommand("capacity", "Information capacity, potential, growth and VC dimension");
  add_common(capacity, o, false);
  capacity->add_option("--skeleton", cap.skeleton, "Capacity of this skeleton");
  capacity->add_flag("--potential", cap.potential, "Information potential at -n");
  capacity->add_flag("--growth", cap.growth, "Potential for n = 1..-n");
  capacity->add_flag("--vc", cap.vc, "Brute-force VC dimension at -n");
  capacity->add_flag("--collapsed", cap.collapsed, "Collapsed capacity form");
  capacity->add_option("--points", cap.points, "VC domain points, comma separated");
  capacity->add_option("--max-d", cap.max_d, "Largest VC dimension tested");
  capacity->add_option("--grid", cap.grid, "Grid size for real carriers");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*solve) return cmd_solve(o, solver);
    if (*compare) return cmd_compare(o, solvers);
    if (*theorem2) return cmd_theorem2(o, k, theorem_n);
    if (*nfl) return cmd_nfl(o, k, sequences);
    if (*capacity) return cmd_capacity(o, cap);
  } catch (const fa::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 2;
  } catch (const fa::BudgetExceeded& e) {
    std::cerr << "refused: " << e.what() << '\n';
    return 3;
  } catch (const fa::CountOverflow& e) {
    std::cerr << "refused: " << e.what() << '\n';
    return 3;
  } catch (const fa::Unsupported& e) {
    std::cerr << "unsupported: " << e.what() << '\n';
    return 4;
  } catch (const fa::ContractViolation& e) {
    std::cerr << "precondition failed: " << e.what() << '\n';
    return 2;
  } catch (const fa::EmptyCapacity& e) {
    std::cerr << "empty capacity: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
