// Walk-through of the library on the Z_3 generator catalog: closure, the
// three solvers on one target, and the capacity analyzers.

#include <iostream>

#include "fa/fa.hpp"

int main() {
  const auto space = fa::elementary_catalog("t3-generators");
  const auto fp = fa::closure_fixpoint(space);
  std::cout << "t3-generators realize " << fp.total_count() << " total functions on Z_3 by length " << fp.depth
            << "\n";

  // Target: x -> 2x mod 3, sampled on all of Z_3.
  std::vector<fa::SampleSet::Point> pts;
  for (std::int64_t x = 0; x < 3; ++x) pts.push_back({fa::Value::element(x), fa::Value::element((2 * x) % 3)});
  const fa::SampleSet target(space.carrier(), pts);
  const auto metric = fa::Metric::zero_one();

  const auto asp = fa::asp_solve(space, fp.depth, target, metric);
  std::cout << "asp:    error " << asp.error << " with " << fa::render(space, asp.best) << " (" << asp.evaluated
            << " scored)\n";
  const auto greedy = fa::a_asp_solve(space, fp.depth, target, metric, fa::BuilderSpec::greedy());
  std::cout << "greedy: error " << greedy.error << " with " << fa::render(space, greedy.best) << " ("
            << greedy.evaluated << " scored)\n";
  const auto beam = fa::a_asp_solve(space, fp.depth, target, metric, fa::BuilderSpec::beam(4));
  std::cout << "beam 4: error " << beam.error << " with " << fa::render(space, beam.best) << " (" << beam.evaluated
            << " scored)\n";

  const auto cap = fa::information_capacity(space, fa::parse_skeleton(space, "cycle,merge10"), false);
  std::cout << "capacity of cycle·merge10: " << cap.cardinality << "\n";
  for (const auto& row : fa::potential_growth(space, 6).rows) {
    std::cout << "  n=" << row.n << " capacities=" << row.capacities << " collapsed=" << row.collapsed_union << "\n";
  }
}
