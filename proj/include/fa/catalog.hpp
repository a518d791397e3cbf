#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "fa/types.hpp"

namespace fa {

/// Generators of the full transformation monoid on Z_K (K >= 2): the
/// transposition (0 1), the cycle x -> x+1, and the idempotent sending 1 to 0.
inline SearchSpace transformation_generators(std::int64_t k) {
  if (k < 2) throw ConfigError("K", "transformation generators need K >= 2");
  std::vector<std::int64_t> swap01(static_cast<std::size_t>(k)), cycle(swap01.size()), merge10(swap01.size());
  for (std::int64_t x = 0; x < k; ++x) {
    const auto i = static_cast<std::size_t>(x);
    swap01[i] = x == 0 ? 1 : x == 1 ? 0 : x;
    cycle[i] = (x + 1) % k;
    merge10[i] = x == 1 ? 0 : x;
  }
  if (k == 2) {
    // On Z_2 the transposition and the cycle coincide; the idempotent is const 0.
    return SearchSpace(Carrier::finite(2), {table_primitive("not", {1, 0}), table_primitive("const0", {0, 0})});
  }
  return SearchSpace(Carrier::finite(k), {table_primitive("swap01", swap01), table_primitive("cycle", cycle),
                                          table_primitive("merge10", merge10)});
}

/// Real-interval space over [-1, 1]. Parameter grids are fixed:
///   affine(a, b) = a*x + b   a in {-1, -0.5, 0.5, 1, 2}, b in {-0.5, 0, 0.5}
///   scale(c)     = c*x       c in {-1, 0.5, 2}
///   sin, exp, relu           no parameters
inline SearchSpace real_basic_catalog() {
  std::vector<ParamTuple> affine;
  for (double a : {-1.0, -0.5, 0.5, 1.0, 2.0}) {
    for (double b : {-0.5, 0.0, 0.5}) affine.push_back({a, b});
  }
  return SearchSpace(Carrier::real(-1.0, 1.0),
                     {builtin_primitive("affine", BuiltinForm::affine, affine),
                      builtin_primitive("scale", BuiltinForm::scale, {{-1.0}, {0.5}, {2.0}}),
                      builtin_primitive("sin", BuiltinForm::sin), builtin_primitive("exp", BuiltinForm::exp),
                      builtin_primitive("relu", BuiltinForm::relu)});
}

inline const std::vector<std::string_view>& catalog_names() {
  static const std::vector<std::string_view> names{"t2-generators", "t3-generators", "t4-generators", "real-basic"};
  return names;
}

inline SearchSpace elementary_catalog(std::string_view name) {
  if (name == "t2-generators") return transformation_generators(2);
  if (name == "t3-generators") return transformation_generators(3);
  if (name == "t4-generators") return transformation_generators(4);
  if (name == "real-basic") return real_basic_catalog();
  throw ConfigError("catalog", "unknown catalog '" + std::string(name) + "'");
}

}  // namespace fa
