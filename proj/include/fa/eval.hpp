#pragma once

#include <cmath>
#include <string>

#include "fa/types.hpp"

namespace fa {

namespace detail {

inline double apply_builtin(BuiltinForm form, const ParamTuple& p, double x) {
  switch (form) {
    case BuiltinForm::affine: return p[0] * x + p[1];
    case BuiltinForm::scale: return p[0] * x;
    case BuiltinForm::sin: return std::sin(x);
    case BuiltinForm::exp: return std::exp(x);
    case BuiltinForm::relu: return x > 0.0 ? x : 0.0;
    case BuiltinForm::constant: return p[0];
  }
  return std::nan("");
}

// Assumes the parameter index and the input kind were already checked.
inline Value eval_unchecked(const Primitive& prim, std::size_t param, const Value& x) {
  if (const auto* table = std::get_if<LookupTable>(&prim.rule)) {
    const auto m = table->outputs.size() / prim.params.size();
    const auto y = table->outputs[param * m + static_cast<std::size_t>(x.index())];
    if (std::binary_search(prim.excluded.begin(), prim.excluded.end(), y)) return Value::undefined();
    return Value::element(y);
  }
  const double in = x.number();
  if (prim.domain && !prim.domain->contains(in)) return Value::undefined();
  const double y = apply_builtin(std::get<BuiltinForm>(prim.rule), prim.params[param], in);
  if (!std::isfinite(y)) return Value::undefined();
  if (prim.allowed && !prim.allowed->contains(y)) return Value::undefined();
  return Value::real(y);
}

inline Value eval_sequence_unchecked(const SearchSpace& space, const BoundSequence& seq, Value x) {
  for (const auto& st : seq.steps) {
    x = eval_unchecked(space.at(st.primitive), st.param, x);
    if (!x.defined()) return x;
  }
  return x;
}

}  // namespace detail

/// Output of one primitive under parameter `param_index`; undefined when the
/// input is outside the primitive's domain or the output is restricted.
inline Value eval_primitive(const Primitive& prim, std::size_t param_index, const Value& x) {
  if (param_index >= prim.param_count())
    throw ConfigError(prim.id, "parameter index " + std::to_string(param_index) + " out of range");
  if (!x.defined()) throw ContractViolation("eval_primitive: input is undefined");
  if (const auto* table = std::get_if<LookupTable>(&prim.rule)) {
    const auto m = static_cast<std::int64_t>(table->outputs.size() / prim.params.size());
    if (!x.is_element() || x.index() < 0 || x.index() >= m)
      throw ConfigError(prim.id, "input is not an element of Z_" + std::to_string(m));
  } else if (!x.is_real()) {
    throw ConfigError(prim.id, "builtin primitives take real inputs");
  }
  return detail::eval_unchecked(prim, param_index, x);
}

/// Applies the steps of `seq` in order, leftmost first. Undefined absorbs.
inline Value eval_sequence(const SearchSpace& space, const BoundSequence& seq, const Value& x) {
  validate(space, seq);
  if (!contains(space.carrier(), x)) throw ContractViolation("eval_sequence: input is not a carrier value");
  return detail::eval_sequence_unchecked(space, seq, x);
}

/// Pointwise distance d(a, b). `b` is a target value and must be defined.
inline double metric_eval(const Metric& metric, const Value& a, const Value& b) {
  if (!b.defined()) throw ContractViolation("metric_eval: target value is undefined");
  const double t = b.number();
  if (!a.defined()) {
    if (metric.fallback == Metric::Fallback::signed_target) return t;
    switch (metric.kind) {
      case Metric::Kind::abs_diff: return std::fabs(t);
      case Metric::Kind::squared_diff: return t * t;
      case Metric::Kind::zero_one: return 1.0;
    }
  }
  if (a.kind() != b.kind()) throw ConfigError("metric", "carrier mismatch between compared values");
  const double diff = a.number() - t;
  switch (metric.kind) {
    case Metric::Kind::abs_diff: return std::fabs(diff);
    case Metric::Kind::squared_diff: return diff * diff;
    case Metric::Kind::zero_one:
      if (a.is_element()) return a.index() == b.index() ? 0.0 : 1.0;
      return std::fabs(diff) <= kRealTolerance ? 0.0 : 1.0;
  }
  return 0.0;
}

namespace detail {

inline double approximation_error_unchecked(const SearchSpace& space, const BoundSequence& seq,
                                            const SampleSet& samples, const Metric& metric) {
  double sum = 0.0;
  for (const auto& p : samples.points()) {
    sum += metric_eval(metric, eval_sequence_unchecked(space, seq, p.x), p.y);
  }
  return sum / static_cast<double>(samples.size());
}

}  // namespace detail

/// Mean pointwise distance between `seq` and the sampled target, summed in
/// the listed sample order so the result is reproducible bit for bit.
inline double approximation_error(const SearchSpace& space, const BoundSequence& seq,
                                  const SampleSet& samples, const Metric& metric) {
  validate(space, seq);
  if (!(space.carrier() == samples.carrier()))
    throw ConfigError("target.carrier", "target carrier differs from the space carrier");
  return detail::approximation_error_unchecked(space, seq, samples, metric);
}

}  // namespace fa
