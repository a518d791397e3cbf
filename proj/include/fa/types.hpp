#pragma once

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

#include "fa/errors.hpp"

namespace fa {

/// Absolute tolerance for equality of real carrier values.
inline constexpr double kRealTolerance = 1e-9;

/// The value universe of a space: Z_m, or a real interval [lo, hi].
class Carrier {
public:
  enum class Kind : std::uint8_t { finite, real };

  static Carrier finite(std::int64_t m) {
    if (m < 1) throw ConfigError("carrier.m", "finite carrier requires m >= 1");
    Carrier c;
    c.kind_ = Kind::finite;
    c.m_ = m;
    return c;
  }

  static Carrier real(double lo, double hi) {
    if (!(std::isfinite(lo) && std::isfinite(hi)) || !(lo < hi))
      throw ConfigError("carrier", "real carrier requires finite lo < hi");
    Carrier c;
    c.kind_ = Kind::real;
    c.lo_ = lo;
    c.hi_ = hi;
    return c;
  }

  Kind kind() const noexcept { return kind_; }
  bool is_finite() const noexcept { return kind_ == Kind::finite; }
  std::int64_t size() const noexcept { return m_; }
  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }

  friend bool operator==(const Carrier&, const Carrier&) = default;

private:
  Carrier() = default;
  Kind kind_ = Kind::finite;
  std::int64_t m_ = 1;
  double lo_ = 0.0;
  double hi_ = 0.0;
};

/// Tagged scalar: an element of Z_m, a real number, or undefined.
class Value {
public:
  enum class Kind : std::uint8_t { undefined, element, real };

  constexpr Value() = default;
  static constexpr Value undefined() { return Value(); }
  static constexpr Value element(std::int64_t index) {
    Value v;
    v.kind_ = Kind::element;
    v.index_ = index;
    return v;
  }
  static constexpr Value real(double x) {
    Value v;
    v.kind_ = Kind::real;
    v.real_ = x;
    return v;
  }

  constexpr Kind kind() const noexcept { return kind_; }
  constexpr bool defined() const noexcept { return kind_ != Kind::undefined; }
  constexpr bool is_element() const noexcept { return kind_ == Kind::element; }
  constexpr bool is_real() const noexcept { return kind_ == Kind::real; }
  constexpr std::int64_t index() const noexcept { return index_; }

  /// Numeric view used by the distance metrics; elements map to their index.
  constexpr double number() const noexcept {
    return kind_ == Kind::element ? static_cast<double>(index_) : real_;
  }

  friend constexpr bool operator==(const Value& a, const Value& b) noexcept {
    if (a.kind_ != b.kind_) return false;
    switch (a.kind_) {
      case Kind::undefined: return true;
      case Kind::element: return a.index_ == b.index_;
      case Kind::real: return a.real_ == b.real_;
    }
    return false;
  }

  // Total order for use as a set/map key: kind first, then payload.
  friend constexpr bool operator<(const Value& a, const Value& b) noexcept {
    if (a.kind_ != b.kind_) return a.kind_ < b.kind_;
    if (a.kind_ == Kind::element) return a.index_ < b.index_;
    if (a.kind_ == Kind::real) return a.real_ < b.real_;
    return false;
  }

private:
  Kind kind_ = Kind::undefined;
  std::int64_t index_ = 0;
  double real_ = 0.0;
};

inline bool contains(const Carrier& c, const Value& v) {
  if (c.is_finite()) return v.is_element() && v.index() >= 0 && v.index() < c.size();
  return v.is_real() && std::isfinite(v.number());
}

/// Every element of a finite carrier, or `points` evenly spaced grid points
/// (endpoints included) of a real one.
inline std::vector<Value> carrier_grid(const Carrier& c, std::size_t points = 64) {
  std::vector<Value> out;
  if (c.is_finite()) {
    out.reserve(static_cast<std::size_t>(c.size()));
    for (std::int64_t i = 0; i < c.size(); ++i) out.push_back(Value::element(i));
    return out;
  }
  if (points == 1) return {Value::real(c.lo())};
  out.reserve(points);
  const double step = (c.hi() - c.lo()) / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) {
    out.push_back(Value::real(i + 1 == points ? c.hi() : c.lo() + step * static_cast<double>(i)));
  }
  return out;
}

using ParamTuple = std::vector<double>;

/// Closed catalog of parameterized real functions.
enum class BuiltinForm : std::uint8_t { affine, scale, sin, exp, relu, constant };

inline std::string_view to_string(BuiltinForm f) {
  switch (f) {
    case BuiltinForm::affine: return "affine";
    case BuiltinForm::scale: return "scale";
    case BuiltinForm::sin: return "sin";
    case BuiltinForm::exp: return "exp";
    case BuiltinForm::relu: return "relu";
    case BuiltinForm::constant: return "constant";
  }
  return "?";
}

inline std::optional<BuiltinForm> builtin_from_string(std::string_view s) {
  for (auto f : {BuiltinForm::affine, BuiltinForm::scale, BuiltinForm::sin, BuiltinForm::exp,
                 BuiltinForm::relu, BuiltinForm::constant}) {
    if (to_string(f) == s) return f;
  }
  return std::nullopt;
}

/// Parameter count each builtin form expects in every tuple of its grid.
inline std::size_t builtin_arity(BuiltinForm f) {
  switch (f) {
    case BuiltinForm::affine: return 2;
    case BuiltinForm::scale:
    case BuiltinForm::constant: return 1;
    default: return 0;
  }
}

/// Output table of a finite-carrier primitive, parameter-major:
/// `outputs[p * m + x]` is the image of x under parameter p.
struct LookupTable {
  std::vector<std::int64_t> outputs;
  friend bool operator==(const LookupTable&, const LookupTable&) = default;
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool contains(double x) const noexcept { return x >= lo && x <= hi; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// One parameterized unary function with its parameter grid and restriction set.
struct Primitive {
  std::string id;
  std::variant<LookupTable, BuiltinForm> rule;
  std::vector<ParamTuple> params{ParamTuple{}};
  /// Finite carrier: outputs excluded from the image (sorted, unique).
  std::vector<std::int64_t> excluded;
  /// Real carrier: outputs outside this interval are excluded.
  std::optional<Interval> allowed;
  /// Real carrier: inputs outside this interval are outside the domain.
  std::optional<Interval> domain;

  std::size_t param_count() const noexcept { return params.size(); }
  bool is_table() const noexcept { return std::holds_alternative<LookupTable>(rule); }

  friend bool operator==(const Primitive&, const Primitive&) = default;
};

/// Convenience for finite primitives with a single empty parameter tuple.
inline Primitive table_primitive(std::string id, std::vector<std::int64_t> outputs,
                                 std::vector<std::int64_t> excluded = {}) {
  Primitive p;
  p.id = std::move(id);
  p.rule = LookupTable{std::move(outputs)};
  p.excluded = std::move(excluded);
  return p;
}

inline Primitive builtin_primitive(std::string id, BuiltinForm form,
                                   std::vector<ParamTuple> params = {ParamTuple{}}) {
  Primitive p;
  p.id = std::move(id);
  p.rule = form;
  p.params = std::move(params);
  return p;
}

namespace detail {

inline bool valid_id(std::string_view id) {
  if (id.empty()) return false;
  return std::all_of(id.begin(), id.end(), [](char ch) {
    return (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') || (ch >= '0' && ch <= '9') ||
           ch == '_' || ch == '-' || ch == '+';
  });
}

inline void validate_primitive(const Primitive& p, const Carrier& c, const std::string& path) {
  if (!valid_id(p.id)) throw ConfigError(path + ".id", "id must match [A-Za-z0-9_+-]+, got '" + p.id + "'");
  if (p.params.empty()) throw ConfigError(path + ".params", "parameter grid is empty");
  {
    std::set<ParamTuple> seen(p.params.begin(), p.params.end());
    if (seen.size() != p.params.size())
      throw ConfigError(path + ".params", "parameter grid contains duplicate tuples");
  }
  if (c.is_finite()) {
    const auto* table = std::get_if<LookupTable>(&p.rule);
    if (table == nullptr)
      throw ConfigError(path + ".rule", "finite carriers require lookup-table rules");
    const auto expected = static_cast<std::size_t>(c.size()) * p.params.size();
    if (table->outputs.size() != expected)
      throw ConfigError(path + ".rule.table",
                        "expected " + std::to_string(expected) + " entries (m * |params|), got " +
                            std::to_string(table->outputs.size()));
    for (std::size_t i = 0; i < table->outputs.size(); ++i) {
      const auto y = table->outputs[i];
      if (y < 0 || y >= c.size())
        throw ConfigError(path + ".rule.table[" + std::to_string(i) + "]",
                          "output " + std::to_string(y) + " is outside Z_" + std::to_string(c.size()));
    }
    for (auto e : p.excluded) {
      if (e < 0 || e >= c.size())
        throw ConfigError(path + ".restriction", "excluded value " + std::to_string(e) + " is outside the carrier");
    }
    if (!std::is_sorted(p.excluded.begin(), p.excluded.end()) ||
        std::adjacent_find(p.excluded.begin(), p.excluded.end()) != p.excluded.end())
      throw ConfigError(path + ".restriction", "excluded values must be sorted and unique");
    if (p.allowed || p.domain)
      throw ConfigError(path, "interval restrictions apply to real carriers only");
  } else {
    const auto* form = std::get_if<BuiltinForm>(&p.rule);
    if (form == nullptr) throw ConfigError(path + ".rule", "real carriers require builtin rules");
    const auto arity = builtin_arity(*form);
    for (std::size_t i = 0; i < p.params.size(); ++i) {
      if (p.params[i].size() != arity)
        throw ConfigError(path + ".params[" + std::to_string(i) + "]",
                          std::string(to_string(*form)) + " takes " + std::to_string(arity) + " parameter(s)");
      for (double v : p.params[i]) {
        if (!std::isfinite(v)) throw ConfigError(path + ".params[" + std::to_string(i) + "]", "non-finite parameter");
      }
    }
    if (!p.excluded.empty()) throw ConfigError(path + ".restriction", "exclusion sets apply to finite carriers only");
    for (const auto& iv : {p.allowed, p.domain}) {
      if (iv && !(iv->lo <= iv->hi)) throw ConfigError(path, "interval requires lo <= hi");
    }
  }
}

}  // namespace detail

/// Ordered, immutable set of primitives over one carrier. List order is the
/// canonical index order used by every enumeration and tie-break.
class SearchSpace {
public:
  SearchSpace(Carrier carrier, std::vector<Primitive> primitives)
      : carrier_(carrier), primitives_(std::move(primitives)) {
    if (primitives_.empty()) throw ConfigError("primitives", "a search space needs at least one primitive");
    for (std::size_t i = 0; i < primitives_.size(); ++i) {
      const std::string path = "primitives[" + std::to_string(i) + "]";
      detail::validate_primitive(primitives_[i], carrier_, path);
      if (!by_id_.emplace(primitives_[i].id, i).second)
        throw ConfigError(path + ".id", "duplicate primitive id '" + primitives_[i].id + "'");
    }
  }

  const Carrier& carrier() const noexcept { return carrier_; }
  std::span<const Primitive> primitives() const noexcept { return primitives_; }
  std::size_t size() const noexcept { return primitives_.size(); }
  const Primitive& at(std::size_t i) const { return primitives_.at(i); }

  std::optional<std::size_t> find(std::string_view id) const {
    auto it = by_id_.find(std::string(id));
    if (it == by_id_.end()) return std::nullopt;
    return it->second;
  }

  std::size_t index_of(std::string_view id) const {
    if (auto i = find(id)) return *i;
    throw ConfigError("sequence", "unknown primitive id '" + std::string(id) + "'");
  }

  /// Sum of parameter-grid sizes: the number of distinct (primitive, parameter) steps.
  std::size_t step_count() const noexcept {
    std::size_t total = 0;
    for (const auto& p : primitives_) total += p.params.size();
    return total;
  }

  /// Copy of this space with one more primitive appended.
  SearchSpace with(Primitive extra) const {
    auto prims = primitives_;
    prims.push_back(std::move(extra));
    return SearchSpace(carrier_, std::move(prims));
  }

  /// Copy of this space without primitive `i`.
  SearchSpace without(std::size_t i) const {
    auto prims = primitives_;
    prims.erase(prims.begin() + static_cast<std::ptrdiff_t>(i));
    return SearchSpace(carrier_, std::move(prims));
  }

private:
  Carrier carrier_;
  std::vector<Primitive> primitives_;
  std::unordered_map<std::string, std::size_t> by_id_;
};

/// One composition step: primitive index in the space, parameter index in its grid.
struct Step {
  std::size_t primitive = 0;
  std::size_t param = 0;
  friend auto operator<=>(const Step&, const Step&) = default;
};

/// Ordered primitive indices, the unparameterized shape of a sequence.
struct SequenceSkeleton {
  std::vector<std::size_t> step_ids;
  std::size_t length() const noexcept { return step_ids.size(); }
  friend bool operator==(const SequenceSkeleton&, const SequenceSkeleton&) = default;
};

/// A composition sequence with bound parameters; steps apply leftmost first.
struct BoundSequence {
  std::vector<Step> steps;

  std::size_t length() const noexcept { return steps.size(); }

  SequenceSkeleton skeleton() const {
    SequenceSkeleton s;
    s.step_ids.reserve(steps.size());
    for (const auto& st : steps) s.step_ids.push_back(st.primitive);
    return s;
  }

  BoundSequence extended(Step next) const {
    BoundSequence out = *this;
    out.steps.push_back(next);
    return out;
  }

  friend bool operator==(const BoundSequence&, const BoundSequence&) = default;
};

/// Canonical order: shorter first, then lexicographic by primitive index, then
/// odometer order of parameter indices (last step varies fastest).
inline bool canonical_less(const BoundSequence& a, const BoundSequence& b) noexcept {
  if (a.length() != b.length()) return a.length() < b.length();
  for (std::size_t i = 0; i < a.length(); ++i) {
    if (a.steps[i].primitive != b.steps[i].primitive) return a.steps[i].primitive < b.steps[i].primitive;
  }
  for (std::size_t i = 0; i < a.length(); ++i) {
    if (a.steps[i].param != b.steps[i].param) return a.steps[i].param < b.steps[i].param;
  }
  return false;
}

inline void validate(const SearchSpace& space, const BoundSequence& seq) {
  if (seq.steps.empty()) throw ConfigError("sequence", "a sequence needs at least one step");
  for (std::size_t i = 0; i < seq.steps.size(); ++i) {
    const auto& st = seq.steps[i];
    if (st.primitive >= space.size())
      throw ConfigError("sequence[" + std::to_string(i) + "]", "primitive index out of range");
    if (st.param >= space.at(st.primitive).param_count())
      throw ConfigError("sequence[" + std::to_string(i) + "]",
                        "parameter index " + std::to_string(st.param) + " out of range for '" +
                            space.at(st.primitive).id + "'");
  }
}

inline void validate(const SearchSpace& space, const SequenceSkeleton& skel) {
  if (skel.step_ids.empty()) throw ConfigError("skeleton", "a skeleton needs at least one step");
  for (std::size_t i = 0; i < skel.step_ids.size(); ++i) {
    if (skel.step_ids[i] >= space.size())
      throw ConfigError("skeleton[" + std::to_string(i) + "]", "primitive index out of range");
  }
}

/// A sampled target: distinct inputs σ with their (total) target values.
class SampleSet {
public:
  struct Point {
    Value x;
    Value y;
  };

  SampleSet(Carrier carrier, std::vector<Point> points) : carrier_(carrier), points_(std::move(points)) {
    if (points_.empty()) throw ConfigError("sigma", "sample set must be nonempty");
    std::vector<Value> xs;
    xs.reserve(points_.size());
    for (std::size_t i = 0; i < points_.size(); ++i) {
      const auto& p = points_[i];
      if (!contains(carrier_, p.x) || !contains(carrier_, p.y))
        throw ConfigError("points[" + std::to_string(i) + "]", "sample values must be defined carrier values");
      xs.push_back(p.x);
    }
    std::sort(xs.begin(), xs.end());
    if (std::adjacent_find(xs.begin(), xs.end()) != xs.end())
      throw ConfigError("sigma", "sample inputs must be distinct");
  }

  const Carrier& carrier() const noexcept { return carrier_; }
  std::span<const Point> points() const noexcept { return points_; }
  std::size_t size() const noexcept { return points_.size(); }

  /// The sub-sample at the given positions, in the given order.
  SampleSet subset(std::span<const std::size_t> positions) const {
    std::vector<Point> pts;
    pts.reserve(positions.size());
    for (auto i : positions) pts.push_back(points_.at(i));
    return SampleSet(carrier_, std::move(pts));
  }

private:
  Carrier carrier_;
  std::vector<Point> points_;
};

/// Pointwise distance between a candidate's output and the target value.
struct Metric {
  enum class Kind : std::uint8_t { abs_diff, squared_diff, zero_one };
  /// What an undefined candidate output costs: the target's magnitude under the
  /// metric (default), or the target value itself, sign included.
  enum class Fallback : std::uint8_t { magnitude, signed_target };

  Kind kind = Kind::abs_diff;
  Fallback fallback = Fallback::magnitude;

  static constexpr Metric abs() { return {Kind::abs_diff, Fallback::magnitude}; }
  static constexpr Metric squared() { return {Kind::squared_diff, Fallback::magnitude}; }
  static constexpr Metric zero_one() { return {Kind::zero_one, Fallback::magnitude}; }

  friend bool operator==(const Metric&, const Metric&) = default;
};

inline std::string_view to_string(Metric::Kind k) {
  switch (k) {
    case Metric::Kind::abs_diff: return "abs";
    case Metric::Kind::squared_diff: return "sq";
    case Metric::Kind::zero_one: return "01";
  }
  return "?";
}

}  // namespace fa
