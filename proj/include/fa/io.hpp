#pragma once

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>

#include <json.hpp>

#include "fa/catalog.hpp"
#include "fa/eval.hpp"

namespace fa {

using json = nlohmann::json;

inline constexpr int kFormatVersion = 1;

namespace detail {

inline const json& require(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) throw ConfigError(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw ConfigError(path.empty() ? key : path + "." + key, "missing required key");
  return *it;
}

inline std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

inline double require_number(const json& j, const std::string& path) {
  if (!j.is_number()) throw ConfigError(path, "expected a number");
  return j.get<double>();
}

inline std::int64_t require_integer(const json& j, const std::string& path) {
  if (!j.is_number_integer()) throw ConfigError(path, "expected an integer");
  return j.get<std::int64_t>();
}

inline void check_version(const json& doc) {
  const auto& v = require(doc, "format_version", "");
  if (!v.is_number_integer() || v.get<int>() != kFormatVersion)
    throw ConfigError("format_version", "unsupported format version, expected " + std::to_string(kFormatVersion));
}

inline Interval parse_interval(const json& j, const std::string& path) {
  return {require_number(require(j, "lo", path), join(path, "lo")),
          require_number(require(j, "hi", path), join(path, "hi"))};
}

inline json interval_json(const Interval& iv) { return json{{"lo", iv.lo}, {"hi", iv.hi}}; }

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path.string(), "cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline json parse_document(std::string_view text, const std::string& origin) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(origin, std::string("malformed JSON: ") + e.what());
  }
}

}  // namespace detail

inline Carrier parse_carrier(const json& j, const std::string& path = "carrier") {
  const auto& kind = detail::require(j, "kind", path);
  if (kind == "finite") {
    return Carrier::finite(detail::require_integer(detail::require(j, "m", path), path + ".m"));
  }
  if (kind == "real") {
    return Carrier::real(detail::require_number(detail::require(j, "lo", path), path + ".lo"),
                         detail::require_number(detail::require(j, "hi", path), path + ".hi"));
  }
  throw ConfigError(path + ".kind", "expected \"finite\" or \"real\"");
}

inline json carrier_json(const Carrier& c) {
  if (c.is_finite()) return json{{"kind", "finite"}, {"m", c.size()}};
  return json{{"kind", "real"}, {"lo", c.lo()}, {"hi", c.hi()}};
}

inline Value parse_value(const json& j, const Carrier& c, const std::string& path) {
  Value v = c.is_finite() ? Value::element(detail::require_integer(j, path))
                          : Value::real(detail::require_number(j, path));
  if (!contains(c, v)) throw ConfigError(path, "value is not in the carrier");
  return v;
}

inline json value_json(const Value& v) {
  if (v.is_element()) return v.index();
  if (v.is_real()) return v.number();
  return nullptr;
}

/// Builds a validated space from a parsed space document.
inline SearchSpace load_space(const json& doc) {
  detail::check_version(doc);
  const Carrier carrier = parse_carrier(detail::require(doc, "carrier", ""));
  const auto& prims = detail::require(doc, "primitives", "");
  if (!prims.is_array()) throw ConfigError("primitives", "expected a list");

  std::vector<Primitive> out;
  for (std::size_t i = 0; i < prims.size(); ++i) {
    const std::string path = "primitives[" + std::to_string(i) + "]";
    const auto& pj = prims[i];
    Primitive p;
    const auto& id = detail::require(pj, "id", path);
    if (!id.is_string()) throw ConfigError(path + ".id", "expected a string");
    p.id = id.get<std::string>();

    if (auto it = pj.find("params"); it != pj.end() && !it->is_null()) {
      if (!it->is_array()) throw ConfigError(path + ".params", "expected a list of tuples");
      p.params.clear();
      for (std::size_t t = 0; t < it->size(); ++t) {
        const auto& tj = (*it)[t];
        const std::string tpath = path + ".params[" + std::to_string(t) + "]";
        if (!tj.is_array()) throw ConfigError(tpath, "expected a tuple (list of numbers)");
        ParamTuple tuple;
        for (std::size_t e = 0; e < tj.size(); ++e)
          tuple.push_back(detail::require_number(tj[e], tpath + "[" + std::to_string(e) + "]"));
        p.params.push_back(std::move(tuple));
      }
    }

    const auto& rule = detail::require(pj, "rule", path);
    if (rule.is_object() && rule.contains("table")) {
      const auto& tj = rule["table"];
      if (!tj.is_array()) throw ConfigError(path + ".rule.table", "expected a list");
      LookupTable table;
      for (std::size_t e = 0; e < tj.size(); ++e)
        table.outputs.push_back(detail::require_integer(tj[e], path + ".rule.table[" + std::to_string(e) + "]"));
      p.rule = std::move(table);
    } else if (rule.is_object() && rule.contains("builtin")) {
      const auto& bj = rule["builtin"];
      auto form = bj.is_string() ? builtin_from_string(bj.get<std::string>()) : std::nullopt;
      if (!form) throw ConfigError(path + ".rule.builtin", "unknown builtin form");
      p.rule = *form;
    } else {
      throw ConfigError(path + ".rule", "expected {\"table\": [...]} or {\"builtin\": NAME}");
    }

    if (auto it = pj.find("restriction"); it != pj.end() && !it->is_null()) {
      if (carrier.is_finite()) {
        if (!it->is_array()) throw ConfigError(path + ".restriction", "expected a list of excluded outputs");
        for (std::size_t e = 0; e < it->size(); ++e)
          p.excluded.push_back(
              detail::require_integer((*it)[e], path + ".restriction[" + std::to_string(e) + "]"));
        std::sort(p.excluded.begin(), p.excluded.end());
        p.excluded.erase(std::unique(p.excluded.begin(), p.excluded.end()), p.excluded.end());
      } else {
        p.allowed = detail::parse_interval(*it, path + ".restriction");
      }
    }
    if (auto it = pj.find("domain"); it != pj.end() && !it->is_null()) {
      p.domain = detail::parse_interval(*it, path + ".domain");
    }
    out.push_back(std::move(p));
  }
  return SearchSpace(carrier, std::move(out));
}

inline SearchSpace parse_space(std::string_view text) {
  return load_space(detail::parse_document(text, "space"));
}

inline json space_json(const SearchSpace& space) {
  json prims = json::array();
  for (const auto& p : space.primitives()) {
    json pj;
    pj["id"] = p.id;
    if (const auto* t = std::get_if<LookupTable>(&p.rule)) {
      pj["rule"] = json{{"table", t->outputs}};
    } else {
      pj["rule"] = json{{"builtin", std::string(to_string(std::get<BuiltinForm>(p.rule)))}};
    }
    pj["params"] = p.params;
    if (!p.excluded.empty()) pj["restriction"] = p.excluded;
    else if (p.allowed) pj["restriction"] = detail::interval_json(*p.allowed);
    else pj["restriction"] = nullptr;
    if (p.domain) pj["domain"] = detail::interval_json(*p.domain);
    prims.push_back(std::move(pj));
  }
  return json{{"format_version", kFormatVersion}, {"carrier", carrier_json(space.carrier())}, {"primitives", prims}};
}

/// FNV-1a over the canonical JSON dump; identifies a space's content.
inline std::uint64_t space_hash(const SearchSpace& space) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : space_json(space).dump()) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// Loads `catalog:NAME` or a JSON space file.
inline SearchSpace resolve_space(std::string_view ref) {
  constexpr std::string_view prefix = "catalog:";
  if (ref.starts_with(prefix)) return elementary_catalog(ref.substr(prefix.size()));
  const std::filesystem::path path(ref);
  try {
    return load_space(detail::parse_document(detail::read_file(path), path.string()));
  } catch (const ConfigError& e) {
    if (e.where().starts_with(path.string())) throw;
    throw ConfigError(path.string() + ": " + e.where(), e.message());
  }
}

inline std::string space_label(std::string_view ref) {
  constexpr std::string_view prefix = "catalog:";
  if (ref.starts_with(prefix)) return std::string(ref.substr(prefix.size()));
  return std::filesystem::path(ref).stem().string();
}

// ---------------------------------------------------------------------------
// Sequence rendering: id[param]·id[param]·...  ("," is accepted as separator,
// and "[0]" may be omitted when parsing).

inline constexpr std::string_view kStepSeparator = "\xC2\xB7";

inline std::string render(const SearchSpace& space, const BoundSequence& seq) {
  std::string out;
  for (std::size_t i = 0; i < seq.steps.size(); ++i) {
    if (i > 0) out += kStepSeparator;
    out += space.at(seq.steps[i].primitive).id;
    out += '[' + std::to_string(seq.steps[i].param) + ']';
  }
  return out;
}

inline std::string render(const SearchSpace& space, const SequenceSkeleton& skel) {
  std::string out;
  for (std::size_t i = 0; i < skel.step_ids.size(); ++i) {
    if (i > 0) out += kStepSeparator;
    out += space.at(skel.step_ids[i]).id;
  }
  return out;
}

namespace detail {

inline std::vector<std::string> split_steps(std::string_view text) {
  std::vector<std::string> tokens;
  std::string cur;
  for (std::size_t i = 0; i < text.size();) {
    if (text.substr(i).starts_with(kStepSeparator)) {
      tokens.push_back(cur);
      cur.clear();
      i += kStepSeparator.size();
    } else if (text[i] == ',') {
      tokens.push_back(cur);
      cur.clear();
      ++i;
    } else {
      if (text[i] != ' ') cur += text[i];
      ++i;
    }
  }
  tokens.push_back(cur);
  return tokens;
}

}  // namespace detail

inline BoundSequence parse_sequence(const SearchSpace& space, std::string_view text) {
  BoundSequence seq;
  for (const auto& tok : detail::split_steps(text)) {
    if (tok.empty()) throw ConfigError("sequence", "empty step in '" + std::string(text) + "'");
    std::string id = tok;
    std::size_t param = 0;
    if (auto open = tok.find('['); open != std::string::npos) {
      if (tok.back() != ']') throw ConfigError("sequence", "malformed step '" + tok + "'");
      id = tok.substr(0, open);
      const auto digits = std::string_view(tok).substr(open + 1, tok.size() - open - 2);
      auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), param);
      if (ec != std::errc() || ptr != digits.data() + digits.size() || digits.empty())
        throw ConfigError("sequence", "malformed parameter index in '" + tok + "'");
    }
    seq.steps.push_back({space.index_of(id), param});
  }
  validate(space, seq);
  return seq;
}

inline SequenceSkeleton parse_skeleton(const SearchSpace& space, std::string_view text) {
  SequenceSkeleton skel;
  for (const auto& tok : detail::split_steps(text)) {
    if (tok.empty()) throw ConfigError("skeleton", "empty step in '" + std::string(text) + "'");
    skel.step_ids.push_back(space.index_of(tok));
  }
  return skel;
}

// ---------------------------------------------------------------------------
// Targets.

struct Target {
  std::string label;
  SampleSet samples;
};

/// Value of a named builtin target at x, or nullopt when the name is unknown.
///   finite: identity, const-N, add-N (inc = add-1, dec = add-(m-1)), neg,
///           double, square, parity, threshold-N ([x >= N])
///   real:   identity, neg, square, abs, relu, sin, exp, step ([x >= 0]), const-C
inline std::optional<Value> builtin_target_value(std::string_view name, const Carrier& c, const Value& x) {
  auto suffix_int = [&](std::string_view pre) -> std::optional<std::int64_t> {
    if (!name.starts_with(pre)) return std::nullopt;
    std::int64_t v = 0;
    auto rest = name.substr(pre.size());
    auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), v);
    if (ec != std::errc() || ptr != rest.data() + rest.size()) return std::nullopt;
    return v;
  };
  if (c.is_finite()) {
    const auto m = c.size();
    const auto xi = x.index();
    auto mod = [m](std::int64_t v) { return ((v % m) + m) % m; };
    if (name == "identity") return x;
    if (name == "inc") return Value::element(mod(xi + 1));
    if (name == "dec") return Value::element(mod(xi - 1));
    if (name == "neg") return Value::element(mod(-xi));
    if (name == "double") return Value::element(mod(2 * xi));
    if (name == "square") return Value::element(mod(xi * xi));
    if (name == "parity") return Value::element(mod(xi % 2));
    if (auto k = suffix_int("add-")) return Value::element(mod(xi + *k));
    if (auto k = suffix_int("const-")) return Value::element(mod(*k));
    if (auto k = suffix_int("threshold-")) return Value::element(xi >= *k ? 1 : 0);
    return std::nullopt;
  }
  const double v = x.number();
  if (name == "identity") return Value::real(v);
  if (name == "neg") return Value::real(-v);
  if (name == "square") return Value::real(v * v);
  if (name == "abs") return Value::real(std::fabs(v));
  if (name == "relu") return Value::real(v > 0 ? v : 0.0);
  if (name == "sin") return Value::real(std::sin(v));
  if (name == "exp") return Value::real(std::exp(v));
  if (name == "step") return Value::real(v >= 0 ? 1.0 : 0.0);
  if (name.starts_with("const-")) {
    double cval = 0;
    auto rest = name.substr(6);
    auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), cval);
    if (ec == std::errc() && ptr == rest.data() + rest.size()) return Value::real(cval);
  }
  return std::nullopt;
}

namespace detail {

inline std::vector<Value> parse_sigma(const json& doc, const Carrier& c) {
  auto it = doc.find("sigma");
  if (it == doc.end() || it->is_null()) return carrier_grid(c);
  if (!it->is_array()) throw ConfigError("sigma", "expected a list of carrier values");
  std::vector<Value> xs;
  for (std::size_t i = 0; i < it->size(); ++i)
    xs.push_back(parse_value((*it)[i], c, "sigma[" + std::to_string(i) + "]"));
  return xs;
}

}  // namespace detail

/// Resolves a target document to a total sample set. Relative `space` paths
/// in sequence targets are taken from `base_dir`.
inline Target load_target(const json& doc, const std::filesystem::path& base_dir = {}, std::string label = "target") {
  detail::check_version(doc);
  const auto& source = detail::require(doc, "source", "");
  std::vector<SampleSet::Point> points;
  std::optional<Carrier> carrier;

  if (source == "builtin") {
    carrier = parse_carrier(detail::require(doc, "carrier", ""));
    const auto& nj = detail::require(doc, "name", "");
    if (!nj.is_string()) throw ConfigError("name", "expected a string");
    const auto name = nj.get<std::string>();
    for (const auto& x : detail::parse_sigma(doc, *carrier)) {
      auto y = builtin_target_value(name, *carrier, x);
      if (!y) throw ConfigError("name", "unknown builtin target '" + name + "'");
      if (!contains(*carrier, *y)) throw ConfigError("name", "target '" + name + "' leaves the carrier");
      points.push_back({x, *y});
    }
  } else if (source == "table") {
    carrier = parse_carrier(detail::require(doc, "carrier", ""));
    const auto& pts = detail::require(doc, "points", "");
    if (!pts.is_array()) throw ConfigError("points", "expected a list of [x, y] pairs");
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const std::string path = "points[" + std::to_string(i) + "]";
      if (!pts[i].is_array() || pts[i].size() != 2) throw ConfigError(path, "expected an [x, y] pair");
      points.push_back({parse_value(pts[i][0], *carrier, path + "[0]"), parse_value(pts[i][1], *carrier, path + "[1]")});
    }
    if (doc.contains("sigma") && !doc["sigma"].is_null()) {
      // Restrict the table to the listed inputs, in the listed order.
      std::vector<SampleSet::Point> chosen;
      for (const auto& x : detail::parse_sigma(doc, *carrier)) {
        auto it = std::find_if(points.begin(), points.end(), [&](const auto& p) { return p.x == x; });
        if (it == points.end()) throw ConfigError("sigma", "sigma lists an input missing from the table");
        chosen.push_back(*it);
      }
      points = std::move(chosen);
    }
  } else if (source == "sequence") {
    const auto& sj = detail::require(doc, "space", "");
    if (!sj.is_string()) throw ConfigError("space", "expected a catalog name or path");
    std::string ref = sj.get<std::string>();
    if (!ref.starts_with("catalog:") && !base_dir.empty() && std::filesystem::path(ref).is_relative())
      ref = (base_dir / ref).string();
    const SearchSpace space = resolve_space(ref);
    const auto& qj = detail::require(doc, "sequence", "");
    if (!qj.is_string()) throw ConfigError("sequence", "expected a rendered sequence");
    const auto seq = parse_sequence(space, qj.get<std::string>());
    carrier = space.carrier();
    for (const auto& x : detail::parse_sigma(doc, *carrier)) {
      const auto y = eval_sequence(space, seq, x);
      if (!y.defined()) throw ConfigError("sequence", "target sequence is undefined on a sigma point");
      points.push_back({x, y});
    }
  } else {
    throw ConfigError("source", "expected \"builtin\", \"table\" or \"sequence\"");
  }
  return Target{std::move(label), SampleSet(*carrier, std::move(points))};
}

inline Target load_target_file(const std::filesystem::path& path) {
  try {
    const auto doc = detail::parse_document(detail::read_file(path), path.string());
    return load_target(doc, path.parent_path(), path.stem().string());
  } catch (const ConfigError& e) {
    if (e.where().starts_with(path.string())) throw;
    throw ConfigError(path.string() + ": " + e.where(), e.message());
  }
}

/// Sample set of a total function table on Z_K with σ = Z_K.
inline SampleSet table_samples(const Carrier& c, const std::vector<Value>& table) {
  std::vector<SampleSet::Point> pts;
  for (std::size_t i = 0; i < table.size(); ++i) pts.push_back({Value::element(static_cast<std::int64_t>(i)), table[i]});
  return SampleSet(c, std::move(pts));
}

}  // namespace fa
