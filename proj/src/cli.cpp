#include "clusterexp/cli.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>

#include "clusterexp/bounds.hpp"
#include "clusterexp/combinatorics.hpp"
#include "clusterexp/correlations.hpp"
#include "clusterexp/errors.hpp"
#include "clusterexp/forests.hpp"
#include "clusterexp/kernels.hpp"
#include "json.hpp"

namespace clusterexp::cli {

using nlohmann::json;

const std::vector<std::string>& commands() {
  static const std::vector<std::string> names = {"enumerate-forests", "count-forests", "verify-identities",
                                                 "eval-kernel",       "compute-ptcf",  "compute-bounds",
                                                 "check-decay",       "resum-check"};
  return names;
}

std::string describe(const std::string& command) {
  static const std::map<std::string, std::string> text = {
      {"enumerate-forests", "list admissible forests as JSON lines"},
      {"count-forests", "compare enumerated forest counts with the closed form"},
      {"verify-identities", "check the exact counting identities"},
      {"eval-kernel", "evaluate the kernels T and Q on one instance"},
      {"compute-ptcf", "partially truncated correlation by forest series and Moebius routes"},
      {"compute-bounds", "decay constants A for every sigma"},
      {"check-decay", "correlation against the decay bound at growing separations"},
      {"resum-check", "both sides of the split-function resummation"},
  };
  const auto it = text.find(command);
  return it == text.end() ? std::string() : it->second;
}

namespace {

// Config problems; the message starts with the offending field path.
class ConfigError : public DomainError {
 public:
  ConfigError(const std::string& path, const std::string& what) : DomainError(path + ": " + what) {}
};

// Reads one JSON object, rejecting unknown keys, and records every value it
// hands out (defaults included) in `resolved`.
class Block {
 public:
  Block(const json& source, std::string path, std::set<std::string> allowed)
      : path_(std::move(path)), resolved_(json::object()) {
    if (source.is_null()) {
      source_ = json::object();
    } else if (!source.is_object()) {
      throw ConfigError(path_, "expected an object");
    } else {
      source_ = source;
    }
    for (const auto& item : source_.items()) {
      if (!allowed.count(item.key())) throw ConfigError(field(item.key()), "unknown key");
    }
  }

  std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
  bool has(const std::string& key) const { return source_.contains(key) && !source_.at(key).is_null(); }
  const json& raw(const std::string& key) const { return source_.at(key); }

  double number(const std::string& key, double fallback) {
    const double v = has(key) ? as_number(key) : fallback;
    resolved_[key] = v;
    return v;
  }
  double required_number(const std::string& key) {
    if (!has(key)) throw ConfigError(field(key), "required");
    return number(key, 0.0);
  }
  std::optional<double> optional_number(const std::string& key) {
    if (!has(key)) {
      resolved_[key] = nullptr;
      return std::nullopt;
    }
    return number(key, 0.0);
  }
  std::int64_t integer(const std::string& key, std::int64_t fallback, std::int64_t low, std::int64_t high) {
    std::int64_t v = fallback;
    if (has(key)) {
      const json& j = source_.at(key);
      if (!j.is_number_integer()) throw ConfigError(field(key), "expected an integer");
      v = j.get<std::int64_t>();
    }
    if (v < low || v > high) {
      throw ConfigError(field(key), "must lie in [" + std::to_string(low) + ", " + std::to_string(high) + "]");
    }
    resolved_[key] = v;
    return v;
  }
  std::string string(const std::string& key, const std::string& fallback) {
    std::string v = fallback;
    if (has(key)) {
      if (!source_.at(key).is_string()) throw ConfigError(field(key), "expected a string");
      v = source_.at(key).get<std::string>();
    }
    resolved_[key] = v;
    return v;
  }
  void record(const std::string& key, json value) { resolved_[key] = std::move(value); }
  const json& resolved() const { return resolved_; }

 private:
  double as_number(const std::string& key) const {
    const json& j = source_.at(key);
    if (!j.is_number()) throw ConfigError(field(key), "expected a number");
    return j.get<double>();
  }

  std::string path_;
  json source_;
  json resolved_;
};

std::vector<int> int_list(const json& j, const std::string& path, int low, int high) {
  if (!j.is_array() || j.empty()) throw ConfigError(path, "expected a nonempty array of integers");
  std::vector<int> out;
  for (const auto& v : j) {
    if (!v.is_number_integer()) throw ConfigError(path, "expected integers");
    const auto x = v.get<std::int64_t>();
    if (x < low || x > high) {
      throw ConfigError(path, "entries must lie in [" + std::to_string(low) + ", " + std::to_string(high) + "]");
    }
    out.push_back(static_cast<int>(x));
  }
  return out;
}

std::vector<double> number_list(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) throw ConfigError(path, "expected a nonempty array of numbers");
  std::vector<double> out;
  for (const auto& v : j) {
    if (!v.is_number()) throw ConfigError(path, "expected numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

Point parse_point(const json& j, int d, const std::string& path) {
  if (j.is_number() && d == 1) return make_point(j.get<double>());
  const std::vector<double> c = number_list(j, path);
  if (static_cast<int>(c.size()) != d) throw ConfigError(path, "expected " + std::to_string(d) + " coordinates");
  Point p{};
  for (int k = 0; k < d; ++k) p[k] = c[k];
  return p;
}

PointConfiguration parse_configuration(const json& j, int d, const std::string& path) {
  if (!j.is_array()) throw ConfigError(path, "expected an array of points");
  std::vector<Point> pts;
  for (std::size_t i = 0; i < j.size(); ++i) pts.push_back(parse_point(j[i], d, path + "[" + std::to_string(i) + "]"));
  return PointConfiguration(std::move(pts), d);
}

std::vector<PointConfiguration> parse_clusters(const json& j, int d, const std::string& path) {
  if (!j.is_array() || j.empty()) throw ConfigError(path, "expected a nonempty array of clusters");
  std::vector<PointConfiguration> clusters;
  for (std::size_t i = 0; i < j.size(); ++i) {
    clusters.push_back(parse_configuration(j[i], d, path + "[" + std::to_string(i) + "]"));
  }
  return clusters;
}

ClusterFamily make_family(std::vector<PointConfiguration> clusters, const std::string& path) {
  try {
    return ClusterFamily(std::move(clusters));
  } catch (const DomainError& e) {
    throw ConfigError(path, e.what());
  }
}

ClusterFamily parse_family(const json& j, int d, const std::string& path) {
  return make_family(parse_clusters(j, d, path), path);
}

// ---- resolved run configuration ----

struct RunConfig {
  json resolved;
  std::optional<PairPotential> potential;
  int dimension = 1;
  double beta = 1.0;
  std::optional<double> stability;
  int stability_max_points = 10;
  std::optional<double> activity;
  std::optional<double> activity_fraction;
  std::optional<VolumeCutoff> box;
  int n_max = 3;
  int vertex_cap = kDefaultVertexCap;
  QuadratureSpec quad;
  std::size_t mc_samples = 200000;
  std::uint64_t seed = 12345;
  std::size_t max_nested_points = 4;
  int threads = 1;
  json instance;
};

PairPotential parse_potential(const json& j, json& resolved) {
  if (!j.is_object()) throw ConfigError("potential", "expected an object");
  if (!j.contains("kind") || !j.at("kind").is_string()) throw ConfigError("potential.kind", "required string");
  const std::string kind = j.at("kind").get<std::string>();
  std::set<std::string> allowed = {"kind", "dimension"};
  if (kind == "hard_core") {
    allowed.insert("radius");
  } else if (kind == "lennard_jones") {
    allowed.insert({"strength", "zero_radius"});
  } else if (kind == "hard_core_power_tail") {
    allowed.insert({"core_radius", "zero_radius", "tail_radius", "strength_inner", "strength_outer",
                    "inner_exponent", "tail_excess"});
  } else if (kind == "tabulated") {
    allowed.insert({"file", "core_radius"});
  } else {
    throw ConfigError("potential.kind",
                      "unknown kind '" + kind + "' (hard_core, lennard_jones, hard_core_power_tail, tabulated)");
  }
  Block b(j, "potential", allowed);
  b.string("kind", kind);
  const int d = static_cast<int>(b.integer("dimension", 1, 1, kMaxDimension));
  PotentialShape shape;
  if (kind == "hard_core") {
    shape = HardCore{b.number("radius", 1.0)};
  } else if (kind == "lennard_jones") {
    LennardJones lj;
    lj.strength = b.number("strength", lj.strength);
    lj.zero_radius = b.number("zero_radius", lj.zero_radius);
    shape = lj;
  } else if (kind == "hard_core_power_tail") {
    HardCorePowerTail p;
    p.core_radius = b.number("core_radius", p.core_radius);
    p.zero_radius = b.number("zero_radius", p.zero_radius);
    p.tail_radius = b.number("tail_radius", p.tail_radius);
    p.strength_inner = b.number("strength_inner", p.strength_inner);
    p.strength_outer = b.number("strength_outer", p.strength_outer);
    p.inner_exponent = b.number("inner_exponent", p.inner_exponent);
    p.tail_excess = b.number("tail_excess", p.tail_excess);
    shape = p;
  } else {
    if (!b.has("file")) throw ConfigError("potential.file", "required for kind 'tabulated'");
    const std::string file = b.string("file", "");
    shape = read_profile_csv(file, b.number("core_radius", 0.0));
  }
  resolved = b.resolved();
  try {
    return PairPotential(std::move(shape), d);
  } catch (const DomainError& e) {
    throw ConfigError("potential", e.what());
  }
}

RunConfig parse_config(const std::string& text, const Overrides& overrides) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("config", std::string("malformed JSON: ") + e.what());
  }
  Block top(root, "", {"potential", "model", "caps", "instance"});
  RunConfig c;
  json resolved = json::object();

  if (top.has("potential")) {
    json pot_resolved;
    c.potential = parse_potential(top.raw("potential"), pot_resolved);
    c.dimension = c.potential->dimension();
    resolved["potential"] = pot_resolved;
  } else {
    resolved["potential"] = nullptr;
  }

  Block model(top.has("model") ? top.raw("model") : json(),
              "model", {"beta", "activity", "activity_fraction", "stability", "stability_max_points", "box"});
  c.beta = overrides.beta ? *overrides.beta : model.number("beta", 1.0);
  model.record("beta", c.beta);
  if (!(c.beta > 0.0)) throw ConfigError("model.beta", "must be > 0");
  c.activity = overrides.activity ? overrides.activity : model.optional_number("activity");
  model.record("activity", c.activity ? json(*c.activity) : json(nullptr));
  c.activity_fraction = model.optional_number("activity_fraction");
  if (c.activity && c.activity_fraction) {
    throw ConfigError("model.activity_fraction", "give either activity or activity_fraction, not both");
  }
  if (c.activity && !(*c.activity > 0.0)) throw ConfigError("model.activity", "must be > 0");
  if (c.activity_fraction && !(*c.activity_fraction > 0.0)) throw ConfigError("model.activity_fraction", "must be > 0");
  c.stability = model.optional_number("stability");
  c.stability_max_points = static_cast<int>(model.integer("stability_max_points", 10, 1, 1000));
  if (model.has("box")) {
    Block box(model.raw("box"), "model.box", {"lower", "upper"});
    if (!box.has("lower") || !box.has("upper")) throw ConfigError("model.box", "needs lower and upper");
    const auto lo = number_list(box.raw("lower"), "model.box.lower");
    const auto hi = number_list(box.raw("upper"), "model.box.upper");
    if (static_cast<int>(lo.size()) != c.dimension || static_cast<int>(hi.size()) != c.dimension) {
      throw ConfigError("model.box", "bounds must have one entry per dimension");
    }
    std::array<double, kMaxDimension> l{}, h{};
    std::copy(lo.begin(), lo.end(), l.begin());
    std::copy(hi.begin(), hi.end(), h.begin());
    try {
      c.box = VolumeCutoff(c.dimension, l, h);
    } catch (const DomainError& e) {
      throw ConfigError("model.box", e.what());
    }
    model.record("box", json{{"lower", lo}, {"upper", hi}});
  } else {
    model.record("box", nullptr);
  }
  resolved["model"] = model.resolved();

  Block caps(top.has("caps") ? top.raw("caps") : json(), "caps",
             {"n_max", "vertex_cap", "rel_tol", "abs_tol", "max_intervals", "mc_samples", "seed",
              "max_nested_points", "threads"});
  c.n_max = overrides.n_max ? *overrides.n_max : static_cast<int>(caps.integer("n_max", 3, 0, 12));
  if (c.n_max < 0 || c.n_max > 12) throw ConfigError("caps.n_max", "must lie in [0, 12]");
  caps.record("n_max", c.n_max);
  c.vertex_cap = static_cast<int>(caps.integer("vertex_cap", kDefaultVertexCap, 1, 64));
  c.quad.rel_tol = caps.number("rel_tol", 1e-10);
  c.quad.abs_tol = caps.number("abs_tol", 1e-14);
  if (!(c.quad.rel_tol > 0.0) || !(c.quad.abs_tol > 0.0)) throw ConfigError("caps.rel_tol", "tolerances must be > 0");
  c.quad.max_intervals = static_cast<int>(caps.integer("max_intervals", 4000, 1, 10000000));
  c.mc_samples = static_cast<std::size_t>(caps.integer("mc_samples", 200000, 16, 1000000000));
  if (overrides.seed) {
    c.seed = *overrides.seed;
  } else if (caps.has("seed")) {
    const json& s = caps.raw("seed");
    if (!s.is_number_unsigned()) throw ConfigError("caps.seed", "expected a nonnegative integer");
    c.seed = s.get<std::uint64_t>();
  }
  caps.record("seed", c.seed);
  c.max_nested_points = static_cast<std::size_t>(caps.integer("max_nested_points", 4, 0, 8));
  c.threads = overrides.threads ? *overrides.threads : static_cast<int>(caps.integer("threads", 1, 1, 1024));
  if (c.threads < 1) throw ConfigError("threads", "must be >= 1");
  caps.record("threads", c.threads);
  resolved["caps"] = caps.resolved();

  c.instance = top.has("instance") ? top.raw("instance") : json::object();
  c.resolved = std::move(resolved);
  return c;
}

// ---- output ----

std::string real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

std::string quoted(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

std::string joined(const std::vector<int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& out) : out_(out) {}
  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << quoted(cells[i]);
    out_ << '\n';
  }

 private:
  std::ostream& out_;
};

void csv_header(std::ostream& out, const std::string& command, const json& resolved) {
  out << "# clusterexp " << kVersion << '\n';
  out << "# command " << command << '\n';
  out << "# config " << resolved.dump() << '\n';
}

// FNV-1a over the bytes; stable across platforms and builds.
std::string fnv1a_hex(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
  return buf;
}

// ---- models ----

GasModel gas_model(const RunConfig& c) {
  if (!c.potential) throw ConfigError("potential", "required by this command");
  SummaryOptions opts;
  opts.quad = c.quad;
  opts.stability = c.stability;
  opts.max_points = c.stability_max_points;
  return GasModel{*c.potential, compute_summary(*c.potential, c.beta, opts)};
}

double resolve_activity(const RunConfig& c, const GasModel& model) {
  if (c.activity) return *c.activity;
  if (c.activity_fraction) {
    return *c.activity_fraction *
           radius_r_beta(model.summary.beta, model.summary.stability, model.summary.mayer_integral);
  }
  throw ConfigError("model.activity", "required by this command (or give model.activity_fraction)");
}

SeriesSpec series_spec(const RunConfig& c, double z) {
  SeriesSpec s;
  s.activity = z;
  s.n_max = c.n_max;
  s.box = c.box;
  s.quad = c.quad;
  s.mc_samples = c.mc_samples;
  s.seed = c.seed;
  s.max_nested_points = c.max_nested_points;
  return s;
}

// ---- commands ----

struct Outcome {
  bool ok = true;
  json instance;  // resolved instance block
};

Outcome enumerate_forests_cmd(const RunConfig& c, std::ostream& out) {
  Block inst(c.instance, "instance", {"sizes", "externals"});
  if (!inst.has("sizes")) throw ConfigError("instance.sizes", "required");
  const std::vector<int> sizes = int_list(inst.raw("sizes"), "instance.sizes", 0, 64);
  inst.record("sizes", sizes);
  const int n = static_cast<int>(inst.integer("externals", 0, 0, 64));
  json header = c.resolved;
  header["instance"] = inst.resolved();
  out << json{{"clusterexp", kVersion}, {"command", "enumerate-forests"}, {"config", header}}.dump() << '\n';
  std::size_t index = 0;
  enumerate_forests(
      VertexRegistry(sizes, n),
      [&](const ForestGraph& f) {
        json edges = json::array();
        for (const auto& [a, b] : f.edges) edges.push_back({a, b});
        out << json{{"index", index++}, {"edges", edges}, {"roots", f.roots}}.dump() << '\n';
      },
      c.vertex_cap);
  return {true, inst.resolved()};
}

Outcome count_forests_cmd(const RunConfig& c, std::ostream& out) {
  Block inst(c.instance, "instance", {"cases", "max_clusters", "max_size", "max_externals"});
  std::vector<std::pair<std::vector<int>, int>> cases;
  if (inst.has("cases")) {
    const json& arr = inst.raw("cases");
    if (!arr.is_array() || arr.empty()) throw ConfigError("instance.cases", "expected a nonempty array");
    json rc = json::array();
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string path = "instance.cases[" + std::to_string(i) + "]";
      Block cb(arr[i], path, {"sizes", "externals"});
      if (!cb.has("sizes")) throw ConfigError(path + ".sizes", "required");
      const auto sizes = int_list(cb.raw("sizes"), path + ".sizes", 1, 64);
      cb.record("sizes", sizes);
      cases.emplace_back(sizes, static_cast<int>(cb.integer("externals", 0, 0, 64)));
      rc.push_back(cb.resolved());
    }
    inst.record("cases", rc);
  } else {
    const int mc = static_cast<int>(inst.integer("max_clusters", 2, 1, 8));
    const int ms = static_cast<int>(inst.integer("max_size", 2, 1, 8));
    const int mn = static_cast<int>(inst.integer("max_externals", 2, 0, 16));
    for (int m = 1; m <= mc; ++m) {
      std::vector<int> s(static_cast<std::size_t>(m), 1);
      for (bool more = true; more;) {
        for (int n = 0; n <= mn; ++n) cases.emplace_back(s, n);
        int i = m - 1;
        while (i >= 0 && s[i] == ms) s[i--] = 1;
        if (i < 0) more = false; else ++s[i];
      }
    }
  }
  json header = c.resolved;
  header["instance"] = inst.resolved();
  csv_header(out, "count-forests", header);
  CsvWriter csv(out);
  csv.row({"m", "sizes", "externals", "enumerated", "formula"});
  bool ok = true;
  for (const auto& [sizes, n] : cases) {
    const std::size_t count = count_forests(VertexRegistry(sizes, n), c.vertex_cap);
    const BigInt formula = forest_count_formula(sizes, n);
    ok = ok && BigInt(count) == formula;
    csv.row({std::to_string(sizes.size()), joined(sizes), std::to_string(n), std::to_string(count),
             formula.str()});
  }
  return {ok, inst.resolved()};
}

std::string rational_str(const Rational& r) {
  const auto num = boost::multiprecision::numerator(r);
  const auto den = boost::multiprecision::denominator(r);
  return den == 1 ? num.str() : num.str() + "/" + den.str();
}

Outcome verify_identities_cmd(const RunConfig& c, std::ostream& out) {
  Block inst(c.instance, "instance",
             {"cayley_max", "count_max_clusters", "count_max_size", "count_max_externals", "remarkable_max_n",
              "remarkable_max_l", "partition_max_clusters", "partition_max_size"});
  const int cayley_max = static_cast<int>(inst.integer("cayley_max", 6, 1, 8));
  const int cm = static_cast<int>(inst.integer("count_max_clusters", 3, 1, 5));
  const int cs = static_cast<int>(inst.integer("count_max_size", 3, 1, 5));
  const int cn = static_cast<int>(inst.integer("count_max_externals", 3, 0, 6));
  const int rn = static_cast<int>(inst.integer("remarkable_max_n", 6, 0, 10));
  const int rl = static_cast<int>(inst.integer("remarkable_max_l", 4, 1, 10));
  const int pm = static_cast<int>(inst.integer("partition_max_clusters", 5, 1, 8));
  const int ps = static_cast<int>(inst.integer("partition_max_size", 3, 1, 6));
  json header = c.resolved;
  header["instance"] = inst.resolved();
  csv_header(out, "verify-identities", header);
  CsvWriter csv(out);
  csv.row({"identity", "parameters", "lhs", "rhs", "ok"});
  bool all = true;
  auto emit = [&](const std::string& name, const std::string& params, const std::string& lhs, const std::string& rhs) {
    const bool ok = lhs == rhs;
    all = all && ok;
    csv.row({name, params, lhs, rhs, ok ? "true" : "false"});
  };
  for (int n = 1; n <= cayley_max; ++n) {
    std::size_t trees = 0;
    for_each_labeled_tree(n, [&](const auto&) { ++trees; });
    emit("cayley", "n=" + std::to_string(n), std::to_string(trees), cayley_count(n).str());
  }
  auto each_sizes = [](int max_m, int max_l, const std::function<void(const std::vector<int>&)>& visit) {
    for (int m = 1; m <= max_m; ++m) {
      std::vector<int> s(static_cast<std::size_t>(m), 1);
      for (bool more = true; more;) {
        visit(s);
        int i = m - 1;
        while (i >= 0 && s[i] == max_l) s[i--] = 1;
        if (i < 0) more = false; else ++s[i];
      }
    }
  };
  each_sizes(cm, cs, [&](const std::vector<int>& s) {
    for (int n = 0; n <= cn; ++n) {
      emit("count_recursion", "sizes=" + joined(s) + ";n=" + std::to_string(n), forest_count_recursion(s, n).str(),
           forest_count_formula(s, n).str());
    }
  });
  for (int n = 0; n <= rn; ++n) {
    for (int l = 1; l <= rl; ++l) {
      const auto [lhs, rhs] = remarkable_identity_check(n, l);
      emit("remarkable", "n=" + std::to_string(n) + ";l=" + std::to_string(l), lhs.str(), rhs.str());
      if (l + n >= 2) {
        const auto [a, b] = auxiliary_sum_check(n, l);
        emit("auxiliary_sum", "n=" + std::to_string(n) + ";l=" + std::to_string(l), rational_str(a),
             rational_str(b));
      }
    }
  }
  each_sizes(pm, ps, [&](const std::vector<int>& s) {
    for (int sigma = 2; sigma <= static_cast<int>(s.size()); ++sigma) {
      const auto [lhs, rhs] = partition_identity_check(s, sigma);
      emit("partition", "sizes=" + joined(s) + ";sigma=" + std::to_string(sigma), lhs.str(), rhs.str());
    }
  });
  return {all, inst.resolved()};
}

Outcome eval_kernel_cmd(const RunConfig& c, std::ostream& out) {
  Block inst(c.instance, "instance", {"clusters", "gamma"});
  const GasModel model = gas_model(c);
  const double z = resolve_activity(c, model);
  if (!inst.has("clusters")) throw ConfigError("instance.clusters", "required");
  const ClusterFamily family = parse_family(inst.raw("clusters"), c.dimension, "instance.clusters");
  const PointConfiguration gamma = inst.has("gamma") ? parse_configuration(inst.raw("gamma"), c.dimension,
                                                                           "instance.gamma")
                                                     : PointConfiguration({}, c.dimension);
  inst.record("clusters", inst.raw("clusters"));
  inst.record("gamma", inst.has("gamma") ? inst.raw("gamma") : json::array());
  json header = c.resolved;
  header["model"]["activity"] = z;
  header["instance"] = inst.resolved();
  csv_header(out, "eval-kernel", header);
  KernelOptions opts;
  opts.vertex_cap = c.vertex_cap;
  const KernelInstance ki{family, gamma};
  const InteractionModel im{&model.potential, model.summary.beta, z, model.summary.stability};
  const KernelValue t = kernel_T(ki, im, opts);
  const double h = z * std::exp(2.0 * model.summary.beta * model.summary.stability);
  const RadialWeight weight = [&](double r) { return mayer_magnitude(model.potential, model.summary.beta, r); };
  const KernelValue q = kernel_Q(ki, h, weight, opts);
  const bool dominated = std::abs(t.value) <= q.value * (1.0 + 1e-12);
  CsvWriter csv(out);
  csv.row({"T", "Q", "T_states", "Q_states", "dominated"});
  csv.row({real(t.value), real(q.value), std::to_string(t.states), std::to_string(q.states),
           dominated ? "true" : "false"});
  return {true, inst.resolved()};
}

Route parse_route(const std::string& s, const std::string& path) {
  for (Route r : {Route::Direct, Route::UrsellSeries, Route::ForestSeries, Route::Mobius}) {
    if (to_string(r) == s) return r;
  }
  throw ConfigError(path, "unknown route '" + s + "' (direct, ursell_series, forest_series, mobius)");
}

Outcome compute_ptcf_cmd(const RunConfig& c, std::ostream& out) {
  Block inst(c.instance, "instance", {"clusters", "routes"});
  const GasModel model = gas_model(c);
  const double z = resolve_activity(c, model);
  if (!inst.has("clusters")) throw ConfigError("instance.clusters", "required");
  const ClusterFamily family = parse_family(inst.raw("clusters"), c.dimension, "instance.clusters");
  inst.record("clusters", inst.raw("clusters"));
  std::vector<std::string> route_names = {"forest_series", "mobius"};
  if (inst.has("routes")) {
    const json& r = inst.raw("routes");
    if (!r.is_array() || r.empty()) throw ConfigError("instance.routes", "expected a nonempty array of strings");
    route_names.clear();
    for (const auto& v : r) {
      if (!v.is_string()) throw ConfigError("instance.routes", "expected strings");
      route_names.push_back(v.get<std::string>());
    }
  }
  std::vector<Route> routes;
  for (const auto& name : route_names) routes.push_back(parse_route(name, "instance.routes"));
  inst.record("routes", route_names);
  json header = c.resolved;
  header["model"]["activity"] = z;
  header["instance"] = inst.resolved();
  csv_header(out, "compute-ptcf", header);
  const SeriesSpec spec = series_spec(c, z);
  CsvWriter csv(out);
  csv.row({"route", "value", "truncation_error", "quadrature_error", "tail_rigorous", "power", "coefficients"});
  for (Route route : routes) {
    CorrelationResult r;
    switch (route) {
      case Route::ForestSeries: r = ptcf_forest_series(family, model, spec); break;
      case Route::Mobius: r = ptcf_mobius_series(family, model, spec); break;
      case Route::Direct:
      case Route::UrsellSeries: {
        if (family.count() != 1) {
          throw ConfigError("instance.routes", to_string(route) + " needs exactly one cluster");
        }
        r = route == Route::Direct ? rho_direct(family[0], model, spec) : tcf_series(family[0], model, spec);
        break;
      }
    }
    std::string coeffs;
    for (int k = 0; k <= r.series.order(); ++k) coeffs += (k ? ";" : "") + real(r.series[k]);
    csv.row({to_string(route), real(r.value), real(r.truncation_error), real(r.quadrature_error),
             r.tail_rigorous ? "true" : "false", std::to_string(r.power), coeffs});
  }
  return {true, inst.resolved()};
}

double decay_constant_for(Block& inst, const GasModel& model, double alpha) {
  if (const auto given = inst.optional_number("decay_constant")) {
    if (!(*given > 0.0)) throw ConfigError("instance.decay_constant", "must be > 0");
    return *given;
  }
  const double cst = polynomial_decay_constant(model.potential, model.summary.beta, alpha);
  inst.record("decay_constant", cst);
  return cst;
}

Outcome compute_bounds_cmd(const RunConfig& c, std::ostream& out) {
  Block inst(c.instance, "instance", {"sizes", "alpha", "decay_constant"});
  const GasModel model = gas_model(c);
  const double z = resolve_activity(c, model);
  if (!inst.has("sizes")) throw ConfigError("instance.sizes", "required");
  BoundParams p;
  p.sizes = int_list(inst.raw("sizes"), "instance.sizes", 1, 64);
  if (p.sizes.size() < 2) throw ConfigError("instance.sizes", "needs at least two clusters");
  inst.record("sizes", p.sizes);
  p.alpha = inst.number("alpha", c.dimension + 1.0);
  if (!(p.alpha > c.dimension)) throw ConfigError("instance.alpha", "must exceed the dimension");
  p.C = decay_constant_for(inst, model, p.alpha);
  p.h = z * std::exp(2.0 * model.summary.beta * model.summary.stability);
  p.nu1 = model.summary.mayer_integral;
  p.nubar1 = nubar_integral(p.alpha, c.dimension).value;
  json header = c.resolved;
  header["model"]["activity"] = z;
  header["instance"] = inst.resolved();
  csv_header(out, "compute-bounds", header);
  const json params = {{"h", p.h}, {"nu1", p.nu1}, {"nubar1", p.nubar1}, {"C", p.C}, {"alpha", p.alpha},
                       {"sizes", p.sizes}};
  const std::string hash = fnv1a_hex(params.dump());
  const double margin = decay_condition_margin(p);
  CsvWriter csv(out);
  csv.row({"m", "sigma", "params_hash", "A_value", "condition_margin"});
  for (int sigma = 1; sigma <= static_cast<int>(p.sizes.size()); ++sigma) {
    csv.row({std::to_string(p.sizes.size()), std::to_string(sigma), hash, real(decay_constant_A(p, sigma)),
             real(margin)});
  }
  return {true, inst.resolved()};
}

Outcome check_decay_cmd(const RunConfig& c, std::ostream& out) {
  Block inst(c.instance, "instance", {"clusters", "separations", "alpha", "decay_constant"});
  const GasModel model = gas_model(c);
  const double z = resolve_activity(c, model);
  if (!inst.has("clusters")) throw ConfigError("instance.clusters", "required");
  // Disjointness is checked after shifting, so base clusters may coincide.
  const std::vector<PointConfiguration> base = parse_clusters(inst.raw("clusters"), c.dimension, "instance.clusters");
  if (base.size() < 2) throw ConfigError("instance.clusters", "needs at least two clusters");
  inst.record("clusters", inst.raw("clusters"));
  std::vector<double> separations = {5.0, 10.0, 20.0};
  if (inst.has("separations")) separations = number_list(inst.raw("separations"), "instance.separations");
  inst.record("separations", separations);
  const double alpha = inst.number("alpha", c.dimension + 1.0);
  if (!(alpha > c.dimension)) throw ConfigError("instance.alpha", "must exceed the dimension");
  const double cst = decay_constant_for(inst, model, alpha);
  json header = c.resolved;
  header["model"]["activity"] = z;
  header["instance"] = inst.resolved();
  csv_header(out, "check-decay", header);
  const SeriesSpec spec = series_spec(c, z);
  CsvWriter csv(out);
  csv.row({"separation", "abs_ptcf", "bound", "ok"});
  bool all = true;
  for (double s : separations) {
    // Cluster i moves by i·s along the first axis.
    std::vector<PointConfiguration> shifted;
    for (std::size_t i = 0; i < base.size(); ++i) {
      std::vector<Point> pts = base[i].points();
      for (Point& pt : pts) pt[0] += static_cast<double>(i) * s;
      shifted.emplace_back(std::move(pts), c.dimension);
    }
    const ClusterFamily family = make_family(std::move(shifted), "instance.clusters");
    const DecayReport r = decay_theorem_check(family, model, spec, cst, alpha);
    if (!r.condition_ok) {
      throw ConfigError("model.activity", "violates the decay condition (margin " + real(r.condition_margin) + ")");
    }
    all = all && r.ok;
    csv.row({real(s), real(std::abs(r.ptcf)), real(r.bound), r.ok ? "true" : "false"});
  }
  return {all, inst.resolved()};
}

Outcome resum_check_cmd(const RunConfig& c, std::ostream& out) {
  Block inst(c.instance, "instance", {"gaussian_width"});
  const GasModel model = gas_model(c);
  const double z = resolve_activity(c, model);
  const double width = inst.number("gaussian_width", 1.0);
  if (!(width > 0.0)) throw ConfigError("instance.gaussian_width", "must be > 0");
  json header = c.resolved;
  header["model"]["activity"] = z;
  header["instance"] = inst.resolved();
  csv_header(out, "resum-check", header);
  const SeriesSpec spec = series_spec(c, z);
  const PointIntegrationSpec integration = integration_spec(spec, model.potential);
  const double beta = model.summary.beta;
  // F(γ) = Π exp(−|x|²/w²) and H(η, γ) = e^{−βW(η; γ)}.
  const ConfigurationFunction f = [width](std::span<const Point> g) {
    double v = 1.0;
    for (const Point& x : g) v *= std::exp(-(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]) / (width * width));
    return v;
  };
  const SplitFunction h = [&](std::span<const Point> eta, std::span<const Point> gamma) {
    return boltzmann_factor(beta, energy_W(eta, gamma, model.potential));
  };
  const ResummationSides r = resummation_check(f, h, spec, integration);
  const bool ok = std::abs(r.lhs - r.rhs) <= r.error + 1e-12 * std::max(std::abs(r.lhs), std::abs(r.rhs));
  CsvWriter csv(out);
  csv.row({"n_max", "lhs", "rhs", "error", "ok"});
  csv.row({std::to_string(c.n_max), real(r.lhs), real(r.rhs), real(r.error), ok ? "true" : "false"});
  return {ok, inst.resolved()};
}

}  // namespace

int run(const std::string& command, const std::string& config_text, std::ostream& out, std::ostream& err,
        const Overrides& overrides) {
  static const std::map<std::string, Outcome (*)(const RunConfig&, std::ostream&)> table = {
      {"enumerate-forests", enumerate_forests_cmd}, {"count-forests", count_forests_cmd},
      {"verify-identities", verify_identities_cmd}, {"eval-kernel", eval_kernel_cmd},
      {"compute-ptcf", compute_ptcf_cmd},           {"compute-bounds", compute_bounds_cmd},
      {"check-decay", check_decay_cmd},             {"resum-check", resum_check_cmd},
  };
  const auto it = table.find(command);
  if (it == table.end()) {
    err << "error: unknown command '" << command << "'\n";
    return kValidationError;
  }
  try {
    const RunConfig config = parse_config(config_text, overrides);
    std::ostringstream buffer;
    const Outcome outcome = it->second(config, buffer);
    out << buffer.str();
    out.flush();
    if (!outcome.ok) {
      err << "check failed: " << command << " reported rows that do not hold\n";
      return kCheckFailed;
    }
    return kOk;
  } catch (const ResourceError& e) {
    err << "resource cap: " << e.what() << '\n';
    return kResourceError;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kValidationError;
  } catch (const json::exception& e) {
    err << "error: config: " << e.what() << '\n';
    return kValidationError;
  } catch (const std::exception& e) {
    err << "numeric failure: " << e.what() << '\n';
    return kNumericFailure;
  }
}

int run_files(const std::string& command, const std::string& config_path, const std::string& output_path,
              std::ostream& err, const Overrides& overrides) {
  std::ifstream in(config_path);
  if (!in) {
    err << "error: config: cannot open '" << config_path << "'\n";
    return kValidationError;
  }
  std::stringstream text;
  text << in.rdbuf();
  std::ostringstream result;
  const int code = run(command, text.str(), result, err, overrides);
  if (code != kOk && code != kCheckFailed) return code;
  if (output_path == "-") {
    std::cout << result.str();
    std::cout.flush();
    return code;
  }
  std::ofstream file(output_path, std::ios::binary);
  if (!file) {
    err << "error: output: cannot open '" << output_path << "'\n";
    return kValidationError;
  }
  file << result.str();
  return code;
}

}  // namespace clusterexp::cli
