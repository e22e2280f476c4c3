#include "retina/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "retina/errors.hpp"

namespace retina {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

[[noreturn]] void field_error(const std::string& field, const std::string& what) {
  throw ConfigError("config field '" + field + "': " + what);
}

void only_keys(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) field_error(where.empty() ? "<root>" : where, "expected an object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, _] : obj.items()) {
    if (!ok.count(key)) field_error(where.empty() ? key : where + "." + key, "unknown key");
  }
}

std::string join(const std::string& where, const char* key) { return where.empty() ? key : where + "." + key; }

template <typename T>
void read(const json& obj, const std::string& where, const char* key, T& out) {
  const auto it = obj.find(key);
  if (it == obj.end()) return;
  try {
    if constexpr (std::is_same_v<T, double>) {
      if (!it->is_number()) throw std::invalid_argument("");
    } else if constexpr (std::is_integral_v<T>) {
      if (!it->is_number_integer()) throw std::invalid_argument("");
      if constexpr (std::is_unsigned_v<T>) {
        if (it->is_number_integer() && !it->is_number_unsigned()) throw std::invalid_argument("");
      }
    } else {
      if (!it->is_string()) throw std::invalid_argument("");
    }
    out = it->get<T>();
  } catch (const std::exception&) {
    field_error(join(where, key), std::is_same_v<T, std::string>
                                      ? "expected a string"
                                      : (std::is_integral_v<T> ? (std::is_unsigned_v<T> ? "expected a non-negative integer"
                                                                                         : "expected an integer")
                                                               : "expected a number"));
  }
}

Interval read_interval(const json& obj, const std::string& where, const char* key) {
  const auto it = obj.find(key);
  const std::string f = join(where, key);
  if (it == obj.end()) field_error(f, "missing");
  if (!it->is_array() || it->size() != 2 || !(*it)[0].is_number() || !(*it)[1].is_number()) {
    field_error(f, "expected [lo, hi]");
  }
  return {(*it)[0].get<double>(), (*it)[1].get<double>()};
}

AlphaDistribution read_distribution(const json& obj, const std::string& where) {
  if (!obj.is_object()) field_error(where, "expected an object");
  std::string kind;
  read(obj, where, "kind", kind);
  AlphaDistribution dist;
  if (kind == "point_pair") {
    only_keys(obj, where, {"kind", "low", "high"});
    PointPair pp{-1.0, -1.0};
    if (!obj.contains("low") || !obj.contains("high")) field_error(where, "point_pair needs 'low' and 'high'");
    read(obj, where, "low", pp.low);
    read(obj, where, "high", pp.high);
    dist = pp;
  } else if (kind == "uniform_bands") {
    only_keys(obj, where, {"kind", "low", "high"});
    dist = UniformBands{read_interval(obj, where, "low"), read_interval(obj, where, "high")};
  } else {
    field_error(join(where, "kind"), "expected 'point_pair' or 'uniform_bands'");
  }
  try {
    validate(dist);
  } catch (const ConfigError& e) {
    field_error(where, e.what());
  }
  return dist;
}

ordered_json distribution_json(const AlphaDistribution& dist) {
  if (const auto* pp = std::get_if<PointPair>(&dist)) {
    return {{"kind", "point_pair"}, {"low", pp->low}, {"high", pp->high}};
  }
  const auto& ub = std::get<UniformBands>(dist);
  return {{"kind", "uniform_bands"}, {"low", {ub.low.lo, ub.low.hi}}, {"high", {ub.high.lo, ub.high.hi}}};
}

}  // namespace

std::string_view to_string(StrategyKind s) {
  switch (s) {
    case StrategyKind::Naive: return "naive";
    case StrategyKind::Serial: return "serial";
    case StrategyKind::Bayes: return "bayes";
    case StrategyKind::Pattern: return "pattern";
  }
  return "?";
}

StrategyKind parse_strategy(std::string_view name) {
  for (auto s : {StrategyKind::Naive, StrategyKind::Serial, StrategyKind::Bayes, StrategyKind::Pattern}) {
    if (to_string(s) == name) return s;
  }
  throw ConfigError("unknown strategy '" + std::string(name) + "' (naive|serial|bayes|pattern)");
}

void RunConfig::validate() const {
  const auto prob = [](double v, const char* f) {
    if (!(v > 0.0 && v < 1.0)) field_error(f, "must lie in (0, 1)");
  };
  prob(p_fp, "targets.p_fp");
  prob(p_fn, "targets.p_fn");
  if (K < 1) field_error("K", "must be >= 1");
  if (!map_file) {
    if (synthetic.width < 1) field_error("map.synthetic.width", "must be >= 1");
    if (synthetic.height < 1) field_error("map.synthetic.height", "must be >= 1");
    if (!(synthetic.alpha_min > 0.0)) field_error("map.synthetic.alpha_min", "must be > 0");
    if (!(synthetic.alpha_max > synthetic.alpha_min && synthetic.alpha_max <= 1.0)) {
      field_error("map.synthetic.alpha_max", "must lie in (alpha_min, 1]");
    }
  }
  if (intensity && !(*intensity > 0.0 && std::isfinite(*intensity))) field_error("intensity", "must be > 0");
  if (trials < 1) field_error("trials", "must be >= 1");
  if (max_rounds < 1) field_error("max_rounds", "must be >= 1");
  if (trace_walks < 0) field_error("trace_walks", "must be >= 0");
  if (threads < 0) field_error("threads", "must be >= 0");
  if (naive_mu < 1) field_error("naive.mu", "must be >= 1");
  prob(naive_p_correct, "naive.p_correct");
  if (!(pattern.classes.low_max < pattern.classes.high_min)) field_error("pattern.high_min", "must exceed pattern.low_max");
  if (pattern.n_noise < 0) field_error("pattern.n_noise", "must be >= 0");
  if (pattern.block < 1) field_error("pattern.block", "must be >= 1");
  if (!(pattern.intensity >= 0.0)) field_error("pattern.intensity", "must be >= 0");
  if (pattern_test.M < 2) field_error("pattern.M", "must be >= 2");
  if (pattern_test.m < 1) field_error("pattern.m", "must be >= 1");
  if (pattern_test.rule.k < 1) field_error("pattern.k", "must be >= 1");
  if (pattern_test.rule.l < 1) field_error("pattern.l", "must be >= 1");
}

RunConfig parse_config(std::string_view json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("config is not valid JSON: ") + e.what());
  }
  only_keys(root, "",
            {"strategy", "targets", "K", "map", "distribution", "assumed_distribution", "intensity", "trials", "seed",
             "max_rounds", "trace_walks", "threads", "out", "naive", "pattern"});
  RunConfig c;
  if (root.contains("strategy")) {
    std::string s;
    read(root, "", "strategy", s);
    try {
      c.strategy = parse_strategy(s);
    } catch (const ConfigError&) {
      field_error("strategy", "expected naive|serial|bayes|pattern");
    }
  }
  if (root.contains("targets")) {
    const auto& t = root["targets"];
    only_keys(t, "targets", {"p_fp", "p_fn"});
    read(t, "targets", "p_fp", c.p_fp);
    read(t, "targets", "p_fn", c.p_fn);
  }
  read(root, "", "K", c.K);
  if (root.contains("map")) {
    const auto& m = root["map"];
    only_keys(m, "map", {"file", "synthetic"});
    if (m.contains("file") == m.contains("synthetic")) field_error("map", "give exactly one of 'file' or 'synthetic'");
    if (m.contains("file")) {
      std::string f;
      read(m, "map", "file", f);
      c.map_file = f;
    } else {
      const auto& s = m["synthetic"];
      only_keys(s, "map.synthetic", {"width", "height", "alpha_min", "alpha_max", "seed"});
      read(s, "map.synthetic", "width", c.synthetic.width);
      read(s, "map.synthetic", "height", c.synthetic.height);
      read(s, "map.synthetic", "alpha_min", c.synthetic.alpha_min);
      read(s, "map.synthetic", "alpha_max", c.synthetic.alpha_max);
      read(s, "map.synthetic", "seed", c.synthetic.seed);
    }
  }
  if (root.contains("distribution")) c.distribution = read_distribution(root["distribution"], "distribution");
  if (root.contains("assumed_distribution")) {
    c.assumed_distribution = read_distribution(root["assumed_distribution"], "assumed_distribution");
  }
  if (root.contains("intensity") && !root["intensity"].is_null()) {
    double v = 0.0;
    read(root, "", "intensity", v);
    c.intensity = v;
  }
  read(root, "", "trials", c.trials);
  read(root, "", "seed", c.seed);
  read(root, "", "max_rounds", c.max_rounds);
  read(root, "", "trace_walks", c.trace_walks);
  read(root, "", "threads", c.threads);
  if (root.contains("out")) {
    std::string o;
    read(root, "", "out", o);
    c.out = o;
  }
  if (root.contains("naive")) {
    const auto& n = root["naive"];
    only_keys(n, "naive", {"mu", "p_correct"});
    read(n, "naive", "mu", c.naive_mu);
    read(n, "naive", "p_correct", c.naive_p_correct);
  }
  if (root.contains("pattern")) {
    const auto& p = root["pattern"];
    only_keys(p, "pattern", {"low_max", "high_min", "n_noise", "block", "intensity", "M", "m", "k", "l"});
    read(p, "pattern", "low_max", c.pattern.classes.low_max);
    read(p, "pattern", "high_min", c.pattern.classes.high_min);
    read(p, "pattern", "n_noise", c.pattern.n_noise);
    read(p, "pattern", "block", c.pattern.block);
    read(p, "pattern", "intensity", c.pattern.intensity);
    read(p, "pattern", "M", c.pattern_test.M);
    read(p, "pattern", "m", c.pattern_test.m);
    read(p, "pattern", "k", c.pattern_test.rule.k);
    read(p, "pattern", "l", c.pattern_test.rule.l);
  }
  c.pattern_test.K = c.K;
  c.validate();
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string to_json(const RunConfig& c) {
  ordered_json j;
  j["strategy"] = std::string(to_string(c.strategy));
  j["targets"] = {{"p_fp", c.p_fp}, {"p_fn", c.p_fn}};
  j["K"] = c.K;
  if (c.map_file) {
    j["map"] = {{"file", c.map_file->string()}};
  } else {
    j["map"]["synthetic"] = {{"width", c.synthetic.width},
                             {"height", c.synthetic.height},
                             {"alpha_min", c.synthetic.alpha_min},
                             {"alpha_max", c.synthetic.alpha_max},
                             {"seed", c.synthetic.seed}};
  }
  j["distribution"] = distribution_json(c.distribution);
  if (c.assumed_distribution) j["assumed_distribution"] = distribution_json(*c.assumed_distribution);
  j["intensity"] = c.intensity ? ordered_json(*c.intensity) : ordered_json(nullptr);
  j["trials"] = c.trials;
  j["seed"] = c.seed;
  j["max_rounds"] = c.max_rounds;
  j["trace_walks"] = c.trace_walks;
  j["threads"] = c.threads;
  j["out"] = c.out.string();
  j["naive"] = {{"mu", c.naive_mu}, {"p_correct", c.naive_p_correct}};
  j["pattern"] = {{"low_max", c.pattern.classes.low_max}, {"high_min", c.pattern.classes.high_min},
                  {"n_noise", c.pattern.n_noise},         {"block", c.pattern.block},
                  {"intensity", c.pattern.intensity},     {"M", c.pattern_test.M},
                  {"m", c.pattern_test.m},                {"k", c.pattern_test.rule.k},
                  {"l", c.pattern_test.rule.l}};
  return j.dump(2);
}

AlphaMap resolve_map(const RunConfig& c) {
  if (c.map_file) return load(*c.map_file);
  return generate_synthetic(c.synthetic.width, c.synthetic.height, c.synthetic.alpha_min, c.synthetic.alpha_max,
                            c.synthetic.seed);
}

SubjectModel parse_subject(std::string_view spec, int K) {
  if (spec == "alice") return AliceModel{K};
  if (spec == "eve:fair") return EveStrategy{FairCoin{}};
  if (spec == "eve:uniform") return EveStrategy{UniformP{}};
  if (spec == "eve:echo") return EveStrategy{echo_last_answer()};
  if (spec.rfind("eve:fixed:", 0) == 0) {
    const std::string num(spec.substr(10));
    std::size_t used = 0;
    double p = -1.0;
    try {
      p = std::stod(num, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != num.size() || !(p >= 0.0 && p <= 1.0)) {
      throw ConfigError("subject 'eve:fixed:<p>' needs p in [0, 1], got '" + num + "'");
    }
    return EveStrategy{FixedP{p}};
  }
  throw ConfigError("unknown subject '" + std::string(spec) +
                    "' (alice|eve:fair|eve:fixed:<p>|eve:uniform|eve:echo|interactive)");
}

}  // namespace retina
