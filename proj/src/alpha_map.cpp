#include "retina/alpha_map.hpp"

#include <bit>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <stdexcept>

#include "retina/errors.hpp"

namespace retina {

namespace {

void check_bounds(double alpha_min, double alpha_max) {
  if (!(alpha_min > 0.0 && alpha_min < alpha_max && alpha_max <= 1.0)) {
    throw std::domain_error("alpha bounds must satisfy 0 < alpha_min < alpha_max <= 1");
  }
}

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string line_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1, column = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

template <typename T>
T required(const nlohmann::json& doc, const char* field) {
  const auto it = doc.find(field);
  if (it == doc.end()) throw ParseError(std::string("map file: missing field '") + field + "'");
  try {
    return it->get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ParseError(std::string("map file: field '") + field + "' has the wrong type");
  }
}

}  // namespace

AlphaMap::AlphaMap(AlphaGrid alpha, double alpha_min, double alpha_max)
    : alpha_(std::move(alpha)), alpha_min_(alpha_min), alpha_max_(alpha_max) {
  check_bounds(alpha_min, alpha_max);
  if (alpha_.size() == 0) throw std::domain_error("alpha map must contain at least one spot");
  for (Eigen::Index i = 0; i < alpha_.size(); ++i) {
    const double a = alpha_.data()[i];
    if (!(a >= alpha_min && a <= alpha_max)) {
      throw std::domain_error("alpha[" + std::to_string(i) + "] = " + format_number(a) +
                              " lies outside [alpha_min, alpha_max]");
    }
  }
}

AlphaMap generate_synthetic(Eigen::Index width, Eigen::Index height, double alpha_min,
                            double alpha_max, std::uint64_t seed) {
  if (width < 1 || height < 1) throw std::domain_error("map dimensions must be >= 1");
  check_bounds(alpha_min, alpha_max);
  Rng rng(seed);
  AlphaGrid grid(height, width);
  for (Eigen::Index i = 0; i < grid.size(); ++i) grid.data()[i] = rng.uniform(alpha_min, alpha_max);
  return AlphaMap(std::move(grid), alpha_min, alpha_max);
}

std::string_view to_string(SpotClass c) {
  switch (c) {
    case SpotClass::Low: return "low";
    case SpotClass::Mid: return "mid";
    case SpotClass::High: return "high";
  }
  return "?";
}

void ClassBounds::validate() const {
  if (!(low_max < high_min)) throw std::domain_error("class bounds need low_max < high_min");
}

SpotClass classify(double alpha, const ClassBounds& bounds) {
  if (alpha <= bounds.low_max) return SpotClass::Low;
  if (alpha >= bounds.high_min) return SpotClass::High;
  return SpotClass::Mid;
}

std::vector<SpotClass> classify(const AlphaMap& map, const ClassBounds& bounds) {
  bounds.validate();
  std::vector<SpotClass> out(static_cast<std::size_t>(map.size()));
  for (Eigen::Index i = 0; i < map.size(); ++i) out[i] = classify(map.at(i), bounds);
  return out;
}

ClassCounts count_classes(const AlphaMap& map, const ClassBounds& bounds) {
  bounds.validate();
  const auto& a = map.values();
  ClassCounts counts;
  counts.low = (a <= bounds.low_max).count();
  counts.high = (a >= bounds.high_min).count();
  counts.mid = map.size() - counts.low - counts.high;
  return counts;
}

void validate(const AlphaDistribution& dist) {
  std::visit(
      [](const auto& d) {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, PointPair>) {
          if (!(d.low > 0.0 && d.high <= 1.0)) throw ConfigError("point pair alphas must lie in (0, 1]");
          if (!(d.low < d.high)) throw ConfigError("point pair needs distinct classes with low < high");
        } else {
          if (!(d.low.lo <= d.low.hi)) throw ConfigError("low band is empty");
          if (!(d.high.lo <= d.high.hi)) throw ConfigError("high band is empty");
          if (!(d.low.lo > 0.0 && d.high.hi <= 1.0)) throw ConfigError("band alphas must lie in (0, 1]");
          if (!(d.low.hi < d.high.lo)) throw ConfigError("low and high bands overlap");
        }
      },
      dist);
}

ClassBounds class_edges(const AlphaDistribution& dist) {
  if (const auto* pp = std::get_if<PointPair>(&dist)) return {pp->low, pp->high};
  const auto& ub = std::get<UniformBands>(dist);
  return {ub.low.hi, ub.high.lo};
}

void validate(const AlphaDistribution& dist, const AlphaMap& map) {
  validate(dist);
  const double lowest = std::holds_alternative<PointPair>(dist) ? std::get<PointPair>(dist).low
                                                                 : std::get<UniformBands>(dist).low.lo;
  const double highest = std::holds_alternative<PointPair>(dist) ? std::get<PointPair>(dist).high
                                                                  : std::get<UniformBands>(dist).high.hi;
  if (lowest < map.alpha_min() || highest > map.alpha_max()) {
    throw ConfigError("interrogation distribution reaches outside the map's alpha bounds");
  }
}

std::string describe(const AlphaDistribution& dist) {
  std::ostringstream os;
  if (const auto* pp = std::get_if<PointPair>(&dist)) {
    os << "point_pair(" << pp->low << ", " << pp->high << ")";
  } else {
    const auto& ub = std::get<UniformBands>(dist);
    os << "uniform_bands([" << ub.low.lo << ", " << ub.low.hi << "], [" << ub.high.lo << ", "
       << ub.high.hi << "])";
  }
  return os.str();
}

Interrogation draw_interrogation_spot(const AlphaDistribution& dist, Rng& rng) {
  const bool high = rng.bernoulli(0.5);
  const SpotClass cls = high ? SpotClass::High : SpotClass::Low;
  if (const auto* pp = std::get_if<PointPair>(&dist)) return {high ? pp->high : pp->low, cls};
  const auto& ub = std::get<UniformBands>(dist);
  const Interval& band = high ? ub.high : ub.low;
  return {rng.uniform(band.lo, band.hi), cls};
}

Interrogation draw_interrogation_spot(const AlphaMap& map, const AlphaDistribution& dist, Rng& rng) {
  validate(dist, map);
  return draw_interrogation_spot(dist, rng);
}

std::string to_json(const AlphaMap& map) {
  std::string out;
  out.reserve(static_cast<std::size_t>(map.size()) * 26 + 128);
  out += "{\"version\":1,\"width\":" + std::to_string(map.width()) +
         ",\"height\":" + std::to_string(map.height()) + ",\"alpha_min\":" +
         format_number(map.alpha_min()) + ",\"alpha_max\":" + format_number(map.alpha_max()) +
         ",\"alpha\":[";
  for (Eigen::Index i = 0; i < map.size(); ++i) {
    if (i > 0) out += (i % map.width() == 0) ? ",\n" : ",";
    out += format_number(map.at(i));
  }
  out += "]}\n";
  return out;
}

AlphaMap from_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("map file: malformed JSON at " + line_column(text, e.byte > 0 ? e.byte - 1 : 0));
  }
  if (!doc.is_object()) throw ParseError("map file: top level must be an object");

  const auto version = required<int>(doc, "version");
  if (version != 1) throw ParseError("map file: unsupported version " + std::to_string(version));
  const auto width = required<long long>(doc, "width");
  const auto height = required<long long>(doc, "height");
  const auto alpha_min = required<double>(doc, "alpha_min");
  const auto alpha_max = required<double>(doc, "alpha_max");
  if (width < 1 || height < 1) throw ParseError("map file: width and height must be >= 1");

  const auto it = doc.find("alpha");
  if (it == doc.end() || !it->is_array()) throw ParseError("map file: field 'alpha' must be an array");
  if (static_cast<long long>(it->size()) != width * height) {
    throw ParseError("map file: field 'alpha' holds " + std::to_string(it->size()) +
                     " values, expected width*height = " + std::to_string(width * height));
  }

  AlphaGrid grid(height, width);
  for (std::size_t i = 0; i < it->size(); ++i) {
    const auto& v = (*it)[i];
    if (!v.is_number()) throw ParseError("map file: alpha[" + std::to_string(i) + "] is not a number");
    grid.data()[i] = v.get<double>();
  }
  try {
    return AlphaMap(std::move(grid), alpha_min, alpha_max);
  } catch (const std::domain_error& e) {
    throw ParseError(std::string("map file: ") + e.what());
  }
}

void save(const AlphaMap& map, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << to_json(map);
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

AlphaMap load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open map file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_json(buf.str());
}

std::uint64_t checksum(const AlphaMap& map) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  const auto mix = [&h](std::uint64_t word) {
    for (int byte = 0; byte < 8; ++byte) {
      h ^= (word >> (8 * byte)) & 0xffu;
      h *= 0x100000001b3ull;
    }
  };
  mix(static_cast<std::uint64_t>(map.width()));
  mix(static_cast<std::uint64_t>(map.height()));
  mix(std::bit_cast<std::uint64_t>(map.alpha_min()));
  mix(std::bit_cast<std::uint64_t>(map.alpha_max()));
  for (Eigen::Index i = 0; i < map.size(); ++i) mix(std::bit_cast<std::uint64_t>(map.at(i)));
  return h;
}

}  // namespace retina
