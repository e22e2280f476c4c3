#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "retina/rng.hpp"

namespace retina {

/// Row-major grid of transmission coefficients, one entry per retinal spot.
using AlphaGrid = Eigen::Array<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Per-spot transmission coefficients of one subject (the stored template).
///
/// Spots are addressed either by (row, col) or by the row-major index
/// row * width + col. Immutable once constructed.
class AlphaMap {
 public:
  /// Throws std::domain_error unless 0 < alpha_min < alpha_max <= 1 and
  /// every entry lies in [alpha_min, alpha_max].
  AlphaMap(AlphaGrid alpha, double alpha_min, double alpha_max);

  Eigen::Index width() const { return alpha_.cols(); }
  Eigen::Index height() const { return alpha_.rows(); }
  Eigen::Index size() const { return alpha_.size(); }
  double alpha_min() const { return alpha_min_; }
  double alpha_max() const { return alpha_max_; }

  double operator()(Eigen::Index row, Eigen::Index col) const { return alpha_(row, col); }
  double at(Eigen::Index spot) const { return alpha_.data()[spot]; }
  const AlphaGrid& values() const { return alpha_; }

  Eigen::Index spot(Eigen::Index row, Eigen::Index col) const { return row * width() + col; }

 private:
  AlphaGrid alpha_;
  double alpha_min_;
  double alpha_max_;
};

/// Independent uniform alpha per spot on [alpha_min, alpha_max].
AlphaMap generate_synthetic(Eigen::Index width, Eigen::Index height, double alpha_min,
                            double alpha_max, std::uint64_t seed);

enum class SpotClass : std::uint8_t { Low, Mid, High };

std::string_view to_string(SpotClass c);

/// Low = [alpha_min, low_max], High = [high_min, alpha_max], both closed.
struct ClassBounds {
  double low_max;
  double high_min;

  void validate() const;
};

SpotClass classify(double alpha, const ClassBounds& bounds);

/// Class of every spot, row-major. Throws std::domain_error if low_max >= high_min.
std::vector<SpotClass> classify(const AlphaMap& map, const ClassBounds& bounds);

struct ClassCounts {
  Eigen::Index low = 0;
  Eigen::Index mid = 0;
  Eigen::Index high = 0;
};

ClassCounts count_classes(const AlphaMap& map, const ClassBounds& bounds);

struct Interval {
  double lo;
  double hi;
};

/// Every low spot has alpha = low, every high spot alpha = high.
struct PointPair {
  double low;
  double high;
};

/// Low spots uniform on `low`, high spots uniform on `high`.
struct UniformBands {
  Interval low;
  Interval high;
};

using AlphaDistribution = std::variant<PointPair, UniformBands>;

/// Throws ConfigError for empty or overlapping classes.
void validate(const AlphaDistribution& dist);

/// Throws ConfigError when the distribution reaches outside the map's bounds.
void validate(const AlphaDistribution& dist, const AlphaMap& map);

/// The edges of the two classes closest to each other (alpha_L, alpha_H).
ClassBounds class_edges(const AlphaDistribution& dist);

std::string describe(const AlphaDistribution& dist);

/// One interrogation as the device sees it. The class label stays on the
/// device side; subject models only ever receive the physical pulse.
struct Interrogation {
  double alpha;
  SpotClass hidden_class;
};

/// Picks Low or High with probability 1/2 each, then alpha from that class.
Interrogation draw_interrogation_spot(const AlphaDistribution& dist, Rng& rng);
Interrogation draw_interrogation_spot(const AlphaMap& map, const AlphaDistribution& dist, Rng& rng);

/// Map file: {"version":1,"width":W,"height":H,"alpha_min":a,"alpha_max":b,
/// "alpha":[row-major W*H numbers]} with 17 significant digits per number.
std::string to_json(const AlphaMap& map);
AlphaMap from_json(std::string_view text);
void save(const AlphaMap& map, const std::filesystem::path& path);
AlphaMap load(const std::filesystem::path& path);

/// FNV-1a over the dimensions, bounds and the IEEE-754 bits of every alpha.
std::uint64_t checksum(const AlphaMap& map);

}  // namespace retina
