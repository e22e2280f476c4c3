#pragma once

#include <Eigen/Core>
#include <map>
#include <string>
#include <vector>

#include "retina/alpha_map.hpp"
#include "retina/decision.hpp"
#include "retina/glyphs.hpp"
#include "retina/subjects.hpp"

namespace retina {

/// How a glyph is laid onto the map. Glyph cell (r, c) covers the block of
/// block x block spots whose top-left corner is anchor + block * (r, c).
struct PatternConfig {
  ClassBounds classes{0.02, 0.18};
  int n_noise = 75;
  int block = 7;
  double intensity = 72.0;

  void validate() const;
};

struct PatternChallenge {
  std::string hidden_glyph;
  std::vector<Eigen::Index> pattern_spots;  ///< one High spot per glyph cell
  std::vector<Eigen::Index> noise_spots;    ///< Low spots, disjoint from the pattern
  double intensity;
  Eigen::Index anchor_row;
  Eigen::Index anchor_col;
  int block;

  /// Pattern and noise spots, sorted. Every one gets the same pulse.
  std::vector<Eigen::Index> illuminated() const;
};

/// Finds placements and builds challenges on one map. Placements are
/// cached per glyph, so reuse the factory across challenges.
///
/// A placement is valid when every glyph cell block holds a High spot and the
/// whole glyph area holds at least n_noise Low spots. Among valid placements
/// the ones leaving the fewest non-glyph cells without a Low spot are kept,
/// so noise can cover the cell grid and hide the glyph's outline.
class ChallengeFactory {
 public:
  ChallengeFactory(const AlphaMap& map, const GlyphLibrary& library, PatternConfig config);

  /// Throws PlacementError when the glyph fits nowhere.
  PatternChallenge build(const std::string& glyph_id, Rng& rng);

  /// Glyphs that can be placed at all.
  std::vector<std::string> placeable_glyphs();

  const AlphaMap& map() const { return *map_; }
  const GlyphLibrary& library() const { return *library_; }
  const PatternConfig& config() const { return config_; }

 private:
  struct Anchor {
    Eigen::Index row;
    Eigen::Index col;
  };

  const std::vector<Anchor>& anchors(const Glyph& glyph);

  const AlphaMap* map_;
  const GlyphLibrary* library_;
  PatternConfig config_;
  std::vector<SpotClass> classes_;
  Eigen::Array<int, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> low_sum_;
  Eigen::Array<int, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> high_sum_;
  std::map<std::string, std::vector<Anchor>> cache_;
};

PatternChallenge build_challenge(const AlphaMap& map, const GlyphLibrary& library, const std::string& glyph_id,
                                 const PatternConfig& config, Rng& rng);

struct MenuEntry {
  std::string glyph;
  std::vector<Eigen::Index> spots;  ///< one illuminated spot per glyph cell, sorted
};

/// Glyphs with an illuminated spot in each of their cells.
std::vector<std::string> embeddable_glyphs(const PatternChallenge& challenge, const AlphaMap& map,
                                           const GlyphLibrary& library);

/// M shuffled candidates: the hidden pattern plus M - 1 other embeddable
/// glyphs, each drawn from illuminated spots. ConfigError for M < 2,
/// PlacementError naming the achievable count when too few glyphs embed.
std::vector<MenuEntry> candidate_menu(const PatternChallenge& challenge, const AlphaMap& map,
                                      const GlyphLibrary& library, int M, Rng& rng);

/// Spots that fire: Poisson(alpha * intensity) >= K, independently. Sorted.
std::vector<Eigen::Index> simulate_perception(const PatternChallenge& challenge, const AlphaMap& map, int K,
                                              Rng& rng);

/// Photon counts an ideal detector in front of the eye sees on each
/// illuminated spot, in illuminated() order.
std::vector<std::int64_t> detector_view(const PatternChallenge& challenge, Rng& rng);

struct RecognitionRule {
  int k = 5;  ///< fail when at least k pattern spots are missed
  int l = 5;  ///< fail when at least l noise spots are seen
};

bool recognize(const std::vector<Eigen::Index>& perceived, const PatternChallenge& challenge,
               const RecognitionRule& rule);

/// (1/M)^m, computed from the exact integer M^m while it fits in 64 bits.
double false_positive_rate(int M, int m);

/// 1 - (1 - P)^m with
///   P = exp(-n_H H(k/n_H | p_H)) + exp(-n_L H(l/n_L | p_L)),
/// clamped to [0, 1]. BoundInapplicableError unless k/n_H > p_H and l/n_L > p_L.
double alice_failure_bound(int n_H, int n_L, int k, int l, double p_H, double p_L, int m);

struct PatternBoundParams {
  int n_H = 25;
  int n_L = 75;
  RecognitionRule rule;
  double alpha_L = 0.02;
  double alpha_H = 0.18;
  int K = 6;
  int m = 6;
};

/// alice_failure_bound with p_H = 1 - G_K(alpha_H I), p_L = G_K(alpha_L I).
double failure_bound_at(const PatternBoundParams& params, double intensity);

struct OptimalIntensity {
  double intensity;
  double p_fn;
};

/// Grid scan of [lo, hi] in steps of 0.1, refined by golden section around
/// the best grid point. BoundInapplicableError when no point is valid.
OptimalIntensity optimize_intensity(const PatternBoundParams& params, double lo = 1.0, double hi = 400.0);

struct PatternTestConfig {
  int m = 8;
  int M = 18;
  RecognitionRule rule;
  int K = 6;
};

struct PatternOutcome {
  Decision decision;
  int correct;
  int recognized;  ///< challenges the honest model recognized (0 for impostors)
};

/// m challenges, each with a fresh random glyph and spots. Alice answers the
/// menu entry with the largest Jaccard overlap with what she saw when she
/// recognizes the pattern, otherwise a uniform entry. Impostors answer a
/// uniform entry. Accept iff every answer is right.
PatternOutcome run_pattern_test(const SubjectModel& subject, ChallengeFactory& factory,
                                const PatternTestConfig& config, Rng& rng);

/// Text picture of the glyph area: 'H' pattern, 'n' noise, '.' other spots.
/// With `perceived`, seen spots are drawn as '#' and unseen illuminated ones as 'o'.
std::string render_grid(const PatternChallenge& challenge, const AlphaMap& map, const GlyphLibrary& library,
                        const std::vector<Eigen::Index>* perceived = nullptr);

/// CSV spot list: spot,row,col,alpha,role,perceived.
std::string render_csv(const PatternChallenge& challenge, const AlphaMap& map,
                       const std::vector<Eigen::Index>* perceived = nullptr);

}  // namespace retina
