#include "retina/strategy_pattern.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <set>
#include <stdexcept>

#include "retina/errors.hpp"
#include "retina/photon_stats.hpp"
#include "retina/relative_entropy.hpp"

namespace retina {

namespace {

using Index = Eigen::Index;
using CountTable = Eigen::Array<int, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Summed-area table with a zero first row and column.
CountTable summed_area(const std::vector<SpotClass>& classes, Index height, Index width, SpotClass wanted) {
  CountTable s = CountTable::Zero(height + 1, width + 1);
  for (Index r = 0; r < height; ++r) {
    for (Index c = 0; c < width; ++c) {
      const int hit = classes[r * width + c] == wanted ? 1 : 0;
      s(r + 1, c + 1) = hit + s(r, c + 1) + s(r + 1, c) - s(r, c);
    }
  }
  return s;
}

int box_count(const CountTable& s, Index r0, Index c0, Index h, Index w) {
  return s(r0 + h, c0 + w) - s(r0, c0 + w) - s(r0 + h, c0) + s(r0, c0);
}

template <typename T>
void shuffle(std::vector<T>& v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[rng.index(i)]);
}

template <typename T>
const T& pick(const std::vector<T>& v, Rng& rng) {
  return v[rng.index(v.size())];
}

bool contains_sorted(const std::vector<Index>& v, Index x) { return std::binary_search(v.begin(), v.end(), x); }

// Illuminated spots grouped by the glyph cell they fall in.
std::vector<std::vector<Index>> spots_by_cell(const PatternChallenge& ch, const AlphaMap& map,
                                              const GlyphLibrary& library) {
  std::vector<std::vector<Index>> cells(static_cast<std::size_t>(library.rows() * library.cols()));
  for (Index s : ch.illuminated()) {
    const Index r = (s / map.width() - ch.anchor_row) / ch.block;
    const Index c = (s % map.width() - ch.anchor_col) / ch.block;
    cells[r * library.cols() + c].push_back(s);
  }
  return cells;
}

double jaccard(const std::vector<Index>& a, const std::vector<Index>& b) {
  std::vector<Index> common;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(common));
  const double uni = static_cast<double>(a.size() + b.size() - common.size());
  return uni > 0 ? common.size() / uni : 0.0;
}

}  // namespace

void PatternConfig::validate() const {
  classes.validate();
  if (n_noise < 0) throw ConfigError("n_noise must be >= 0");
  if (block < 1) throw ConfigError("block must be >= 1");
  if (!(intensity >= 0.0) || !std::isfinite(intensity)) throw ConfigError("intensity must be finite and >= 0");
}

std::vector<Index> PatternChallenge::illuminated() const {
  std::vector<Index> all(pattern_spots);
  all.insert(all.end(), noise_spots.begin(), noise_spots.end());
  std::sort(all.begin(), all.end());
  return all;
}

ChallengeFactory::ChallengeFactory(const AlphaMap& map, const GlyphLibrary& library, PatternConfig config)
    : map_(&map), library_(&library), config_(config) {
  config_.validate();
  classes_ = classify(map, config_.classes);
  low_sum_ = summed_area(classes_, map.height(), map.width(), SpotClass::Low);
  high_sum_ = summed_area(classes_, map.height(), map.width(), SpotClass::High);
}

const std::vector<ChallengeFactory::Anchor>& ChallengeFactory::anchors(const Glyph& glyph) {
  if (auto it = cache_.find(glyph.id); it != cache_.end()) return it->second;

  const Index b = config_.block;
  const Index area_h = library_->rows() * b;
  const Index area_w = library_->cols() * b;
  std::vector<bool> in_glyph(static_cast<std::size_t>(library_->rows() * library_->cols()), false);
  for (const auto& cell : glyph.cells) in_glyph[cell.row * library_->cols() + cell.col] = true;

  std::vector<Anchor> best;
  int best_gaps = std::numeric_limits<int>::max();
  for (Index ar = 0; ar + area_h <= map_->height(); ++ar) {
    for (Index ac = 0; ac + area_w <= map_->width(); ++ac) {
      if (box_count(low_sum_, ar, ac, area_h, area_w) < config_.n_noise) continue;
      bool ok = true;
      int gaps = 0;
      for (int r = 0; r < library_->rows() && ok; ++r) {
        for (int c = 0; c < library_->cols(); ++c) {
          const Index r0 = ar + r * b, c0 = ac + c * b;
          if (in_glyph[r * library_->cols() + c]) {
            if (box_count(high_sum_, r0, c0, b, b) == 0) {
              ok = false;
              break;
            }
          } else if (box_count(low_sum_, r0, c0, b, b) == 0) {
            ++gaps;
          }
        }
      }
      if (!ok || gaps > best_gaps) continue;
      if (gaps < best_gaps) {
        best.clear();
        best_gaps = gaps;
      }
      best.push_back({ar, ac});
    }
  }
  return cache_.emplace(glyph.id, std::move(best)).first->second;
}

std::vector<std::string> ChallengeFactory::placeable_glyphs() {
  std::vector<std::string> ids;
  for (const auto& g : library_->glyphs()) {
    if (!anchors(g).empty()) ids.push_back(g.id);
  }
  return ids;
}

PatternChallenge ChallengeFactory::build(const std::string& glyph_id, Rng& rng) {
  const Glyph& glyph = library_->at(glyph_id);
  const auto& candidates = anchors(glyph);
  if (candidates.empty()) {
    throw PlacementError("glyph '" + glyph_id + "' cannot be placed: no area with a High spot in every glyph cell and " +
                         std::to_string(config_.n_noise) + " Low spots");
  }
  const Anchor a = pick(candidates, rng);
  const Index b = config_.block;
  const Index W = map_->width();

  PatternChallenge ch{glyph_id, {}, {}, config_.intensity, a.row, a.col, config_.block};
  std::vector<bool> in_glyph(static_cast<std::size_t>(library_->rows() * library_->cols()), false);
  for (const auto& cell : glyph.cells) in_glyph[cell.row * library_->cols() + cell.col] = true;

  std::vector<Index> cell_spots;
  std::vector<Index> per_cell_noise;
  std::vector<Index> all_low;
  for (int r = 0; r < library_->rows(); ++r) {
    for (int c = 0; c < library_->cols(); ++c) {
      const bool glyph_cell = in_glyph[r * library_->cols() + c];
      cell_spots.clear();
      for (Index i = 0; i < b; ++i) {
        for (Index j = 0; j < b; ++j) {
          const Index s = (a.row + r * b + i) * W + (a.col + c * b + j);
          const SpotClass k = classes_[s];
          if (k == SpotClass::Low) all_low.push_back(s);
          if ((glyph_cell && k == SpotClass::High) || (!glyph_cell && k == SpotClass::Low)) cell_spots.push_back(s);
        }
      }
      if (cell_spots.empty()) continue;
      (glyph_cell ? ch.pattern_spots : per_cell_noise).push_back(pick(cell_spots, rng));
    }
  }

  // One noise spot per uncovered cell first, then Low spots anywhere in the
  // area, so the per-cell spot counts do not trace the glyph.
  shuffle(per_cell_noise, rng);
  if (static_cast<int>(per_cell_noise.size()) > config_.n_noise) per_cell_noise.resize(config_.n_noise);
  ch.noise_spots = per_cell_noise;
  std::sort(per_cell_noise.begin(), per_cell_noise.end());
  std::vector<Index> rest;
  for (Index s : all_low) {
    if (!contains_sorted(per_cell_noise, s)) rest.push_back(s);
  }
  shuffle(rest, rng);
  const std::size_t missing = config_.n_noise - ch.noise_spots.size();
  ch.noise_spots.insert(ch.noise_spots.end(), rest.begin(), rest.begin() + missing);

  std::sort(ch.pattern_spots.begin(), ch.pattern_spots.end());
  std::sort(ch.noise_spots.begin(), ch.noise_spots.end());
  return ch;
}

PatternChallenge build_challenge(const AlphaMap& map, const GlyphLibrary& library, const std::string& glyph_id,
                                 const PatternConfig& config, Rng& rng) {
  ChallengeFactory factory(map, library, config);
  return factory.build(glyph_id, rng);
}

std::vector<std::string> embeddable_glyphs(const PatternChallenge& challenge, const AlphaMap& map,
                                           const GlyphLibrary& library) {
  const auto cells = spots_by_cell(challenge, map, library);
  std::vector<std::string> ids;
  for (const auto& g : library.glyphs()) {
    const bool fits = std::all_of(g.cells.begin(), g.cells.end(),
                                  [&](const Cell& c) { return !cells[c.row * library.cols() + c.col].empty(); });
    if (fits) ids.push_back(g.id);
  }
  return ids;
}

std::vector<MenuEntry> candidate_menu(const PatternChallenge& challenge, const AlphaMap& map,
                                      const GlyphLibrary& library, int M, Rng& rng) {
  if (M < 2) throw ConfigError("menu size M must be >= 2");
  const auto cells = spots_by_cell(challenge, map, library);
  std::vector<std::string> others;
  for (auto& id : embeddable_glyphs(challenge, map, library)) {
    if (id != challenge.hidden_glyph) others.push_back(std::move(id));
  }
  if (static_cast<int>(others.size()) + 1 < M) {
    throw PlacementError("only " + std::to_string(others.size() + 1) + " glyphs embed in the illuminated spots; M = " +
                         std::to_string(M) + " requested");
  }
  shuffle(others, rng);
  others.resize(M - 1);

  std::vector<MenuEntry> menu{{challenge.hidden_glyph, challenge.pattern_spots}};
  for (const auto& id : others) {
    MenuEntry e{id, {}};
    for (const auto& c : library.at(id).cells) e.spots.push_back(pick(cells[c.row * library.cols() + c.col], rng));
    std::sort(e.spots.begin(), e.spots.end());
    menu.push_back(std::move(e));
  }
  shuffle(menu, rng);
  return menu;
}

std::vector<Index> simulate_perception(const PatternChallenge& challenge, const AlphaMap& map, int K, Rng& rng) {
  std::vector<Index> seen;
  for (Index s : challenge.illuminated()) {
    if (rng.poisson(map.at(s) * challenge.intensity) >= K) seen.push_back(s);
  }
  return seen;
}

std::vector<std::int64_t> detector_view(const PatternChallenge& challenge, Rng& rng) {
  std::vector<std::int64_t> counts;
  for (std::size_t i = 0, n = challenge.pattern_spots.size() + challenge.noise_spots.size(); i < n; ++i) {
    counts.push_back(rng.poisson(challenge.intensity));
  }
  return counts;
}

bool recognize(const std::vector<Index>& perceived, const PatternChallenge& challenge, const RecognitionRule& rule) {
  std::vector<Index> seen(perceived);
  std::sort(seen.begin(), seen.end());
  const auto missed = std::count_if(challenge.pattern_spots.begin(), challenge.pattern_spots.end(),
                                    [&](Index s) { return !contains_sorted(seen, s); });
  const auto noise = std::count_if(challenge.noise_spots.begin(), challenge.noise_spots.end(),
                                   [&](Index s) { return contains_sorted(seen, s); });
  return missed < rule.k && noise < rule.l;
}

double false_positive_rate(int M, int m) {
  if (M < 2 || m < 0) throw std::domain_error("false_positive_rate needs M >= 2 and m >= 0");
  std::uint64_t power = 1;
  for (int i = 0; i < m; ++i) {
    if (__builtin_mul_overflow(power, static_cast<std::uint64_t>(M), &power)) return std::exp(-m * std::log(M));
  }
  return 1.0 / static_cast<double>(power);
}

double alice_failure_bound(int n_H, int n_L, int k, int l, double p_H, double p_L, int m) {
  if (n_H < 1 || n_L < 1 || k < 1 || k > n_H || l < 1 || l > n_L || m < 0) {
    throw std::domain_error("alice_failure_bound: need 1 <= k <= n_H, 1 <= l <= n_L, m >= 0");
  }
  if (!(p_H >= 0.0 && p_H <= 1.0) || !(p_L >= 0.0 && p_L <= 1.0)) {
    throw std::domain_error("alice_failure_bound: probabilities must lie in [0, 1]");
  }
  const double xh = static_cast<double>(k) / n_H;
  const double xl = static_cast<double>(l) / n_L;
  if (!(xh > p_H) || !(xl > p_L)) {
    throw BoundInapplicableError("bound needs k/n_H > p_H and l/n_L > p_L");
  }
  if (m == 0) return 0.0;
  const double P = std::exp(-n_H * relative_entropy(xh, p_H)) + std::exp(-n_L * relative_entropy(xl, p_L));
  if (P >= 1.0) return 1.0;
  return std::clamp(-std::expm1(m * std::log1p(-P)), 0.0, 1.0);
}

double failure_bound_at(const PatternBoundParams& p, double intensity) {
  const double p_H = gk_complement(p.K, p.alpha_H * intensity);
  const double p_L = prob_see(p.alpha_L, intensity, p.K);
  return alice_failure_bound(p.n_H, p.n_L, p.rule.k, p.rule.l, p_H, p_L, p.m);
}

OptimalIntensity optimize_intensity(const PatternBoundParams& params, double lo, double hi) {
  if (!(lo > 0.0 && hi >= lo)) throw std::domain_error("optimize_intensity: need 0 < lo <= hi");
  const auto f = [&](double I) {
    try {
      return failure_bound_at(params, I);
    } catch (const BoundInapplicableError&) {
      return std::numeric_limits<double>::infinity();
    }
  };
  double best_I = lo, best = std::numeric_limits<double>::infinity();
  for (long i = 0;; ++i) {
    const double I = lo + 0.1 * i;
    if (I > hi + 1e-9) break;
    const double v = f(I);
    if (v < best) {
      best = v;
      best_I = I;
    }
  }
  if (!std::isfinite(best)) throw BoundInapplicableError("failure bound is inapplicable over the whole search range");

  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = std::max(lo, best_I - 0.1), b = std::min(hi, best_I + 0.1);
  double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < 60; ++it) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - phi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + phi * (b - a);
      f2 = f(x2);
    }
  }
  const double I = 0.5 * (a + b);
  const double v = f(I);
  return v < best ? OptimalIntensity{I, v} : OptimalIntensity{best_I, best};
}

PatternOutcome run_pattern_test(const SubjectModel& subject, ChallengeFactory& factory,
                                const PatternTestConfig& config, Rng& rng) {
  if (config.m < 1) throw ConfigError("pattern test needs m >= 1 challenges");
  if (std::holds_alternative<InteractiveModel>(subject)) {
    throw ConfigError("interactive subjects are not supported by the pattern test");
  }
  const auto glyphs = factory.placeable_glyphs();
  if (glyphs.empty()) throw PlacementError("no glyph can be placed on this map");

  PatternOutcome out{Decision::Reject, 0, 0};
  for (int i = 0; i < config.m; ++i) {
    const auto ch = factory.build(pick(glyphs, rng), rng);
    const auto menu = candidate_menu(ch, factory.map(), factory.library(), config.M, rng);
    std::size_t answer = rng.index(menu.size());
    if (const auto* alice = std::get_if<AliceModel>(&subject)) {
      const auto seen = simulate_perception(ch, factory.map(), alice->K, rng);
      if (recognize(seen, ch, config.rule)) {
        ++out.recognized;
        std::vector<std::size_t> best;
        double top = -1.0;
        for (std::size_t j = 0; j < menu.size(); ++j) {
          const double s = jaccard(menu[j].spots, seen);
          if (s > top) {
            top = s;
            best.clear();
          }
          if (s == top) best.push_back(j);
        }
        answer = pick(best, rng);
      }
    }
    if (menu[answer].glyph == ch.hidden_glyph) ++out.correct;
  }
  out.decision = out.correct == config.m ? Decision::Accept : Decision::Reject;
  return out;
}

std::string render_grid(const PatternChallenge& challenge, const AlphaMap& map, const GlyphLibrary& library,
                        const std::vector<Index>* perceived) {
  const Index h = library.rows() * challenge.block;
  const Index w = library.cols() * challenge.block;
  std::vector<std::string> rows(static_cast<std::size_t>(h), std::string(static_cast<std::size_t>(w), '.'));
  const auto put = [&](Index s, char ch) { rows[s / map.width() - challenge.anchor_row][s % map.width() - challenge.anchor_col] = ch; };
  if (perceived) {
    for (Index s : challenge.illuminated()) put(s, 'o');
    for (Index s : *perceived) put(s, '#');
  } else {
    for (Index s : challenge.pattern_spots) put(s, 'H');
    for (Index s : challenge.noise_spots) put(s, 'n');
  }
  std::string out;
  for (const auto& r : rows) out += r + '\n';
  return out;
}

std::string render_csv(const PatternChallenge& challenge, const AlphaMap& map, const std::vector<Index>* perceived) {
  std::vector<Index> seen = perceived ? *perceived : std::vector<Index>{};
  std::sort(seen.begin(), seen.end());
  std::string out = "spot,row,col,alpha,role,perceived\n";
  char buf[160];
  for (Index s : challenge.illuminated()) {
    const bool is_pattern = contains_sorted(challenge.pattern_spots, s);
    std::snprintf(buf, sizeof buf, "%ld,%ld,%ld,%.17g,%s,%s\n", static_cast<long>(s), static_cast<long>(s / map.width()),
                  static_cast<long>(s % map.width()), map.at(s), is_pattern ? "pattern" : "noise",
                  perceived ? (contains_sorted(seen, s) ? "1" : "0") : "");
    out += buf;
  }
  return out;
}

}  // namespace retina
