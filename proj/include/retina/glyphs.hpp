#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace retina {

struct Cell {
  int row;
  int col;

  friend bool operator==(const Cell&, const Cell&) = default;
  friend auto operator<=>(const Cell&, const Cell&) = default;
};

/// A symbol drawn on the glyph cell grid. Cells are sorted row-major.
struct Glyph {
  std::string id;
  std::vector<Cell> cells;
};

/// Symbols available for pattern challenges.
///
/// Font files hold `size R C` followed by `glyph <id>` blocks of R lines of
/// C characters ('#' lit, '.' dark); lines starting with "# " are comments. Each font
/// pixel becomes two horizontally adjacent cells, so the cell grid is
/// R x 2C. Symbols are then brought into [min_cells, max_cells]:
///   - too many: drop the right copy of pixels without a lit horizontal
///     neighbour, in raster order;
///   - too few: light the cell right of each pixel's pair, in raster order.
/// A symbol that still falls outside the range is a ParseError.
class GlyphLibrary {
 public:
  static constexpr int kMinCells = 20;
  static constexpr int kMaxCells = 30;

  static GlyphLibrary parse(std::string_view text);
  static GlyphLibrary load(const std::filesystem::path& path);
  /// The 5x7 font compiled into the library.
  static const GlyphLibrary& builtin();

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::size_t size() const { return glyphs_.size(); }
  const std::vector<Glyph>& glyphs() const { return glyphs_; }

  /// Throws std::out_of_range for an unknown id.
  const Glyph& at(std::string_view id) const;
  bool contains(std::string_view id) const;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<Glyph> glyphs_;
};

/// '#'/'.' picture of a glyph on the cell grid.
std::string render(const Glyph& glyph, const GlyphLibrary& library);

}  // namespace retina
