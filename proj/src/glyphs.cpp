#include "retina/glyphs.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "retina/errors.hpp"

namespace retina {

namespace detail {
extern const std::string_view kBuiltinGlyphFont;
}

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

[[noreturn]] void fail(int line, const std::string& what) {
  throw ParseError("glyph font line " + std::to_string(line) + ": " + what);
}

std::vector<Cell> to_cells(const std::vector<std::string>& bitmap, int font_rows, int font_cols, int line) {
  std::set<Cell> pixels;
  for (int r = 0; r < font_rows; ++r) {
    for (int c = 0; c < font_cols; ++c) {
      if (bitmap[r][c] == '#') pixels.insert({r, c});
    }
  }
  std::set<Cell> cells;
  for (const auto& p : pixels) {
    cells.insert({p.row, 2 * p.col});
    cells.insert({p.row, 2 * p.col + 1});
  }
  const auto lit = [&](int r, int c) { return pixels.count({r, c}) > 0; };
  for (const auto& p : pixels) {
    if (static_cast<int>(cells.size()) <= GlyphLibrary::kMaxCells) break;
    if (!lit(p.row, p.col - 1) && !lit(p.row, p.col + 1)) cells.erase({p.row, 2 * p.col + 1});
  }
  for (const auto& p : pixels) {
    if (static_cast<int>(cells.size()) >= GlyphLibrary::kMinCells) break;
    if (2 * p.col + 2 < 2 * font_cols) cells.insert({p.row, 2 * p.col + 2});
  }
  const int n = static_cast<int>(cells.size());
  if (n < GlyphLibrary::kMinCells || n > GlyphLibrary::kMaxCells) {
    fail(line, "glyph has " + std::to_string(n) + " cells after widening, outside [" +
                   std::to_string(GlyphLibrary::kMinCells) + ", " + std::to_string(GlyphLibrary::kMaxCells) + "]");
  }
  return {cells.begin(), cells.end()};
}

}  // namespace

GlyphLibrary GlyphLibrary::parse(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::vector<std::pair<int, std::string>> lines;
  std::string raw;
  for (int n = 1; std::getline(in, raw); ++n) {
    auto t = trim(raw);
    if (t.empty() || t.rfind("# ", 0) == 0) continue;
    lines.emplace_back(n, std::move(t));
  }

  GlyphLibrary lib;
  std::size_t i = 0;
  if (lines.empty()) throw ParseError("glyph font is empty");
  {
    std::istringstream hdr(lines[0].second);
    std::string kw;
    if (!(hdr >> kw >> lib.rows_ >> lib.cols_) || kw != "size" || lib.rows_ < 1 || lib.cols_ < 1) {
      fail(lines[0].first, "expected 'size <rows> <cols>'");
    }
    ++i;
  }
  std::set<std::string> ids;
  while (i < lines.size()) {
    const auto [line, head] = lines[i];
    if (head.rfind("glyph ", 0) != 0) fail(line, "expected 'glyph <id>'");
    const std::string id = trim(std::string_view(head).substr(6));
    if (id.empty() || id.find(' ') != std::string::npos) fail(line, "bad glyph id");
    if (!ids.insert(id).second) fail(line, "duplicate glyph '" + id + "'");
    std::vector<std::string> bitmap;
    for (int r = 0; r < lib.rows_; ++r) {
      if (++i >= lines.size()) fail(line, "glyph '" + id + "' is truncated");
      const auto& row = lines[i].second;
      if (static_cast<int>(row.size()) != lib.cols_ || row.find_first_not_of("#.") != std::string::npos) {
        fail(lines[i].first, "glyph '" + id + "' row must be " + std::to_string(lib.cols_) + " of '#'/'.'");
      }
      bitmap.push_back(row);
    }
    ++i;
    lib.glyphs_.push_back({id, to_cells(bitmap, lib.rows_, lib.cols_, line)});
  }
  if (lib.glyphs_.empty()) throw ParseError("glyph font defines no glyphs");
  lib.cols_ *= 2;
  for (std::size_t a = 0; a < lib.glyphs_.size(); ++a) {
    for (std::size_t b = 0; b < a; ++b) {
      if (lib.glyphs_[a].cells == lib.glyphs_[b].cells) {
        throw ParseError("glyphs '" + lib.glyphs_[b].id + "' and '" + lib.glyphs_[a].id + "' are identical");
      }
    }
  }
  return lib;
}

GlyphLibrary GlyphLibrary::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open glyph font " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

const GlyphLibrary& GlyphLibrary::builtin() {
  static const GlyphLibrary lib = parse(detail::kBuiltinGlyphFont);
  return lib;
}

const Glyph& GlyphLibrary::at(std::string_view id) const {
  for (const auto& g : glyphs_) {
    if (g.id == id) return g;
  }
  throw std::out_of_range("unknown glyph '" + std::string(id) + "'");
}

bool GlyphLibrary::contains(std::string_view id) const {
  return std::any_of(glyphs_.begin(), glyphs_.end(), [&](const Glyph& g) { return g.id == id; });
}

std::string render(const Glyph& glyph, const GlyphLibrary& library) {
  std::string out;
  for (int r = 0; r < library.rows(); ++r) {
    for (int c = 0; c < library.cols(); ++c) {
      out += std::binary_search(glyph.cells.begin(), glyph.cells.end(), Cell{r, c}) ? '#' : '.';
    }
    out += '\n';
  }
  return out;
}

}  // namespace retina
