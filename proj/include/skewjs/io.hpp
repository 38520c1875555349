#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "skewjs/simplex.hpp"

namespace skewjs {

enum class FileFormat { csv, json, pgm };

/// By extension (.csv/.txt, .json, .pgm); otherwise by sniffing the first
/// non-blank byte ('P' -> pgm, '[' or '{' -> json, else csv).
[[nodiscard]] FileFormat detect_format(const std::filesystem::path& path);

/// One number per line or `label,value` rows (the value is the last field).
/// Blank lines and lines starting with '#' are skipped. Values must be
/// finite and non-negative. Throws ParseError.
[[nodiscard]] std::vector<double> read_histogram_csv(std::istream& in);
/// A JSON array of numbers or an object with a "bins" array. Throws ParseError.
[[nodiscard]] std::vector<double> read_histogram_json(std::istream& in);

struct GreyImage {
  std::size_t width = 0;
  std::size_t height = 0;
  std::uint16_t maxval = 255;
  /// Row-major samples in [0, maxval].
  std::vector<std::uint16_t> pixels;
};

/// Binary P5 or ASCII P2, with '#' comments in the header. Samples wider
/// than 8 bits (maxval > 255) are big-endian in P5. Throws ParseError.
[[nodiscard]] GreyImage read_pgm(std::istream& in);
/// Writes binary P5.
void write_pgm(std::ostream& out, const GreyImage& image);

/// Counts per grey level, maxval + 1 bins. `negative` maps v to maxval - v.
[[nodiscard]] std::vector<double> grey_histogram(const GreyImage& image, bool negative = false);

/// Reads counts or probabilities from a CSV, JSON or PGM file (PGM files
/// yield their grey histogram). Throws ParseError.
[[nodiscard]] std::vector<double> read_histogram_file(const std::filesystem::path& path);

/// Values already summing to one (within kSimplexTolerance) are kept,
/// anything else is treated as counts and normalized. Throws
/// std::invalid_argument for an all-zero histogram.
[[nodiscard]] DiscreteDensity to_discrete(std::vector<double> values);

/// 12 significant digits; +inf prints as "inf".
[[nodiscard]] std::string format_number(double value);
/// Round-trip exact (17 significant digits); integers print without exponent.
[[nodiscard]] std::string format_exact(double value);

/// `index,value` rows with exact formatting; read back by read_histogram_csv.
void write_histogram_csv(std::ostream& out, std::span<const double> values);

struct ChartSeries {
  std::string name;
  std::vector<double> values;
  /// Any SVG colour.
  std::string colour;
  /// Filled bars when true, a step outline otherwise.
  bool filled = false;
};

/// Standalone SVG chart of equally long series drawn over each other, bins
/// along x. The output depends only on the arguments.
[[nodiscard]] std::string render_overlay_svg(std::span<const ChartSeries> series, const std::string& title);

}  // namespace skewjs
