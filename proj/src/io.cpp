#include "skewjs/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "skewjs/errors.hpp"
#include "skewjs/numeric.hpp"

namespace skewjs {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

double parse_value(std::string_view text, std::size_t line) {
  double value = 0.0;
  const char* begin = text.data();
  const char* end = text.data() + text.size();
  if (!text.empty() && *begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end || begin == end) {
    throw ParseError("line " + std::to_string(line) + ": not a number: '" + std::string(text) + "'");
  }
  if (!std::isfinite(value) || value < 0.0) {
    throw ParseError("line " + std::to_string(line) + ": bin values must be finite and non-negative");
  }
  return value;
}

std::string lower_extension(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext;
}

// Header token of a PNM file, skipping whitespace and comments.
std::string pnm_token(std::istream& in) {
  std::string token;
  int c = in.get();
  while (c != EOF) {
    if (c == '#') {
      while (c != EOF && c != '\n' && c != '\r') c = in.get();
    } else if (std::isspace(c)) {
      if (!token.empty()) break;
    } else {
      token.push_back(static_cast<char>(c));
    }
    c = in.get();
  }
  if (token.empty()) throw ParseError("pgm: truncated header");
  return token;
}

std::size_t pnm_number(std::istream& in, const char* what, std::size_t max) {
  const std::string token = pnm_token(in);
  std::size_t value = 0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    throw ParseError(std::string("pgm: bad ") + what + " '" + token + "'");
  }
  if (value == 0 || value > max) throw ParseError(std::string("pgm: ") + what + " out of range");
  return value;
}

std::string escape_xml(std::string_view text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string fixed2(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  std::string s(buf);
  if (s == "-0.00") s = "0.00";
  return s;
}

}  // namespace

FileFormat detect_format(const std::filesystem::path& path) {
  const std::string ext = lower_extension(path);
  if (ext == ".csv" || ext == ".txt") return FileFormat::csv;
  if (ext == ".json") return FileFormat::json;
  if (ext == ".pgm" || ext == ".pnm") return FileFormat::pgm;
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  int c = in.get();
  while (c != EOF && std::isspace(c)) c = in.get();
  if (c == 'P') return FileFormat::pgm;
  if (c == '[' || c == '{') return FileFormat::json;
  return FileFormat::csv;
}

std::vector<double> read_histogram_csv(std::istream& in) {
  std::vector<double> values;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    const std::string_view row = trim(line);
    if (row.empty() || row.front() == '#') continue;
    const auto comma = row.rfind(',');
    const std::string_view field = comma == std::string_view::npos ? row : trim(row.substr(comma + 1));
    values.push_back(parse_value(field, number));
  }
  if (values.empty()) throw ParseError("csv: no values");
  return values;
}

std::vector<double> read_histogram_json(std::istream& in) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("json: ") + e.what());
  }
  const nlohmann::json* bins = &doc;
  if (doc.is_object()) {
    if (!doc.contains("bins")) throw ParseError("json: object without a \"bins\" array");
    bins = &doc["bins"];
  }
  if (!bins->is_array() || bins->empty()) throw ParseError("json: expected a non-empty array of numbers");
  std::vector<double> values;
  for (std::size_t i = 0; i < bins->size(); ++i) {
    const auto& v = (*bins)[i];
    if (!v.is_number()) throw ParseError("json: entry " + std::to_string(i) + " is not a number");
    const double x = v.get<double>();
    if (!std::isfinite(x) || x < 0.0) throw ParseError("json: entry " + std::to_string(i) + " must be finite and non-negative");
    values.push_back(x);
  }
  return values;
}

GreyImage read_pgm(std::istream& in) {
  const std::string magic = pnm_token(in);
  if (magic != "P2" && magic != "P5") throw ParseError("pgm: expected P2 or P5, got '" + magic + "'");
  constexpr std::size_t kMaxSide = 1u << 16;
  GreyImage image;
  image.width = pnm_number(in, "width", kMaxSide);
  image.height = pnm_number(in, "height", kMaxSide);
  image.maxval = static_cast<std::uint16_t>(pnm_number(in, "maxval", 65535));
  const std::size_t count = image.width * image.height;
  image.pixels.resize(count);

  if (magic == "P2") {
    for (std::size_t i = 0; i < count; ++i) {
      std::string token;
      if (!(in >> token)) throw ParseError("pgm: expected " + std::to_string(count) + " samples");
      std::size_t v = 0;
      const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
      if (ec != std::errc() || ptr != token.data() + token.size()) throw ParseError("pgm: bad sample '" + token + "'");
      if (v > image.maxval) throw ParseError("pgm: sample above maxval");
      image.pixels[i] = static_cast<std::uint16_t>(v);
    }
    return image;
  }

  const std::size_t width = image.maxval > 255 ? 2 : 1;
  std::vector<unsigned char> raw(count * width);
  in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (static_cast<std::size_t>(in.gcount()) != raw.size()) throw ParseError("pgm: truncated pixel data");
  for (std::size_t i = 0; i < count; ++i) {
    const unsigned v = width == 2 ? (unsigned{raw[2 * i]} << 8) | raw[2 * i + 1] : raw[i];
    if (v > image.maxval) throw ParseError("pgm: sample above maxval");
    image.pixels[i] = static_cast<std::uint16_t>(v);
  }
  return image;
}

void write_pgm(std::ostream& out, const GreyImage& image) {
  if (image.pixels.size() != image.width * image.height) {
    throw std::invalid_argument("write_pgm: pixel count does not match width * height");
  }
  out << "P5\n" << image.width << ' ' << image.height << '\n' << image.maxval << '\n';
  for (std::uint16_t v : image.pixels) {
    if (v > image.maxval) throw std::invalid_argument("write_pgm: sample above maxval");
    if (image.maxval > 255) out.put(static_cast<char>(v >> 8));
    out.put(static_cast<char>(v & 0xff));
  }
}

std::vector<double> grey_histogram(const GreyImage& image, bool negative) {
  std::vector<double> counts(std::size_t{image.maxval} + 1, 0.0);
  for (std::uint16_t v : image.pixels) counts[negative ? image.maxval - v : v] += 1.0;
  return counts;
}

std::vector<double> read_histogram_file(const std::filesystem::path& path) {
  const FileFormat format = detect_format(path);
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  try {
    switch (format) {
      case FileFormat::csv: return read_histogram_csv(in);
      case FileFormat::json: return read_histogram_json(in);
      case FileFormat::pgm: return grey_histogram(read_pgm(in));
    }
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  throw ParseError("unreachable");
}

DiscreteDensity to_discrete(std::vector<double> values) {
  const double total = compensated_sum(values);
  if (!(total > 0.0)) throw std::invalid_argument("histogram has zero total mass");
  if (std::abs(total - 1.0) <= kSimplexTolerance) return DiscreteDensity(std::move(values));
  return normalize(PositiveDensity(std::move(values)));
}

std::string format_number(double value) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (std::isnan(value)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

std::string format_exact(double value) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (std::isnan(value)) return "nan";
  char buf[64];
  if (value == std::floor(value) && std::abs(value) < 1e15) {
    std::snprintf(buf, sizeof buf, "%.0f", value);
  } else {
    std::snprintf(buf, sizeof buf, "%.17g", value);
  }
  return buf;
}

void write_histogram_csv(std::ostream& out, std::span<const double> values) {
  for (std::size_t i = 0; i < values.size(); ++i) out << i << ',' << format_exact(values[i]) << '\n';
}

std::string render_overlay_svg(std::span<const ChartSeries> series, const std::string& title) {
  if (series.empty()) throw std::invalid_argument("render_overlay_svg: no series");
  const std::size_t bins = series.front().values.size();
  if (bins == 0) throw std::invalid_argument("render_overlay_svg: empty series");
  double top = 0.0;
  for (const auto& s : series) {
    require_same_dimension(s.values.size(), bins);
    for (double v : s.values) {
      if (std::isfinite(v)) top = std::max(top, v);
    }
  }
  if (top <= 0.0) top = 1.0;

  constexpr double kWidth = 800.0;
  constexpr double kHeight = 360.0;
  constexpr double kLeft = 60.0;
  constexpr double kRight = 20.0;
  constexpr double kTop = 40.0;
  constexpr double kBottom = 40.0;
  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  const double bar = plot_w / static_cast<double>(bins);
  auto x_at = [&](std::size_t i) { return kLeft + bar * static_cast<double>(i); };
  auto y_at = [&](double v) {
    const double clipped = std::isfinite(v) ? std::clamp(v, 0.0, top) : 0.0;
    return kTop + plot_h * (1.0 - clipped / top);
  };

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fixed2(kWidth) << "\" height=\""
      << fixed2(kHeight) << "\" viewBox=\"0 0 " << fixed2(kWidth) << ' ' << fixed2(kHeight) << "\">\n"
      << "<rect x=\"0\" y=\"0\" width=\"" << fixed2(kWidth) << "\" height=\"" << fixed2(kHeight)
      << "\" fill=\"white\"/>\n"
      << "<text x=\"" << fixed2(kWidth / 2) << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">"
      << escape_xml(title) << "</text>\n";

  for (const auto& s : series) {
    svg << "<g fill=\"" << escape_xml(s.colour) << "\" stroke=\"" << escape_xml(s.colour) << "\">\n";
    if (s.filled) {
      for (std::size_t i = 0; i < bins; ++i) {
        const double y = y_at(s.values[i]);
        if (y >= kTop + plot_h) continue;
        svg << "<rect x=\"" << fixed2(x_at(i)) << "\" y=\"" << fixed2(y) << "\" width=\"" << fixed2(bar)
            << "\" height=\"" << fixed2(kTop + plot_h - y) << "\" stroke=\"none\"/>\n";
      }
    } else {
      svg << "<polyline fill=\"none\" stroke-width=\"1\" points=\"";
      svg << fixed2(x_at(0)) << ',' << fixed2(kTop + plot_h);
      for (std::size_t i = 0; i < bins; ++i) {
        const double y = y_at(s.values[i]);
        svg << ' ' << fixed2(x_at(i)) << ',' << fixed2(y) << ' ' << fixed2(x_at(i + 1)) << ',' << fixed2(y);
      }
      svg << ' ' << fixed2(x_at(bins)) << ',' << fixed2(kTop + plot_h) << "\"/>\n";
    }
    svg << "</g>\n";
  }

  svg << "<g stroke=\"black\" fill=\"none\">\n"
      << "<line x1=\"" << fixed2(kLeft) << "\" y1=\"" << fixed2(kTop + plot_h) << "\" x2=\"" << fixed2(kLeft + plot_w)
      << "\" y2=\"" << fixed2(kTop + plot_h) << "\"/>\n"
      << "<line x1=\"" << fixed2(kLeft) << "\" y1=\"" << fixed2(kTop) << "\" x2=\"" << fixed2(kLeft) << "\" y2=\""
      << fixed2(kTop + plot_h) << "\"/>\n"
      << "</g>\n";
  svg << "<g font-family=\"sans-serif\" font-size=\"11\">\n"
      << "<text x=\"" << fixed2(kLeft - 4) << "\" y=\"" << fixed2(kTop + 4) << "\" text-anchor=\"end\">"
      << escape_xml(format_number(top)) << "</text>\n"
      << "<text x=\"" << fixed2(kLeft - 4) << "\" y=\"" << fixed2(kTop + plot_h) << "\" text-anchor=\"end\">0</text>\n"
      << "<text x=\"" << fixed2(kLeft) << "\" y=\"" << fixed2(kTop + plot_h + 16) << "\">0</text>\n"
      << "<text x=\"" << fixed2(kLeft + plot_w) << "\" y=\"" << fixed2(kTop + plot_h + 16) << "\" text-anchor=\"end\">"
      << bins - 1 << "</text>\n";
  double legend_y = kTop + 12;
  for (const auto& s : series) {
    svg << "<rect x=\"" << fixed2(kLeft + plot_w - 150) << "\" y=\"" << fixed2(legend_y - 9) << "\" width=\"10\" height=\"10\" fill=\""
        << escape_xml(s.colour) << "\"/>\n"
        << "<text x=\"" << fixed2(kLeft + plot_w - 135) << "\" y=\"" << fixed2(legend_y) << "\">" << escape_xml(s.name)
        << "</text>\n";
    legend_y += 14;
  }
  svg << "</g>\n</svg>\n";
  return svg.str();
}

}  // namespace skewjs
