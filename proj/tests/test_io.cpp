#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "skewjs/errors.hpp"
#include "skewjs/io.hpp"

using namespace skewjs;

TEST_CASE("csv histograms") {
  std::istringstream plain("# counts\n3\n\n0\n2.5\n");
  CHECK(read_histogram_csv(plain) == std::vector<double>{3, 0, 2.5});
  std::istringstream labelled("a,1\nb , 2\r\nc,3e-2\n");
  CHECK(read_histogram_csv(labelled) == std::vector<double>{1, 2, 0.03});
  std::istringstream bad("1\nx\n");
  CHECK_THROWS_AS((void)read_histogram_csv(bad), ParseError);
  std::istringstream negative("1\n-2\n");
  CHECK_THROWS_AS((void)read_histogram_csv(negative), ParseError);
  std::istringstream empty("# nothing\n");
  CHECK_THROWS_AS((void)read_histogram_csv(empty), ParseError);
  std::istringstream inf("inf\n");
  CHECK_THROWS_AS((void)read_histogram_csv(inf), ParseError);
}

TEST_CASE("json histograms") {
  std::istringstream arr("[1, 2, 3]");
  CHECK(read_histogram_json(arr) == std::vector<double>{1, 2, 3});
  std::istringstream obj(R"({"bins": [0.5, 0.5], "name": "x"})");
  CHECK(read_histogram_json(obj) == std::vector<double>{0.5, 0.5});
  std::istringstream missing(R"({"values": [1]})");
  CHECK_THROWS_AS((void)read_histogram_json(missing), ParseError);
  std::istringstream text(R"(["a"])");
  CHECK_THROWS_AS((void)read_histogram_json(text), ParseError);
  std::istringstream broken("[1, 2");
  CHECK_THROWS_AS((void)read_histogram_json(broken), ParseError);
}

TEST_CASE("ascii pgm") {
  std::istringstream in("P2\n# a comment\n2 2\n255\n7 7\n7 7\n");
  const auto img = read_pgm(in);
  CHECK(img.width == 2);
  CHECK(img.height == 2);
  const auto h = grey_histogram(img);
  CHECK(h.size() == 256);
  CHECK(h[7] == 4);
  CHECK(grey_histogram(img, true)[248] == 4);
}

TEST_CASE("binary pgm round trip") {
  GreyImage img{3, 2, 255, {0, 1, 2, 255, 254, 1}};
  std::stringstream s;
  write_pgm(s, img);
  const auto back = read_pgm(s);
  CHECK(back.pixels == img.pixels);
  CHECK(back.maxval == 255);

  GreyImage wide{2, 1, 1000, {999, 3}};
  std::stringstream w;
  write_pgm(w, wide);
  const auto wide_back = read_pgm(w);
  CHECK(wide_back.pixels == wide.pixels);
  CHECK(grey_histogram(wide_back).size() == 1001);
}

TEST_CASE("malformed pgm") {
  for (const char* text : {"P3\n1 1\n255\n0\n", "P2\n0 1\n255\n", "P2\n1 1\n70000\n0\n", "P2\n1 1\n255\n300\n",
                           "P5\n2 2\n255\nab", "P2\n2 2\n255\n1 2 3\n", "P2\n", ""}) {
    std::istringstream in(text);
    CHECK_THROWS_AS((void)read_pgm(in), ParseError);
  }
}

TEST_CASE("histogram files and formats") {
  const auto dir = std::filesystem::temp_directory_path() / "skewjs_test_io";
  std::filesystem::create_directories(dir);
  {
    std::ofstream(dir / "h.csv") << "1\n2\n";
    std::ofstream(dir / "h.json") << "[1, 2]";
    std::ofstream(dir / "h.pgm") << "P2 1 2 3 0 3";
    std::ofstream(dir / "noext") << "  {\"bins\": [4]}";
  }
  CHECK(detect_format(dir / "h.csv") == FileFormat::csv);
  CHECK(detect_format(dir / "h.json") == FileFormat::json);
  CHECK(detect_format(dir / "h.pgm") == FileFormat::pgm);
  CHECK(detect_format(dir / "noext") == FileFormat::json);
  CHECK(read_histogram_file(dir / "h.csv") == std::vector<double>{1, 2});
  CHECK(read_histogram_file(dir / "h.pgm") == std::vector<double>{1, 0, 0, 1});
  CHECK(read_histogram_file(dir / "noext") == std::vector<double>{4});
  CHECK_THROWS_AS((void)read_histogram_file(dir / "missing.csv"), ParseError);
  std::filesystem::remove_all(dir);
}

TEST_CASE("histogram csv round trip") {
  const std::vector<double> values{0, 1, 12345, 0.1, 1.0 / 3.0, 1e-300, 2.5e-10};
  std::stringstream s;
  write_histogram_csv(s, values);
  CHECK(read_histogram_csv(s) == values);
}

TEST_CASE("to_discrete") {
  const auto p = to_discrete({1, 3});
  CHECK(p[0] == 0.25);
  const auto q = to_discrete({0.25, 0.75});
  CHECK(q[1] == 0.75);
  CHECK_THROWS_AS((void)to_discrete({0, 0}), std::invalid_argument);
}

TEST_CASE("number formatting") {
  CHECK(format_number(std::log(2.0)) == "0.69314718056");
  CHECK(format_number(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(format_number(0.0) == "0");
  CHECK(format_exact(4.0) == "4");
  CHECK(std::stod(format_exact(0.1)) == 0.1);
}

TEST_CASE("svg rendering") {
  const std::vector<ChartSeries> series{{"a & b", {1, 2, 3}, "#ff0000", false}, {"c", {3, 2, 1}, "black", true}};
  const auto svg = render_overlay_svg(series, "t<1>");
  CHECK(svg == render_overlay_svg(series, "t<1>"));
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("a &amp; b") != std::string::npos);
  CHECK(svg.find("t&lt;1&gt;") != std::string::npos);
  const std::vector<ChartSeries> mismatched{{"a", {1, 2}, "red", false}, {"b", {1}, "red", false}};
  CHECK_THROWS_AS((void)render_overlay_svg(mismatched, ""), DimensionMismatch);
}
