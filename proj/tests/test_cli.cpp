#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"
#include "skewjs/divergences.hpp"
#include "skewjs/io.hpp"

using namespace skewjs;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

const fs::path& tmp() {
  static const fs::path dir = [] {
    fs::path d(SKEWJS_TEST_TMP);
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string path(const std::string& name) { return (tmp() / name).string(); }

std::string file(const std::string& name, const std::string& content) {
  std::ofstream(path(name), std::ios::binary) << content;
  return path(name);
}

std::string slurp(const std::string& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

std::vector<double> read_csv(const std::string& p) {
  std::ifstream f(p);
  return read_histogram_csv(f);
}

double first_number(const std::string& text) { return std::stod(text); }

}  // namespace

TEST_CASE("div") {
  const auto a = file("a.csv", "1\n2\n3\n");
  const auto b = file("b.csv", "0\n0\n5\n");
  const auto left = file("left.csv", "1\n1\n0\n0\n");
  const auto right = file("right.csv", "0\n0\n2\n2\n");

  auto r = run({"div", a, a, "--kind", "js"});
  CHECK(r.code == 0);
  CHECK(first_number(r.out) == 0.0);

  r = run({"div", left, right, "--kind", "js"});
  CHECK(r.code == 0);
  CHECK(r.out == "0.69314718056\n");

  r = run({"div", left, right, "--kind", "js", "--bits"});
  CHECK(first_number(r.out) == doctest::Approx(1.0).epsilon(1e-11));

  r = run({"div", a, b, "--kind", "kl"});
  CHECK(r.out == "inf\n");

  const SkewProfile prof({0, 1, 0.3333333}, {0.3333, 0.3333, 0.3334});
  const double lib = vector_skew_js(to_discrete({1, 2, 3}), to_discrete({0, 0, 5}), prof);
  r = run({"div", a, b, "--kind", "vskew", "--alpha", "0,1,0.3333333", "--w", "0.3333,0.3333,0.3334"});
  CHECK(r.code == 0);
  CHECK(r.out == format_number(lib) + "\n");

  r = run({"div", a, b, "--all", "--report", path("div.json")});
  CHECK(r.code == 0);
  CHECK(r.out.find("kl inf") != std::string::npos);
  CHECK(r.out.find("js ") != std::string::npos);
  const auto report = nlohmann::json::parse(slurp(path("div.json")));
  CHECK(report["command"] == "div");
  CHECK(report["results"]["kl"] == "inf");
  CHECK(report["results"]["js"].is_number());

  r = run({"div", a, b, "--kind", "bi-vskew", "--base", "kl", "--alpha", "0,1", "--beta", "1,0", "--w", "1,1"});
  CHECK(r.code == 0);
  r = run({"div", a, b, "--kind", "mean-kl", "--mean", "harmonic"});
  CHECK(r.code == 0);
}

TEST_CASE("div errors") {
  const auto a = file("e_a.csv", "1\n2\n3\n");
  const auto short_one = file("e_short.csv", "1\n2\n");
  const auto broken = file("e_broken.csv", "1\nfoo\n");
  CHECK(run({"div", a, short_one}).code == 3);
  CHECK(run({"div", a, broken}).code == 2);
  CHECK(run({"div", a}).code == 2);
  CHECK(run({"div", a, path("does_not_exist.csv")}).code == 2);
  CHECK(run({"div", a, a, "--kind", "nope"}).code == 3);
  CHECK(run({"div", a, a, "--kind", "skew-k", "--alpha", "2"}).code == 3);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({}).code == 2);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("centroid") {
  const auto x = file("x.csv", "0.2\n0.5\n0.3\n");
  auto r = run({"centroid", x, "-o", path("single.csv")});
  CHECK(r.code == 0);
  const auto single = read_csv(path("single.csv"));
  CHECK(single[0] == doctest::Approx(0.2).epsilon(1e-9));
  CHECK(single[1] == doctest::Approx(0.5).epsilon(1e-9));

  const auto p = file("p.csv", "0.2\n0.8\n");
  const auto q = file("q.csv", "0.8\n0.2\n");
  r = run({"centroid", p, q, "-o", path("pq.csv"), "--report", path("pq.json")});
  CHECK(r.code == 0);
  const auto pq = read_csv(path("pq.csv"));
  CHECK(pq[0] == doctest::Approx(0.5).epsilon(1e-9));
  const auto report = nlohmann::json::parse(slurp(path("pq.json")));
  CHECK(report["result"]["converged"] == true);
  CHECK(report["result"]["stationarity_gap"].get<double>() <= 1e-8);
  CHECK(report["mode"] == "exact");

  r = run({"centroid", p, q, "--mode", "jeffreys"});
  CHECK(r.code == 0);
  CHECK(r.out.find("0,0.5") == 0);

  r = run({"centroid", p, q, "--mode", "positive", "--alpha", "0,1,0.3333333333333333"});
  CHECK(r.code == 0);

  r = run({"centroid", file("u.csv", "0.2\n0.5\n0.3\n"), file("v.csv", "0.6\n0.1\n0.3\n"), "--alpha",
           "0.361,0.368", "--w", "0.767,0.233", "--accelerate", "--report", path("acc.json")});
  CHECK(r.code == 0);
  CHECK(nlohmann::json::parse(slurp(path("acc.json")))["result"]["converged"] == true);

  // Non-convergence is reported, not an error.
  r = run({"centroid", p, file("r.csv", "0.1\n0.9\n"), "--max-iters", "1", "--grad-tol", "1e-30",
           "-o", path("nc.csv"), "--report", path("nc.json")});
  CHECK(r.code == 0);
  CHECK(nlohmann::json::parse(slurp(path("nc.json")))["result"]["converged"] == false);
  CHECK(fs::exists(path("nc.csv")));

  CHECK(run({"centroid", p, x}).code == 3);
  CHECK(run({"centroid", p, q, "--mode", "median"}).code == 2);
  CHECK(run({"centroid", p, q, "--omega", "0.5,0.6"}).code == 3);
}

TEST_CASE("hist") {
  const auto img = file("seven.pgm", "P2\n2 2\n255\n7 7 7 7\n");
  auto r = run({"hist", img, "-o", path("seven.csv")});
  CHECK(r.code == 0);
  auto bins = read_csv(path("seven.csv"));
  CHECK(bins.size() == 256);
  CHECK(bins[7] == 4);

  r = run({"hist", img, "--negative", "-o", path("neg.csv")});
  bins = read_csv(path("neg.csv"));
  CHECK(bins[248] == 4);
  CHECK(bins[7] == 0);

  r = run({"hist", img, "--normalize"});
  std::istringstream s(r.out);
  bins = read_histogram_csv(s);
  CHECK(bins[7] == 1.0);

  CHECK(run({"hist", file("bad.pgm", "P2\n2 x\n255\n")}).code == 2);
}

TEST_CASE("hist round trip through a binary image") {
  GreyImage image{16, 8, 255, {}};
  for (std::size_t i = 0; i < 128; ++i) image.pixels.push_back(static_cast<std::uint16_t>((i * 37) % 256));
  {
    std::ofstream f(path("rt.pgm"), std::ios::binary);
    write_pgm(f, image);
  }
  CHECK(run({"hist", path("rt.pgm"), "-o", path("rt.csv")}).code == 0);
  CHECK(read_csv(path("rt.csv")) == grey_histogram(image));
}

TEST_CASE("cluster") {
  std::vector<std::string> files;
  const double ts[] = {0.05, 0.9, 0.1, 0.95};
  for (int i = 0; i < 4; ++i) {
    files.push_back(file("c" + std::to_string(i) + ".csv", format_exact(ts[i]) + "\n" + format_exact(1 - ts[i]) + "\n"));
  }
  std::vector<std::string> args{"cluster"};
  args.insert(args.end(), files.begin(), files.end());

  auto one = args;
  one.insert(one.end(), {"-k", "1"});
  auto r = run(one);
  CHECK(r.code == 0);
  CHECK(r.out == "0,0\n1,0\n2,0\n3,0\n");

  auto two = args;
  two.insert(two.end(), {"-k", "2", "--seed", "5", "-o", path("assign1.csv"), "--report", path("cl.json")});
  CHECK(run(two).code == 0);
  const auto first = slurp(path("assign1.csv"));
  two[two.size() - 3] = path("assign2.csv");
  CHECK(run(two).code == 0);
  CHECK(slurp(path("assign2.csv")) == first);
  const auto report = nlohmann::json::parse(slurp(path("cl.json")));
  const auto assign = report["assignment"].get<std::vector<std::size_t>>();
  CHECK(assign[0] == assign[2]);
  CHECK(assign[1] == assign[3]);
  CHECK(assign[0] != assign[1]);

  auto too_many = args;
  too_many.insert(too_many.end(), {"-k", "5"});
  CHECK(run(too_many).code == 3);

  auto seeding = args;
  seeding.insert(seeding.end(), {"-k", "2", "--kind", "jeffreys", "--seeding-only"});
  CHECK(run(seeding).code == 0);
}

TEST_CASE("synth") {
  auto r = run({"synth", "--width", "32", "--height", "16", "--mode", "60,10,1", "--range", "40,100", "-o",
                path("s.pgm")});
  CHECK(r.code == 0);
  std::ifstream f(path("s.pgm"), std::ios::binary);
  const auto img = read_pgm(f);
  const auto h = grey_histogram(img);
  double total = 0;
  for (std::size_t g = 0; g < h.size(); ++g) {
    total += h[g];
    if (g < 40 || g > 100) CHECK(h[g] == 0);
  }
  CHECK(total == 512);
  CHECK(h[60] > h[80]);
  CHECK(run({"synth", "--mode", "60,10", "-o", path("bad.pgm")}).code == 2);
}
