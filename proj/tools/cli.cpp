#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <memory>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "skewjs/centroid.hpp"
#include "skewjs/clustering.hpp"
#include "skewjs/divergence_kind.hpp"
#include "skewjs/divergences.hpp"
#include "skewjs/errors.hpp"
#include "skewjs/io.hpp"

namespace skewjs::cli {

namespace {

using nlohmann::json;

json number(double v) {
  if (std::isfinite(v)) return v;
  return format_number(v);
}

json numbers(std::span<const double> vs) {
  json out = json::array();
  for (double v : vs) out.push_back(number(v));
  return out;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::invalid_argument("cannot write " + path);
  f << text;
  if (!f) throw std::invalid_argument("error writing " + path);
}

void write_report(const std::string& path, const json& report) {
  if (!path.empty()) write_text(path, report.dump(2) + "\n");
}

std::string histogram_csv(std::span<const double> values) {
  std::ostringstream s;
  write_histogram_csv(s, values);
  return s.str();
}

// Flags shared by every subcommand that selects a divergence.
struct KindFlags {
  std::string kind = "js";
  std::vector<double> alpha;
  std::vector<double> beta;
  std::vector<double> w;
  std::string mean = "arithmetic";
  std::string base = "kl";

  void attach(CLI::App* cmd) {
    cmd->add_option("--kind", kind,
                    "js, kl, kl+, jeffreys, skew-k, skew-js, skew-js-sym, vskew, sym-vskew, kl-ab, bi-vskew, mean-kl")
        ->capture_default_str();
    cmd->add_option("--alpha", alpha, "skew value(s), comma separated")->delimiter(',');
    cmd->add_option("--beta", beta, "second skew value(s) for kl-ab and bi-vskew")->delimiter(',');
    cmd->add_option("--w", w, "skew weights, comma separated (default uniform)")->delimiter(',');
    cmd->add_option("--mean", mean, "mean for mean-kl: arithmetic, harmonic, min, max")->capture_default_str();
    cmd->add_option("--base", base, "base divergence for bi-vskew")->capture_default_str();
  }

  [[nodiscard]] double scalar(const std::vector<double>& v, double fallback, const char* flag) const {
    if (v.empty()) return fallback;
    if (v.size() != 1) throw std::invalid_argument(std::string(flag) + " takes a single value for --kind " + kind);
    return v.front();
  }

  [[nodiscard]] SkewProfile profile() const {
    if (alpha.empty()) {
      if (!w.empty()) throw std::invalid_argument("--w given without --alpha");
      return SkewProfile::jensen_shannon();
    }
    if (w.empty()) return SkewProfile::with_uniform_weights(alpha);
    return SkewProfile(alpha, w);
  }

  [[nodiscard]] DivergenceKind build() const { return build_named(kind); }

  [[nodiscard]] DivergenceKind build_named(const std::string& name) const {
    using K = DivergenceKind;
    if (name == "js") return K::JS{};
    if (name == "kl") return K::KL{};
    if (name == "kl+") return K::KLPlus{};
    if (name == "jeffreys") return K::Jeffreys{};
    if (name == "skew-k") return K::SkewK{scalar(alpha, 0.5, "--alpha")};
    if (name == "skew-js") return K::SkewJSAsym{scalar(alpha, 0.5, "--alpha")};
    if (name == "skew-js-sym") return K::SkewJSSym{scalar(alpha, 0.5, "--alpha")};
    if (name == "vskew") return K::VectorSkewJS{profile()};
    if (name == "sym-vskew") return K::SymVectorSkewJS{profile()};
    if (name == "kl-ab") return K::KLAlphaBeta{scalar(alpha, 0.5, "--alpha"), scalar(beta, 0.5, "--beta")};
    if (name == "mean-kl") return K::MeanSymmetrizedKL{parse_symmetrizing_mean(mean)};
    if (name == "bi-vskew") {
      if (base == "bi-vskew") throw std::invalid_argument("--base cannot itself be bi-vskew");
      auto inner = std::make_shared<const DivergenceKind>(build_named(base));
      std::vector<double> weights = w.empty() ? std::vector<double>(alpha.size(), 1.0) : w;
      return K::BiVectorSkew{std::move(inner), alpha, beta, std::move(weights)};
    }
    throw std::invalid_argument("unknown divergence kind '" + name + "'");
  }
};

std::vector<DivergenceKind> catalog() {
  using K = DivergenceKind;
  return {K::KL{},
          K::KLPlus{},
          K::Jeffreys{},
          K::JS{},
          K::SkewK{0.5},
          K::SkewJSAsym{0.5},
          K::SkewJSSym{0.5},
          K::KLAlphaBeta{0.0, 0.5},
          K::MeanSymmetrizedKL{SymmetrizingMean::arithmetic},
          K::MeanSymmetrizedKL{SymmetrizingMean::harmonic},
          K::MeanSymmetrizedKL{SymmetrizingMean::min},
          K::MeanSymmetrizedKL{SymmetrizingMean::max}};
}

struct DivCommand {
  std::vector<std::string> inputs;
  KindFlags kind;
  bool all = false;
  bool bits = false;
  std::string report;

  void attach(CLI::App& app) {
    auto* cmd = app.add_subcommand("div", "divergence between two histograms (nats)");
    cmd->add_option("inputs", inputs, "two histogram files (csv, json or pgm)")
        ->required()
        ->expected(2)
        ->check(CLI::ExistingFile);
    kind.attach(cmd);
    cmd->add_flag("--all", all, "print the whole catalog");
    cmd->add_flag("--bits", bits, "report in bits instead of nats");
    cmd->add_option("--report", report, "write a JSON run report");
  }

  int run(std::ostream& out) const {
    const DiscreteDensity p = to_discrete(read_histogram_file(inputs[0]));
    const DiscreteDensity q = to_discrete(read_histogram_file(inputs[1]));
    require_same_dimension(p.size(), q.size());
    const double scale = bits ? 1.0 / std::numbers::ln2 : 1.0;

    json results = json::object();
    if (all) {
      for (const auto& k : catalog()) {
        const double v = k(p, q) * scale;
        out << k.name() << ' ' << format_number(v) << '\n';
        results[k.name()] = number(v);
      }
    } else {
      const DivergenceKind k = kind.build();
      const double v = k(p, q) * scale;
      out << format_number(v) << '\n';
      results[k.name()] = number(v);
    }
    write_report(report, json{{"command", "div"},
                              {"inputs", inputs},
                              {"units", bits ? "bits" : "nats"},
                              {"bins", p.size()},
                              {"results", results}});
    return kExitOk;
  }
};

struct CentroidCommand {
  std::vector<std::string> inputs;
  std::string mode = "exact";
  std::vector<double> alpha;
  std::vector<double> w;
  std::vector<double> omega;
  SolverSettings settings;
  std::string output;
  std::string svg;
  bool with_jeffreys = false;
  std::string report;

  void attach(CLI::App& app) {
    auto* cmd = app.add_subcommand("centroid", "weighted centroid of histograms");
    cmd->add_option("inputs", inputs, "histogram files")->required()->check(CLI::ExistingFile);
    cmd->add_option("--mode", mode, "exact, positive or jeffreys")
        ->check(CLI::IsMember({"exact", "positive", "jeffreys"}))
        ->capture_default_str();
    cmd->add_option("--alpha", alpha, "skew vector (default 0,1)")->delimiter(',');
    cmd->add_option("--w", w, "skew weights (default uniform)")->delimiter(',');
    cmd->add_option("--omega", omega, "input weights (default uniform)")->delimiter(',');
    cmd->add_option("--max-iters", settings.max_iters)->capture_default_str();
    cmd->add_option("--grad-tol", settings.grad_tol)->capture_default_str();
    cmd->add_option("--energy-tol", settings.energy_tol)->capture_default_str();
    cmd->add_option("--param-tol", settings.param_tol)->capture_default_str();
    cmd->add_flag("--accelerate", settings.accelerate, "Newton steps on the loss between CCCP steps");
    cmd->add_option("-o,--output", output, "centroid CSV (default: stdout)");
    cmd->add_option("--svg", svg, "overlay chart of inputs and centroid");
    cmd->add_flag("--with-jeffreys", with_jeffreys, "also draw the Jeffreys centroid in the chart");
    cmd->add_option("--report", report, "write a JSON run report");
  }

  [[nodiscard]] SkewProfile profile() const {
    KindFlags k;
    k.alpha = alpha;
    k.w = w;
    return k.profile();
  }

  int run(std::ostream& out) const {
    std::vector<std::vector<double>> raw;
    for (const auto& path : inputs) {
      raw.push_back(read_histogram_file(path));
      require_same_dimension(raw.back().size(), raw.front().size());
    }
    std::vector<DiscreteDensity> densities;
    std::vector<PositiveDensity> positives;
    for (const auto& r : raw) {
      densities.push_back(to_discrete(r));
      positives.emplace_back(r);
    }
    const SkewProfile prof = profile();
    const std::vector<double> weights =
        omega.empty() ? std::vector<double>(inputs.size(), 1.0 / static_cast<double>(inputs.size())) : omega;

    json summary = json::object();
    std::vector<double> centroid;
    bool converged = true;
    if (mode == "exact") {
      auto problem = CentroidProblem::from_densities(densities, weights, prof, settings);
      const CentroidResult r = vector_skew_centroid(problem);
      centroid = r.density.values();
      converged = r.converged;
      summary["iterations"] = r.iterations;
      summary["initial_energy"] = number(r.energy_trace.front());
      summary["final_energy"] = number(r.energy_trace.back());
      summary["energy_trace_length"] = r.energy_trace.size();
      summary["stationarity_gap"] = number(r.stationarity_gap);
      summary["projected"] = r.projected;
    } else if (mode == "positive") {
      const PositiveCentroid r = separable_positive_centroid(positives, weights, prof, settings);
      centroid = r.normalized.values();
      converged = r.converged;
      summary["iterations"] = r.iterations;
      summary["mass"] = number(r.positive.mass());
    } else {
      const PositiveCentroid r = jeffreys_centroid_fixed_point(positives, weights, settings);
      centroid = r.normalized.values();
      converged = r.converged;
      summary["iterations"] = r.iterations;
      summary["jeffreys_loss"] = number(jeffreys_loss(positives, weights, r.positive));
    }
    const DiscreteDensity c(centroid, trusted);
    summary["converged"] = converged;
    summary["js_objective"] = number(centroid_loss(densities, weights, prof, c));

    json outputs = json::object();
    const std::string csv = histogram_csv(centroid);
    if (output.empty()) {
      out << csv;
    } else {
      write_text(output, csv);
      outputs["csv"] = output;
      out << "centroid written to " << output << " (" << (converged ? "converged" : "not converged") << ")\n";
    }

    if (!svg.empty()) {
      static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
      std::vector<ChartSeries> series;
      if (with_jeffreys || mode == "jeffreys") {
        const auto j = mode == "jeffreys" ? centroid
                                          : jeffreys_centroid_fixed_point(positives, weights, settings).normalized.values();
        series.push_back({"jeffreys centroid", j, "#b0b0b0", true});
      }
      for (std::size_t i = 0; i < densities.size(); ++i) {
        series.push_back({std::filesystem::path(inputs[i]).filename().string(), densities[i].values(),
                          palette[i % std::size(palette)], false});
      }
      if (mode != "jeffreys") series.push_back({mode + " centroid", centroid, "#000000", false});
      write_text(svg, render_overlay_svg(series, "centroid (" + mode + ")"));
      outputs["svg"] = svg;
    }

    write_report(report, json{{"command", "centroid"},
                              {"inputs", inputs},
                              {"mode", mode},
                              {"alpha", numbers(prof.alpha())},
                              {"w", numbers(prof.weights())},
                              {"omega", numbers(weights)},
                              {"result", summary},
                              {"outputs", outputs}});
    return kExitOk;
  }
};

struct HistCommand {
  std::string input;
  bool normalize_counts = false;
  bool negative = false;
  std::string output;
  std::string report;

  void attach(CLI::App& app) {
    auto* cmd = app.add_subcommand("hist", "grey-level histogram of a PGM image");
    cmd->add_option("image", input, "P2 or P5 image")->required()->check(CLI::ExistingFile);
    cmd->add_flag("--normalize", normalize_counts, "divide counts by the pixel count");
    cmd->add_flag("--negative", negative, "count maxval - v instead of v");
    cmd->add_option("-o,--output", output, "histogram CSV (default: stdout)");
    cmd->add_option("--report", report, "write a JSON run report");
  }

  int run(std::ostream& out) const {
    std::ifstream f(input, std::ios::binary);
    if (!f) throw ParseError("cannot open " + input);
    GreyImage image;
    try {
      image = read_pgm(f);
    } catch (const ParseError& e) {
      throw ParseError(input + ": " + e.what());
    }
    std::vector<double> bins = grey_histogram(image, negative);
    const double pixels = static_cast<double>(image.pixels.size());
    if (normalize_counts) {
      for (double& b : bins) b /= pixels;
    }
    json outputs = json::object();
    const std::string csv = histogram_csv(bins);
    if (output.empty()) {
      out << csv;
    } else {
      write_text(output, csv);
      outputs["csv"] = output;
    }
    write_report(report, json{{"command", "hist"},
                              {"input", input},
                              {"width", image.width},
                              {"height", image.height},
                              {"maxval", image.maxval},
                              {"bins", bins.size()},
                              {"normalize", normalize_counts},
                              {"negative", negative},
                              {"outputs", outputs}});
    return kExitOk;
  }
};

struct ClusterCommand {
  std::vector<std::string> inputs;
  KindFlags kind;
  std::size_t k = 1;
  std::uint64_t seed = 0;
  int max_rounds = 100;
  bool seeding_only = false;
  bool accelerate = false;
  std::string output;
  std::string report;

  void attach(CLI::App& app) {
    auto* cmd = app.add_subcommand("cluster", "k-means++ / Lloyd clustering of histograms");
    cmd->add_option("inputs", inputs, "histogram files")->required()->check(CLI::ExistingFile);
    kind.attach(cmd);
    cmd->add_option("-k,--clusters", k, "number of clusters")->capture_default_str();
    cmd->add_option("--seed", seed, "random seed")->capture_default_str();
    cmd->add_option("--max-rounds", max_rounds)->capture_default_str();
    cmd->add_flag("--seeding-only", seeding_only, "assign to the k-means++ seeds without centroid updates");
    cmd->add_flag("--accelerate", accelerate, "Newton steps on the loss between CCCP steps");
    cmd->add_option("-o,--output", output, "assignment CSV index,cluster (default: stdout)");
    cmd->add_option("--report", report, "write a JSON run report");
  }

  int run(std::ostream& out) const {
    std::vector<DiscreteDensity> histograms;
    for (const auto& path : inputs) {
      histograms.push_back(to_discrete(read_histogram_file(path)));
      require_same_dimension(histograms.back().size(), histograms.front().size());
    }
    ClusteringConfig config;
    config.k = k;
    config.divergence = kind.build();
    config.seed = seed;
    config.max_rounds = max_rounds;
    config.use_centroid_updates = !seeding_only;
    config.solver.accelerate = accelerate;
    const ClusteringResult r = lloyd_cluster(histograms, config);

    std::ostringstream csv;
    for (std::size_t i = 0; i < r.assignment.size(); ++i) csv << i << ',' << r.assignment[i] << '\n';
    json outputs = json::object();
    if (output.empty()) {
      out << csv.str();
    } else {
      write_text(output, csv.str());
      outputs["csv"] = output;
    }
    write_report(report, json{{"command", "cluster"},
                              {"inputs", inputs},
                              {"k", k},
                              {"seed", seed},
                              {"divergence", config.divergence.name()},
                              {"centroid_updates", !seeding_only},
                              {"assignment", r.assignment},
                              {"seeds", r.seeds},
                              {"objective_trace", numbers(r.objective_trace)},
                              {"rounds", r.rounds},
                              {"reseeded", r.reseeded},
                              {"converged", r.converged},
                              {"outputs", outputs}});
    return kExitOk;
  }
};

// Deterministic test images whose grey histogram follows a Gaussian mixture
// restricted to a level range.
struct SynthCommand {
  std::size_t width = 128;
  std::size_t height = 128;
  std::vector<std::string> modes;
  std::vector<int> range{0, 255};
  std::string output;

  void attach(CLI::App& app) {
    auto* cmd = app.add_subcommand("synth", "write a synthetic PGM with a mixture-shaped histogram");
    cmd->add_option("--width", width)->capture_default_str();
    cmd->add_option("--height", height)->capture_default_str();
    cmd->add_option("--mode", modes, "mean,sd,weight (repeatable)")->required();
    cmd->add_option("--range", range, "lowest,highest grey level used")->delimiter(',')->expected(2);
    cmd->add_option("-o,--output", output, "output PGM")->required();
  }

  int run(std::ostream& out) const {
    if (width == 0 || height == 0) throw std::invalid_argument("synth: empty image");
    if (range.size() != 2 || range[0] < 0 || range[1] > 255 || range[0] > range[1]) {
      throw std::invalid_argument("synth: --range must satisfy 0 <= lo <= hi <= 255");
    }
    struct Mode {
      double mean, sd, weight;
    };
    std::vector<Mode> mixture;
    for (const auto& text : modes) {
      std::vector<double> v;
      std::stringstream s(text);
      std::string field;
      while (std::getline(s, field, ',')) {
        try {
          v.push_back(std::stod(field));
        } catch (const std::exception&) {
          throw ParseError("synth: bad --mode '" + text + "'");
        }
      }
      if (v.size() != 3) throw ParseError("synth: --mode needs mean,sd,weight");
      if (!(v[1] > 0.0) || !(v[2] > 0.0)) throw std::invalid_argument("synth: sd and weight must be positive");
      mixture.push_back({v[0], v[1], v[2]});
    }

    std::vector<double> pmf(256, 0.0);
    double total = 0.0;
    for (int g = range[0]; g <= range[1]; ++g) {
      for (const auto& m : mixture) {
        const double z = (g - m.mean) / m.sd;
        pmf[g] += m.weight * std::exp(-0.5 * z * z) / m.sd;
      }
      total += pmf[g];
    }
    if (!(total > 0.0)) throw std::invalid_argument("synth: mixture has no mass in --range");

    // Largest-remainder rounding to exactly width * height pixels.
    const std::size_t pixels = width * height;
    std::vector<std::size_t> counts(256, 0);
    std::vector<std::pair<double, int>> remainders;
    std::size_t assigned = 0;
    for (int g = 0; g < 256; ++g) {
      const double exact = pmf[g] / total * static_cast<double>(pixels);
      counts[g] = static_cast<std::size_t>(std::floor(exact));
      assigned += counts[g];
      if (pmf[g] > 0.0) remainders.emplace_back(exact - std::floor(exact), g);
    }
    std::stable_sort(remainders.begin(), remainders.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    for (std::size_t i = 0; assigned < pixels; ++i, ++assigned) ++counts[remainders[i % remainders.size()].second];

    GreyImage image{width, height, 255, {}};
    image.pixels.reserve(pixels);
    for (int g = 0; g < 256; ++g) image.pixels.insert(image.pixels.end(), counts[g], static_cast<std::uint16_t>(g));
    std::ofstream f(output, std::ios::binary);
    if (!f) throw std::invalid_argument("cannot write " + output);
    write_pgm(f, image);
    out << "wrote " << output << '\n';
    return kExitOk;
  }
};

}  // namespace

int run_cli(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Jensen-Shannon divergences, centroids and clustering of histograms"};
  app.name("skewjs");
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "help for every subcommand");

  DivCommand div;
  CentroidCommand centroid;
  HistCommand hist;
  ClusterCommand cluster;
  SynthCommand synth;
  div.attach(app);
  centroid.attach(app);
  hist.attach(app);
  cluster.attach(app);
  synth.attach(app);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitParse;
  }

  try {
    if (app.got_subcommand("div")) return div.run(out);
    if (app.got_subcommand("centroid")) return centroid.run(out);
    if (app.got_subcommand("hist")) return hist.run(out);
    if (app.got_subcommand("cluster")) return cluster.run(out);
    if (app.got_subcommand("synth")) return synth.run(out);
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitParse;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitSemantic;
  }
  return kExitSemantic;
}

}  // namespace skewjs::cli
