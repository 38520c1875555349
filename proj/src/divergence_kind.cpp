#include "skewjs/divergence_kind.hpp"

#include <cstdio>
#include <stdexcept>

namespace skewjs {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

std::string fmt(std::span<const double> xs) {
  std::string out = "(";
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i > 0) out += ",";
    out += fmt(xs[i]);
  }
  return out + ")";
}

void check_open(double a, const char* what) {
  if (!(a > 0.0 && a < 1.0)) throw std::invalid_argument(std::string(what) + ": skew must lie in (0,1)");
}

void check_closed(double a, const char* what) {
  if (!(a >= 0.0 && a <= 1.0)) throw std::invalid_argument(std::string(what) + ": skew must lie in [0,1]");
}

}  // namespace

DivergenceKind::DivergenceKind(Variant kind) : kind_(std::move(kind)) {
  std::visit(Overloaded{
                 [](const SkewK& k) { check_closed(k.alpha, "skew-k"); },
                 [](const SkewJSAsym& k) { check_open(k.alpha, "skew-js-asym"); },
                 [](const SkewJSSym& k) { check_open(k.alpha, "skew-js-sym"); },
                 [](const VectorSkewJS& k) { k.profile.require_interior_mean(); },
                 [](const KLAlphaBeta& k) {
                   check_closed(k.alpha, "kl-alpha-beta");
                   check_open(k.beta, "kl-alpha-beta");
                   if (k.alpha == k.beta) {
                     throw std::invalid_argument("kl-alpha-beta: alpha must differ from beta");
                   }
                 },
                 [](const BiVectorSkew& k) {
                   if (!k.base) throw std::invalid_argument("bi-vector-skew: missing base divergence");
                   if (k.alpha.empty() || k.alpha.size() != k.beta.size() ||
                       k.alpha.size() != k.weights.size()) {
                     throw std::invalid_argument(
                         "bi-vector-skew: alpha, beta and weights need equal non-zero length");
                   }
                   if (k.alpha == k.beta) throw std::invalid_argument("bi-vector-skew: alpha must differ from beta");
                   for (std::size_t i = 0; i < k.alpha.size(); ++i) {
                     check_closed(k.alpha[i], "bi-vector-skew");
                     check_closed(k.beta[i], "bi-vector-skew");
                     if (!(k.weights[i] > 0.0)) {
                       throw std::invalid_argument("bi-vector-skew: weights must be positive");
                     }
                   }
                 },
                 [](const auto&) {},
             },
             kind_);
}

double DivergenceKind::operator()(const DiscreteDensity& p, const DiscreteDensity& q) const {
  return std::visit(
      Overloaded{
          [&](const KL&) { return kl(p, q); },
          [&](const KLPlus&) { return kl_plus(PositiveDensity(p), PositiveDensity(q)); },
          [&](const Jeffreys&) { return jeffreys(p, q); },
          [&](const JS&) { return js(p, q); },
          [&](const SkewK& k) { return skew_k(p, q, k.alpha); },
          [&](const SkewJSAsym& k) { return skew_js_asym(p, q, k.alpha); },
          [&](const SkewJSSym& k) { return skew_js_sym(p, q, k.alpha); },
          [&](const VectorSkewJS& k) { return vector_skew_js(p, q, k.profile); },
          [&](const SymVectorSkewJS& k) { return sym_vector_skew_js(p, q, k.profile); },
          [&](const KLAlphaBeta& k) { return kl_alpha_beta(p, q, k.alpha, k.beta); },
          [&](const BiVectorSkew& k) {
            const DivergenceKind& base = *k.base;
            return bi_vector_skew(
                p, q, [&base](const DiscreteDensity& a, const DiscreteDensity& b) { return base(a, b); },
                k.alpha, k.beta, k.weights);
          },
          [&](const MeanSymmetrizedKL& k) { return mean_symmetrized_kl(p, q, k.mean); },
      },
      kind_);
}

std::string DivergenceKind::name() const {
  return std::visit(
      Overloaded{
          [](const KL&) -> std::string { return "kl"; },
          [](const KLPlus&) -> std::string { return "kl+"; },
          [](const Jeffreys&) -> std::string { return "jeffreys"; },
          [](const JS&) -> std::string { return "js"; },
          [](const SkewK& k) { return "skew-k(" + fmt(k.alpha) + ")"; },
          [](const SkewJSAsym& k) { return "skew-js-asym(" + fmt(k.alpha) + ")"; },
          [](const SkewJSSym& k) { return "skew-js-sym(" + fmt(k.alpha) + ")"; },
          [](const VectorSkewJS& k) {
            return "vskew-js(" + fmt(k.profile.alpha()) + ";" + fmt(k.profile.weights()) + ")";
          },
          [](const SymVectorSkewJS& k) {
            return "sym-vskew-js(" + fmt(k.profile.alpha()) + ";" + fmt(k.profile.weights()) + ")";
          },
          [](const KLAlphaBeta& k) { return "kl-alpha-beta(" + fmt(k.alpha) + "," + fmt(k.beta) + ")"; },
          [](const BiVectorSkew& k) {
            return "bi-vskew[" + k.base->name() + "](" + fmt(k.alpha) + ";" + fmt(k.beta) + ";" +
                   fmt(k.weights) + ")";
          },
          [](const MeanSymmetrizedKL& k) { return "kl-" + to_string(k.mean); },
      },
      kind_);
}

std::string to_string(SymmetrizingMean mean) {
  switch (mean) {
    case SymmetrizingMean::arithmetic:
      return "arithmetic";
    case SymmetrizingMean::harmonic:
      return "harmonic";
    case SymmetrizingMean::min:
      return "min";
    case SymmetrizingMean::max:
      return "max";
  }
  return "unknown";
}

SymmetrizingMean parse_symmetrizing_mean(const std::string& text) {
  if (text == "arithmetic") return SymmetrizingMean::arithmetic;
  if (text == "harmonic") return SymmetrizingMean::harmonic;
  if (text == "min") return SymmetrizingMean::min;
  if (text == "max") return SymmetrizingMean::max;
  throw std::invalid_argument("unknown symmetrizing mean '" + text + "'");
}

}  // namespace skewjs
