#pragma once

#include <memory>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "skewjs/divergences.hpp"
#include "skewjs/simplex.hpp"

namespace skewjs {

/// A divergence chosen at run time, with its parameters validated once at
/// construction. Used by clustering and the command-line front end.
class DivergenceKind {
 public:
  struct KL {};
  struct KLPlus {};
  struct Jeffreys {};
  struct JS {};
  struct SkewK {
    double alpha;
  };
  struct SkewJSAsym {
    double alpha;
  };
  struct SkewJSSym {
    double alpha;
  };
  struct VectorSkewJS {
    SkewProfile profile;
  };
  struct SymVectorSkewJS {
    SkewProfile profile;
  };
  struct KLAlphaBeta {
    double alpha;
    double beta;
  };
  struct BiVectorSkew {
    std::shared_ptr<const DivergenceKind> base;
    std::vector<double> alpha;
    std::vector<double> beta;
    std::vector<double> weights;
  };
  struct MeanSymmetrizedKL {
    SymmetrizingMean mean;
  };

  using Variant = std::variant<KL, KLPlus, Jeffreys, JS, SkewK, SkewJSAsym, SkewJSSym, VectorSkewJS,
                               SymVectorSkewJS, KLAlphaBeta, BiVectorSkew, MeanSymmetrizedKL>;

  /// Throws std::invalid_argument on out-of-range parameters.
  DivergenceKind(Variant kind);  // NOLINT(google-explicit-constructor)
  template <class Alternative>
    requires(!std::is_same_v<std::remove_cvref_t<Alternative>, DivergenceKind> &&
             !std::is_same_v<std::remove_cvref_t<Alternative>, Variant> &&
             std::is_constructible_v<Variant, Alternative>)
  DivergenceKind(Alternative&& kind)  // NOLINT(google-explicit-constructor)
      : DivergenceKind(Variant(std::forward<Alternative>(kind))) {}

  [[nodiscard]] double operator()(const DiscreteDensity& p, const DiscreteDensity& q) const;
  [[nodiscard]] std::string name() const;
  [[nodiscard]] const Variant& kind() const noexcept { return kind_; }

 private:
  Variant kind_;
};

[[nodiscard]] std::string to_string(SymmetrizingMean mean);
/// "arithmetic", "harmonic", "min", "max".
[[nodiscard]] SymmetrizingMean parse_symmetrizing_mean(const std::string& text);

}  // namespace skewjs
