// Result types for the predictor variance decomposition. Kept free of any
// model dependency so basis recommendation can consume reports directly.
#pragma once

#include <string>
#include <utility>
#include <vector>

namespace pisur {

struct EffectPoint {
  double x = 0;        // input value (original units)
  double effect = 0;   // centered main effect (original output units)
  double lo = 0;       // approximate pointwise 95% band
  double hi = 0;
};

struct EffectCurve {
  std::string input;
  std::vector<EffectPoint> points;
};

struct FanovaReport {
  double total_variance = 0;  // predictor variance under uniform weights
  std::vector<std::pair<std::string, double>> main_percent;  // by input, declaration order
  std::vector<std::pair<std::pair<std::string, std::string>, double>> pair_percent;
  double residual_percent = 0;  // higher-order remainder, lumped
  std::vector<EffectCurve> curves;
  std::string metadata;

  double main_effect(const std::string& input) const;  // throws UnknownInput
  bool covers(const std::vector<std::string>& inputs) const;

  /// "input,percent" rows sorted descending; pairs as "a:b".
  std::string percentages_csv() const;
  static std::string curve_csv(const EffectCurve& curve);
};

}  // namespace pisur
