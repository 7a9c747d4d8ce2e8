#include "netsample/estimators.hpp"

#include "netsample/errors.hpp"

namespace netsample {

double sample_mean(std::span<const double> y) {
  if (y.empty()) throw ValidationError("sample_mean of an empty sample");
  double acc = 0.0;
  for (double v : y) acc += v;
  return acc / static_cast<double>(y.size());
}

double sample_mean(const WalkSample& ws) { return sample_mean(ws.y); }

double vh_estimator(const WalkSample& ws) {
  if (ws.degrees.size() != ws.y.size() || ws.y.empty())
    throw ValidationError("vh_estimator needs one degree per observation");
  double num = 0.0, den = 0.0;
  for (std::size_t t = 0; t < ws.y.size(); ++t) {
    if (!(ws.degrees[t] > 0.0)) throw ValidationError("vh_estimator: sampled node has zero degree");
    num += ws.y[t] / ws.degrees[t];
    den += 1.0 / ws.degrees[t];
  }
  return num / den;
}

double vh_estimator_known_normalizer(const WalkSample& ws, double total_degree,
                                     std::size_t population) {
  if (ws.degrees.size() != ws.y.size() || ws.y.empty())
    throw ValidationError("vh_estimator needs one degree per observation");
  double acc = 0.0;
  for (std::size_t t = 0; t < ws.y.size(); ++t) {
    if (!(ws.degrees[t] > 0.0)) throw ValidationError("vh_estimator: sampled node has zero degree");
    acc += ws.y[t] / (ws.degrees[t] / total_degree * static_cast<double>(population));
  }
  return acc / static_cast<double>(ws.y.size());
}

double ht_estimator(const WalkSample& ws, std::span<const double> pi, std::size_t population) {
  if (ws.y.empty()) throw ValidationError("ht_estimator of an empty sample");
  double acc = 0.0;
  for (std::size_t t = 0; t < ws.y.size(); ++t) {
    const NodeId x = ws.states[t];
    if (x >= pi.size()) throw ValidationError("ht_estimator: state outside pi");
    if (!(pi[x] > 0.0)) throw ValidationError("ht_estimator: sampled node has pi = 0");
    acc += ws.y[t] / (pi[x] * static_cast<double>(population));
  }
  return acc / static_cast<double>(ws.y.size());
}

NodeFeature pi_transform(const NodeFeature& y, std::span<const double> pi, std::size_t population) {
  if (pi.size() != y.size()) throw ValidationError("pi_transform: length mismatch");
  NodeFeature out{std::vector<double>(y.size()), y.name + "_pi"};
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (!(pi[i] > 0.0)) throw ValidationError("pi_transform: pi has a zero entry");
    out.values[i] = y.values[i] / (pi[i] * static_cast<double>(population));
  }
  return out;
}

}  // namespace netsample
