#pragma once

// Independent reference computations used by the unit and acceptance tests.
// Nothing here calls into the library code it is checking.

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <span>
#include <vector>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "chordtension/score_ingest.h"

namespace chordtension::oracle {

/// onset -> sorted pitches sounding there, by scanning every (event, onset) pair.
inline std::map<Time, std::vector<int>> soundingAtOnsets(const std::vector<NoteEvent>& events) {
  std::set<Time> onsets;
  for (const auto& e : events) onsets.insert(e.onset);
  std::map<Time, std::vector<int>> out;
  for (const Time& t : onsets) {
    auto& pitches = out[t];
    for (const auto& e : events) {
      if (e.onset <= t && t < e.onset + e.duration) pitches.push_back(e.pitch);
    }
    std::sort(pitches.begin(), pitches.end());
  }
  return out;
}

inline double logSigmoid(double x) { return -std::log(1.0 + std::exp(-x)); }

/// CBOW negative-sampling loss evaluated directly in double precision.
inline double cbowLoss(const std::vector<double>& input, const std::vector<double>& output, std::size_t dim,
                       const std::vector<int>& context, int target, const std::vector<int>& negatives) {
  std::vector<double> h(dim, 0.0);
  for (int c : context) {
    for (std::size_t d = 0; d < dim; ++d) h[d] += input[static_cast<std::size_t>(c) * dim + d];
  }
  for (auto& v : h) v /= static_cast<double>(context.size());
  auto score = [&](int id) {
    double s = 0;
    for (std::size_t d = 0; d < dim; ++d) s += output[static_cast<std::size_t>(id) * dim + d] * h[d];
    return s;
  };
  double loss = -logSigmoid(score(target));
  for (int n : negatives) loss -= logSigmoid(-score(n));
  return loss;
}

inline double decayWeight(int i, int n) {
  if (i == 1) return 1.0;
  return 1.0 - std::exp(1.0 - static_cast<double>(n) / (i - 1));
}

inline double cosine(std::span<const float> a, std::span<const float> b) {
  double ab = 0, aa = 0, bb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ab += double(a[i]) * b[i];
    aa += double(a[i]) * a[i];
    bb += double(b[i]) * b[i];
  }
  return ab / std::sqrt(aa * bb);
}

/// Student t CDF by numerical integration of the density.
inline double studentTCdf(double x, double df) {
  using boost::math::lgamma;
  const double log_c = lgamma((df + 1) / 2) - lgamma(df / 2) - 0.5 * std::log(df * M_PI);
  auto density = [&](double u) { return std::exp(log_c - (df + 1) / 2 * std::log1p(u * u / df)); };
  boost::math::quadrature::tanh_sinh<double> integrator;
  const double half = integrator.integrate(density, 0.0, std::fabs(x));
  return x >= 0 ? 0.5 + half : 0.5 - half;
}

/// Upper tail of the F distribution by numerical integration of the density.
inline double fSurvival(double x, double d1, double d2) {
  using boost::math::lgamma;
  const double log_c = lgamma((d1 + d2) / 2) - lgamma(d1 / 2) - lgamma(d2 / 2) + d1 / 2 * std::log(d1 / d2);
  auto density = [&](double u) {
    return std::exp(log_c + (d1 / 2 - 1) * std::log(u) - (d1 + d2) / 2 * std::log1p(d1 * u / d2));
  };
  boost::math::quadrature::exp_sinh<double> integrator;
  return integrator.integrate([&](double s) { return density(x + s); });
}

}  // namespace chordtension::oracle
