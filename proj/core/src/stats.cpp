#include "chordtension/stats.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <boost/math/special_functions/beta.hpp>
#include <json.hpp>

#include "chordtension/error.h"

namespace chordtension::stats {

namespace {

double mean(std::span<const double> x) {
  return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

void requireSamples(std::span<const double> x, std::size_t minimum, const char* what) {
  if (x.size() < minimum) {
    throw Error(ErrorCode::TooFewSamples, std::string(what) + " needs at least " + std::to_string(minimum) +
                                              " samples, got " + std::to_string(x.size()));
  }
}

TestResult finish(TestResult r, double alpha_effective) {
  r.p_value = std::clamp(r.p_value, 0.0, 1.0);
  r.alpha_effective = alpha_effective;
  r.significant = r.p_value < alpha_effective;
  return r;
}

}  // namespace

// ---------------------------------------------------------------------------
// Descriptives
// ---------------------------------------------------------------------------

double sampleVariance(std::span<const double> samples) {
  requireSamples(samples, 2, "variance");
  const double m = mean(samples);
  double ss = 0;
  for (double v : samples) ss += (v - m) * (v - m);
  return ss / static_cast<double>(samples.size() - 1);
}

MeanSe meanSe(std::span<const double> samples) {
  requireSamples(samples, 2, "mean/se");
  const double n = static_cast<double>(samples.size());
  return MeanSe{mean(samples), std::sqrt(sampleVariance(samples) / n), samples.size()};
}

double bonferroni(double alpha, std::size_t comparisons) {
  if (comparisons == 0) throw Error(ErrorCode::InvalidConfig, "Bonferroni correction over zero comparisons");
  return alpha / static_cast<double>(comparisons);
}

// ---------------------------------------------------------------------------
// Distributions
// ---------------------------------------------------------------------------

double incompleteBeta(double a, double b, double x) {
  if (!(a > 0) || !(b > 0)) throw Error(ErrorCode::InvalidConfig, "incomplete beta needs a, b > 0");
  if (x <= 0) return 0.0;
  if (x >= 1) return 1.0;
  return boost::math::ibeta(a, b, x);
}

double studentTTwoSided(double t, double df) {
  if (std::isnan(t)) return std::numeric_limits<double>::quiet_NaN();
  if (std::isinf(t)) return 0.0;
  return incompleteBeta(df / 2.0, 0.5, df / (df + t * t));
}

double studentTCdf(double t, double df) {
  if (std::isinf(t)) return t > 0 ? 1.0 : 0.0;
  const double tail = 0.5 * studentTTwoSided(t, df);
  return t > 0 ? 1.0 - tail : tail;
}

double fCdf(double f, double df1, double df2) {
  if (f <= 0) return 0.0;
  if (std::isinf(f)) return 1.0;
  return incompleteBeta(df1 / 2.0, df2 / 2.0, df1 * f / (df1 * f + df2));
}

double fSurvival(double f, double df1, double df2) {
  if (f <= 0) return 1.0;
  if (std::isinf(f)) return 0.0;
  return incompleteBeta(df2 / 2.0, df1 / 2.0, df2 / (df2 + df1 * f));
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------

TestResult welchT(std::span<const double> a, std::span<const double> b, double alpha_effective) {
  requireSamples(a, 2, "welch_t");
  requireSamples(b, 2, "welch_t");
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  const double va = sampleVariance(a) / na;
  const double vb = sampleVariance(b) / nb;
  const double diff = mean(a) - mean(b);

  TestResult r;
  r.test = "welch_t";
  const double se2 = va + vb;
  if (se2 == 0) {
    // Both groups constant: the statistic is 0 or infinite.
    r.df = na + nb - 2;
    r.statistic = diff == 0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), diff);
    r.p_value = diff == 0 ? 1.0 : 0.0;
    return finish(r, alpha_effective);
  }
  r.statistic = diff / std::sqrt(se2);
  r.df = se2 * se2 / (va * va / (na - 1) + vb * vb / (nb - 1));
  r.p_value = studentTTwoSided(r.statistic, r.df);
  return finish(r, alpha_effective);
}

TestResult pooledT(std::span<const double> a, std::span<const double> b, double alpha_effective) {
  requireSamples(a, 2, "pooled_t");
  requireSamples(b, 2, "pooled_t");
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  const double df = na + nb - 2;
  const double sp2 = ((na - 1) * sampleVariance(a) + (nb - 1) * sampleVariance(b)) / df;
  const double diff = mean(a) - mean(b);

  TestResult r;
  r.test = "pooled_t";
  r.df = df;
  const double se = std::sqrt(sp2 * (1 / na + 1 / nb));
  if (se == 0) {
    r.statistic = diff == 0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), diff);
    r.p_value = diff == 0 ? 1.0 : 0.0;
    return finish(r, alpha_effective);
  }
  r.statistic = diff / se;
  r.p_value = studentTTwoSided(r.statistic, df);
  return finish(r, alpha_effective);
}

AnovaResult onewayAnova(const std::vector<std::vector<double>>& groups, double alpha_effective) {
  if (groups.size() < 2) throw Error(ErrorCode::TooFewGroups, "one-way ANOVA needs at least 2 groups");
  for (const auto& g : groups) {
    if (g.size() < 2) throw Error(ErrorCode::TooFewGroups, "every ANOVA group needs at least 2 samples");
  }
  double total = 0;
  std::size_t n = 0;
  for (const auto& g : groups) {
    total += std::accumulate(g.begin(), g.end(), 0.0);
    n += g.size();
  }
  const double grand = total / static_cast<double>(n);

  AnovaResult out;
  for (const auto& g : groups) {
    const double m = mean(g);
    out.ss_between += static_cast<double>(g.size()) * (m - grand) * (m - grand);
    for (double v : g) out.ss_within += (v - m) * (v - m);
  }
  const double df1 = static_cast<double>(groups.size() - 1);
  const double df2 = static_cast<double>(n - groups.size());

  TestResult r;
  r.test = "anova";
  r.df = df2;
  r.df_between = df1;
  if (out.ss_within == 0) {
    r.statistic = out.ss_between == 0 ? 0.0 : std::numeric_limits<double>::infinity();
    r.p_value = out.ss_between == 0 ? 1.0 : 0.0;
  } else {
    r.statistic = (out.ss_between / df1) / (out.ss_within / df2);
    r.p_value = fSurvival(r.statistic, df1, df2);
  }
  const double ss_sum = out.ss_between + out.ss_within;
  out.partial_eta_squared = ss_sum == 0 ? 0.0 : out.ss_between / ss_sum;
  out.test = finish(r, alpha_effective);
  return out;
}

std::vector<TestResult> trendContrast(const std::vector<std::vector<double>>& groups, double alpha,
                                      std::size_t family_size) {
  if (groups.size() < 2) throw Error(ErrorCode::TooFewGroups, "trend contrast needs at least 2 groups");
  const std::size_t pairs = groups.size() - 1;
  const double alpha_effective = bonferroni(alpha, family_size == 0 ? pairs : family_size);
  std::vector<TestResult> out;
  out.reserve(pairs);
  for (std::size_t i = 0; i < pairs; ++i) {
    TestResult r = welchT(groups[i], groups[i + 1], alpha_effective);
    r.test = "trend_contrast";
    out.push_back(std::move(r));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Report
// ---------------------------------------------------------------------------

namespace {
nlohmann::json finiteOrString(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}
}  // namespace

std::string toJson(const TestResult& r, int indent) {
  nlohmann::ordered_json j;
  j["test"] = r.test;
  j["groups"] = r.groups;
  j["statistic"] = finiteOrString(r.statistic);
  if (r.df_between) {
    j["df"] = nlohmann::ordered_json::array({*r.df_between, r.df});
  } else {
    j["df"] = r.df;
  }
  j["p"] = r.p_value;
  j["alpha_effective"] = r.alpha_effective;
  j["significant"] = r.significant;
  return j.dump(indent);
}

}  // namespace chordtension::stats
