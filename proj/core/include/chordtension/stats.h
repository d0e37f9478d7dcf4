#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace chordtension::stats {

struct MeanSe {
  double mean = 0;
  double se = 0;  // sample sd / sqrt(n)
  std::size_t n = 0;
};

MeanSe meanSe(std::span<const double> samples);
double sampleVariance(std::span<const double> samples);

struct TestResult {
  std::string test;                 // "welch_t", "pooled_t", "anova", ...
  std::vector<std::string> groups;  // labels, filled in by callers that know them
  double statistic = 0;
  double df = 0;                      // t df, or the within-groups df for F
  std::optional<double> df_between;   // F numerator df
  double p_value = 1;
  double alpha_effective = 0.05;
  bool significant = false;           // p_value < alpha_effective
};

/// alpha / comparisons.
double bonferroni(double alpha, std::size_t comparisons);

/// Unequal-variance t test with Welch-Satterthwaite df and a two-sided p.
/// The statistic is (mean(a) - mean(b)) / se, so a < b gives t < 0.
TestResult welchT(std::span<const double> a, std::span<const double> b, double alpha_effective = 0.05);

/// Classical pooled-variance two-sample t test (df = na + nb - 2).
TestResult pooledT(std::span<const double> a, std::span<const double> b, double alpha_effective = 0.05);

struct AnovaResult {
  TestResult test;
  double ss_between = 0;
  double ss_within = 0;
  double partial_eta_squared = 0;  // SS_between / (SS_between + SS_within)
};

AnovaResult onewayAnova(const std::vector<std::vector<double>>& groups, double alpha_effective = 0.05);

/// Successive-pair Welch comparisons (group i vs i+1) over groups given in
/// their predicted order. Alpha is Bonferroni-corrected over
/// `family_size` comparisons; 0 means the number of pairs.
std::vector<TestResult> trendContrast(const std::vector<std::vector<double>>& groups, double alpha = 0.05,
                                      std::size_t family_size = 0);

// ---------------------------------------------------------------------------
// Distribution functions
// ---------------------------------------------------------------------------

/// Regularized incomplete beta I_x(a, b).
double incompleteBeta(double a, double b, double x);

double studentTCdf(double t, double df);
/// P(|T| >= |t|).
double studentTTwoSided(double t, double df);

double fCdf(double f, double df1, double df2);
/// P(F >= f).
double fSurvival(double f, double df1, double df2);

/// {test, groups, statistic, df, p, alpha_effective, significant}; df is an
/// array [between, within] for F tests.
std::string toJson(const TestResult& result, int indent = -1);

}  // namespace chordtension::stats
