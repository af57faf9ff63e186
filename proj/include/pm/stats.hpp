// Summary statistics and the hypothesis test used by the benchmark reports.
// The Student-t CDF is evaluated through the regularized incomplete beta
// function so the toolkit has no statistics dependency.
#pragma once

#include <vector>

namespace pm {

// 99.5% standard-normal quantile, fixed at 4 decimals; shared by the 99%
// confidence intervals and the sample-size budgets.
inline constexpr double kZ995 = 2.5758;

double mean(const std::vector<double>& xs);
double sample_stddev(const std::vector<double>& xs);  // ddof = 1; 0 for n < 2
double median(std::vector<double> xs);

// Regularized incomplete beta I_x(a, b), continued-fraction evaluation.
double reg_inc_beta(double a, double b, double x);

// P(T <= t) for Student's t with df degrees of freedom.
double student_t_cdf(double df, double t);

struct WelchResult {
  double t = 0.0;
  double df = 0.0;
  double p = 0.5;  // one-sided: P(observing a gap this negative) under equal means
};

// Tests H1: mean(a) < mean(b). Degenerate zero-variance cases resolve by the
// sign of the mean difference (equal means give 0.5).
WelchResult welch_one_sided(const std::vector<double>& a, const std::vector<double>& b);

// Half-width of the 99% normal-approximation confidence interval.
double ci99_half_width(const std::vector<double>& xs);

struct WaldBudget {
  long per_class = 0;
  long total = 0;
};

// Sample size for estimating a proportion near p_bar = (10/C)% within margin
// E = tau/10 at 99% confidence, plus the strategy's initialization rounds.
WaldBudget wald_budget(double tau, int C, double zeta = 0.01, int n_actions = 2);

}  // namespace pm
