#include "pm/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pm {

double mean(const std::vector<double>& xs) {
  if (xs.empty()) throw std::invalid_argument("mean: empty sample");
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

double sample_stddev(const std::vector<double>& xs) {
  if (xs.size() < 2) return 0.0;
  double m = mean(xs), s = 0.0;
  for (double x : xs) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(xs.size() - 1));
}

double median(std::vector<double> xs) {
  if (xs.empty()) throw std::invalid_argument("median: empty sample");
  std::sort(xs.begin(), xs.end());
  std::size_t n = xs.size();
  return n % 2 ? xs[n / 2] : 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
}

namespace {

// Lentz continued fraction for the incomplete beta; converges quickly for
// x < (a+1)/(a+b+2), which the caller guarantees via the symmetry transform.
double betacf(double a, double b, double x) {
  constexpr int kMaxIter = 300;
  constexpr double kEps = 3e-16;
  constexpr double kTiny = 1e-300;
  double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0, d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) break;
  }
  return h;
}

}  // namespace

double reg_inc_beta(double a, double b, double x) {
  if (!(a > 0.0 && b > 0.0)) throw std::invalid_argument("reg_inc_beta: a, b must be positive");
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                    a * std::log(x) + b * std::log1p(-x);
  double front = std::exp(ln_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * betacf(a, b, x) / a;
  return 1.0 - front * betacf(b, a, 1.0 - x) / b;
}

double student_t_cdf(double df, double t) {
  if (!(df > 0.0)) throw std::invalid_argument("student_t_cdf: df must be positive");
  if (t == 0.0) return 0.5;
  double tail = 0.5 * reg_inc_beta(0.5 * df, 0.5, df / (df + t * t));
  return t > 0.0 ? 1.0 - tail : tail;
}

WelchResult welch_one_sided(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() < 2 || b.size() < 2)
    throw std::invalid_argument("welch_one_sided: need at least two observations per sample");
  double ma = mean(a), mb = mean(b);
  double va = sample_stddev(a), vb = sample_stddev(b);
  va *= va;
  vb *= vb;
  double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  double se2 = va / na + vb / nb;
  WelchResult r;
  if (se2 <= 0.0) {
    r.p = ma < mb ? 0.0 : (ma > mb ? 1.0 : 0.5);
    r.df = na + nb - 2.0;
    return r;
  }
  r.t = (ma - mb) / std::sqrt(se2);
  r.df = se2 * se2 /
         ((va / na) * (va / na) / (na - 1.0) + (vb / nb) * (vb / nb) / (nb - 1.0));
  r.p = student_t_cdf(r.df, r.t);
  return r;
}

double ci99_half_width(const std::vector<double>& xs) {
  if (xs.empty()) throw std::invalid_argument("ci99_half_width: empty sample");
  return kZ995 * sample_stddev(xs) / std::sqrt(static_cast<double>(xs.size()));
}

WaldBudget wald_budget(double tau, int C, double zeta, int n_actions) {
  if (!(tau > 0.0 && tau < 1.0)) throw std::invalid_argument("wald_budget: tau must lie in (0,1)");
  if (C < 1) throw std::invalid_argument("wald_budget: C must be positive");
  if (std::abs(zeta - 0.01) > 1e-12)
    throw std::invalid_argument("wald_budget: only the 99% level (zeta=0.01) is tabulated");
  double p_bar = (10.0 / C) / 100.0;
  double E = tau / 10.0;
  double n = kZ995 * kZ995 * p_bar * (1.0 - p_bar) / (E * E);
  WaldBudget w;
  w.per_class = static_cast<long>(std::ceil(n)) + n_actions;
  w.total = w.per_class * C;
  return w;
}

}  // namespace pm
