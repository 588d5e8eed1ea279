// scorelens/src/stats.cc
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#include "scorelens/stats.h"

#include <cmath>
#include <limits>

#include "scorelens/error.h"

namespace scorelens {

double SampleMean(std::span<const double> x) {
  if (x.empty()) throw StatError("mean of empty vector");
  long double s = 0.0L;
  for (double v : x) s += v;
  return static_cast<double>(s / x.size());
}

double SampleSd(std::span<const double> x) {
  if (x.size() < 2) throw StatError("sd needs at least 2 values");
  double m = SampleMean(x);
  long double s = 0.0L;
  for (double v : x) s += (v - m) * (v - m);
  return std::sqrt(static_cast<double>(s / (x.size() - 1)));
}

double Skewness(std::span<const double> x) {
  double m = SampleMean(x);
  long double m2 = 0.0L, m3 = 0.0L;
  for (double v : x) {
    double d = v - m;
    m2 += d * d;
    m3 += d * d * d;
  }
  double n = static_cast<double>(x.size());
  double s2 = static_cast<double>(m2) / n;
  if (s2 <= 0.0) throw StatError("skewness of constant vector");
  return (static_cast<double>(m3) / n) / std::pow(s2, 1.5);
}

double ExcessKurtosis(std::span<const double> x) {
  double m = SampleMean(x);
  long double m2 = 0.0L, m4 = 0.0L;
  for (double v : x) {
    double d = v - m;
    m2 += d * d;
    m4 += d * d * d * d;
  }
  double n = static_cast<double>(x.size());
  double s2 = static_cast<double>(m2) / n;
  if (s2 <= 0.0) throw StatError("kurtosis of constant vector");
  return (static_cast<double>(m4) / n) / (s2 * s2) - 3.0;
}

double Pearson(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw StatError("pearson: length mismatch");
  if (a.size() < 2) throw StatError("pearson: need at least 2 points");
  double ma = SampleMean(a), mb = SampleMean(b);
  long double saa = 0.0L, sbb = 0.0L, sab = 0.0L;
  for (size_t i = 0; i < a.size(); ++i) {
    double da = a[i] - ma, db = b[i] - mb;
    saa += da * da;
    sbb += db * db;
    sab += da * db;
  }
  if (saa <= 0.0L || sbb <= 0.0L)
    throw StatError("pearson: undefined correlation for constant input");
  return static_cast<double>(sab / std::sqrt(static_cast<double>(saa) *
                                             static_cast<double>(sbb)));
}

double NormalCdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// AS241 (Wichura 1988), PPND16 variant.
double InverseNormalCdf(double p) {
  if (!(p > 0.0 && p < 1.0))
    throw StatError("inverse normal cdf: p must lie in (0,1)");
  double q = p - 0.5;
  double r;
  if (std::fabs(q) <= 0.425) {
    r = 0.180625 - q * q;
    return q *
           (((((((2.5090809287301226727e3 * r + 3.3430575583588128105e4) * r +
                 6.7265770927008700853e4) *
                    r +
                4.5921953931549871457e4) *
                   r +
               1.3731693765509461125e4) *
                  r +
              1.9715909503065514427e3) *
                 r +
             1.3314166789178437745e2) *
                r +
            3.3871328727963666080e0) /
           (((((((5.2264952788528545610e3 * r + 2.8729085735721942674e4) * r +
                 3.9307895800092710610e4) *
                    r +
                2.1213794301586595867e4) *
                   r +
               5.3941960214247511077e3) *
                  r +
              6.8718700749205790830e2) *
                 r +
             4.2313330701600911252e1) *
                r +
            1.0);
  }
  r = (q < 0.0) ? p : 1.0 - p;
  r = std::sqrt(-std::log(r));
  double val;
  if (r <= 5.0) {
    r -= 1.6;
    val = (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) *
                    r +
                2.41780725177450611770e-1) *
                   r +
               1.27045825245236838258e0) *
                  r +
              3.64784832476320460504e0) *
                 r +
             5.76949722146069140550e0) *
                r +
            4.63033784615654529590e0) *
               r +
           1.42343711074968357734e0) /
          (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) *
                    r +
                1.51986665636164571966e-2) *
                   r +
               1.48103976427480074590e-1) *
                  r +
              6.89767334985100004550e-1) *
                 r +
             1.67638483018380384940e0) *
                r +
            2.05319162663775882187e0) *
               r +
           1.0);
  } else {
    r -= 5.0;
    val = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) *
                    r +
                1.24266094738807843860e-3) *
                   r +
               2.65321895265761230930e-2) *
                  r +
              2.96560571828504891230e-1) *
                 r +
             1.78482653991729133580e0) *
                r +
            5.46378491116411436990e0) *
               r +
           6.65790464350110377720e0) /
          (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) *
                    r +
                1.84631831751005468180e-5) *
                   r +
               7.86869131145613259100e-4) *
                  r +
              1.48753612908506148525e-2) *
                 r +
             1.36929880922735805310e-1) *
                r +
            5.99832206555887937690e-1) *
               r +
           1.0);
  }
  return (q < 0.0) ? -val : val;
}

namespace {

// Lower incomplete gamma by series; valid for x < a + 1.
double GammaPSeries(double a, double x) {
  double ap = a;
  double sum = 1.0 / a;
  double del = sum;
  for (int i = 0; i < 500; ++i) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::fabs(del) < std::fabs(sum) * 1e-16) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Upper incomplete gamma by Lentz continued fraction; valid for x >= a + 1.
double GammaQContinuedFraction(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 500; ++i) {
    double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < 1e-16) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace

double RegularizedGammaP(double a, double x) {
  if (a <= 0.0 || x < 0.0) throw StatError("incomplete gamma: bad arguments");
  if (x == 0.0) return 0.0;
  if (x < a + 1.0) return GammaPSeries(a, x);
  return 1.0 - GammaQContinuedFraction(a, x);
}

double RegularizedGammaQ(double a, double x) {
  if (a <= 0.0 || x < 0.0) throw StatError("incomplete gamma: bad arguments");
  if (x == 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - GammaPSeries(a, x);
  return GammaQContinuedFraction(a, x);
}

double ChiSquareSf(double x, double df) {
  if (df <= 0.0) throw StatError("chi-square: df must be positive");
  if (x <= 0.0) return 1.0;
  return RegularizedGammaQ(0.5 * df, 0.5 * x);
}

ScalarMinResult MinimizeScalar(const std::function<double(double)> &f,
                               double a, double b, double tol, int max_iter) {
  // Brent's localmin.  Interior start at the golden-section point.
  const double golden = 0.5 * (3.0 - std::sqrt(5.0));
  const double eps = std::sqrt(std::numeric_limits<double>::epsilon());
  double x = a + golden * (b - a);
  double w = x, v = x;
  double fx = f(x), fw = fx, fv = fx;
  double d = 0.0, e = 0.0;
  ScalarMinResult res;
  int iter = 0;
  for (; iter < max_iter; ++iter) {
    double xm = 0.5 * (a + b);
    double tol1 = eps * std::fabs(x) + tol;
    double tol2 = 2.0 * tol1;
    if (std::fabs(x - xm) <= tol2 - 0.5 * (b - a)) {
      res.converged = true;
      break;
    }
    bool use_golden = true;
    if (std::fabs(e) > tol1) {
      // Try a parabolic step through (v, w, x).
      double r = (x - w) * (fx - fv);
      double q = (x - v) * (fx - fw);
      double p = (x - v) * q - (x - w) * r;
      q = 2.0 * (q - r);
      if (q > 0.0) p = -p;
      q = std::fabs(q);
      double etemp = e;
      e = d;
      if (std::fabs(p) < std::fabs(0.5 * q * etemp) && p > q * (a - x) &&
          p < q * (b - x)) {
        d = p / q;
        double u = x + d;
        if (u - a < tol2 || b - u < tol2) d = (xm >= x) ? tol1 : -tol1;
        use_golden = false;
      }
    }
    if (use_golden) {
      e = (x >= xm) ? a - x : b - x;
      d = golden * e;
    }
    double u = (std::fabs(d) >= tol1) ? x + d : x + ((d > 0.0) ? tol1 : -tol1);
    double fu = f(u);
    if (fu <= fx) {
      if (u >= x) a = x; else b = x;
      v = w; fv = fw;
      w = x; fw = fx;
      x = u; fx = fu;
    } else {
      if (u < x) a = u; else b = u;
      if (fu <= fw || w == x) {
        v = w; fv = fw;
        w = u; fw = fu;
      } else if (fu <= fv || v == x || v == w) {
        v = u; fv = fu;
      }
    }
  }
  res.x = x;
  res.fx = fx;
  res.iterations = iter;
  return res;
}

}  // namespace scorelens
