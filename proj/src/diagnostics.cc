// scorelens/src/diagnostics.cc
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#include "scorelens/diagnostics.h"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "scorelens/csv.h"
#include "scorelens/error.h"
#include "scorelens/stats.h"

namespace scorelens {

std::vector<QqPoint> QqData(std::span<const double> residuals) {
  size_t n = residuals.size();
  if (n < 3) throw StatError("qq data: too few points (need >= 3)");
  double m = SampleMean(residuals);
  double sd = SampleSd(residuals);
  if (sd <= 0.0) throw StatError("qq data: constant residuals");
  std::vector<double> z(residuals.begin(), residuals.end());
  for (double &v : z) v = (v - m) / sd;
  std::sort(z.begin(), z.end());
  std::vector<QqPoint> out(n);
  for (size_t i = 0; i < n; ++i) {
    out[i].theoretical = InverseNormalCdf((i + 0.5) / n);
    out[i].empirical = z[i];
  }
  return out;
}

Histogram ResidualHistogram(std::span<const double> residuals) {
  size_t n = residuals.size();
  if (n < 2) throw StatError("histogram: too few points");
  std::vector<double> sorted(residuals.begin(), residuals.end());
  std::sort(sorted.begin(), sorted.end());
  double lo = sorted.front(), hi = sorted.back();
  double q1 = sorted[static_cast<size_t>(0.25 * (n - 1))];
  double q3 = sorted[static_cast<size_t>(0.75 * (n - 1))];
  double iqr = q3 - q1;
  double width = 2.0 * iqr / std::cbrt(static_cast<double>(n));
  int bins;
  if (width <= 0.0 || hi <= lo) {
    bins = 1;
  } else {
    bins = std::min(200, std::max(1, static_cast<int>(
                                         std::ceil((hi - lo) / width))));
  }
  Histogram h;
  double span = (hi > lo) ? (hi - lo) : 1.0;
  h.edges.resize(bins + 1);
  for (int b = 0; b <= bins; ++b) h.edges[b] = lo + span * b / bins;
  h.counts.assign(bins, 0);
  for (double v : sorted) {
    int b = static_cast<int>((v - lo) / span * bins);
    if (b >= bins) b = bins - 1;
    if (b < 0) b = 0;
    h.counts[b] += 1;
  }
  return h;
}

ScatterResult ScatterAndR(const LmeFit &fit) {
  ScatterResult res;
  res.points.reserve(fit.n);
  std::vector<double> scores(fit.n);
  for (int i = 0; i < fit.n; ++i) {
    double score = fit.fitted[i] + fit.residuals[i];
    res.points.emplace_back(fit.fitted[i], score);
    scores[i] = score;
  }
  res.r = Pearson(
      std::span<const double>(fit.fitted.data(), fit.fitted.size()), scores);
  return res;
}

ResidualSummary SummarizeResiduals(const LmeFit &fit) {
  std::span<const double> resid(fit.residuals.data(), fit.residuals.size());
  ResidualSummary s;
  s.residual_sd = SampleSd(resid);
  s.speaker_sd = std::sqrt(std::max(fit.sigma_b2, 0.0));
  s.min = *std::min_element(resid.begin(), resid.end());
  s.max = *std::max_element(resid.begin(), resid.end());
  // Degenerate (noiseless) fits have no shape to describe.
  if (s.residual_sd > 0.0) {
    s.skewness = Skewness(resid);
    s.excess_kurtosis = ExcessKurtosis(resid);
  }
  return s;
}

DiagnosticBundle BuildDiagnostics(const LmeFit &fit) {
  DiagnosticBundle b;
  std::span<const double> resid(fit.residuals.data(), fit.residuals.size());
  b.qq_points = QqData(resid);
  b.residual_vs_fitted.reserve(fit.n);
  for (int i = 0; i < fit.n; ++i)
    b.residual_vs_fitted.emplace_back(fit.fitted[i], fit.residuals[i]);
  b.histogram = ResidualHistogram(resid);
  b.scatter = ScatterAndR(fit);
  b.summary = SummarizeResiduals(fit);
  return b;
}

namespace {

void WriteScatterSvg(const std::string &path, const ScatterResult &scatter) {
  double xlo = 1e300, xhi = -1e300, ylo = 1e300, yhi = -1e300;
  for (const auto &[x, y] : scatter.points) {
    xlo = std::min(xlo, x); xhi = std::max(xhi, x);
    ylo = std::min(ylo, y); yhi = std::max(yhi, y);
  }
  if (xhi <= xlo) xhi = xlo + 1.0;
  if (yhi <= ylo) yhi = ylo + 1.0;
  const double w = 480, h = 480, pad = 40;
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w
      << "\" height=\"" << h << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  // Subsample large scatters; the CSV carries the full data.
  size_t step = std::max<size_t>(1, scatter.points.size() / 5000);
  for (size_t i = 0; i < scatter.points.size(); i += step) {
    double px = pad + (scatter.points[i].first - xlo) / (xhi - xlo) *
                          (w - 2 * pad);
    double py = h - pad - (scatter.points[i].second - ylo) / (yhi - ylo) *
                              (h - 2 * pad);
    out << "<circle cx=\"" << FormatDouble(px) << "\" cy=\""
        << FormatDouble(py) << "\" r=\"1.5\" fill=\"steelblue\" "
        << "fill-opacity=\"0.4\"/>\n";
  }
  char label[64];
  std::snprintf(label, sizeof(label), "r = %.2f", scatter.r);
  out << "<text x=\"" << pad + 8 << "\" y=\"" << pad << "\" "
      << "font-family=\"sans-serif\" font-size=\"16\">" << label
      << "</text>\n";
  out << "<text x=\"" << w / 2 << "\" y=\"" << h - 8
      << "\" font-family=\"sans-serif\" font-size=\"12\" "
         "text-anchor=\"middle\">fitted value</text>\n";
  out << "</svg>\n";
}

}  // namespace

std::vector<std::string> WriteDiagnostics(const std::string &dir,
                                          const DiagnosticBundle &bundle,
                                          bool with_svg) {
  std::vector<std::string> written;
  {
    std::vector<std::vector<std::string>> rows;
    for (const auto &p : bundle.qq_points)
      rows.push_back({FormatDouble(p.theoretical), FormatDouble(p.empirical)});
    std::string path = dir + "/qq.csv";
    WriteCsv(path, {"theoretical_quantile", "standardized_residual"}, rows);
    written.push_back(path);
  }
  {
    std::vector<std::vector<std::string>> rows;
    for (const auto &[f, r] : bundle.residual_vs_fitted)
      rows.push_back({FormatDouble(f), FormatDouble(r)});
    std::string path = dir + "/resid_fitted.csv";
    WriteCsv(path, {"fitted", "residual"}, rows);
    written.push_back(path);
  }
  {
    std::vector<std::vector<std::string>> rows;
    for (const auto &[f, s] : bundle.scatter.points)
      rows.push_back({FormatDouble(f), FormatDouble(s)});
    std::string path = dir + "/scatter.csv";
    WriteCsv(path, {"fitted", "score"}, rows);
    written.push_back(path);
  }
  {
    std::vector<std::vector<std::string>> rows;
    for (size_t b = 0; b < bundle.histogram.counts.size(); ++b)
      rows.push_back({FormatDouble(bundle.histogram.edges[b]),
                      FormatDouble(bundle.histogram.edges[b + 1]),
                      std::to_string(bundle.histogram.counts[b])});
    std::string path = dir + "/hist.csv";
    WriteCsv(path, {"bin_lo", "bin_hi", "count"}, rows);
    written.push_back(path);
  }
  if (with_svg) {
    std::string path = dir + "/scatter.svg";
    WriteScatterSvg(path, bundle.scatter);
    written.push_back(path);
  }
  return written;
}

}  // namespace scorelens
