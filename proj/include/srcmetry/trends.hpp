// Copyright (c) 2026 srcmetry contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <optional>
#include <vector>

namespace srcmetry::trends {

struct TimeSeriesPoint {
    int year = 0;
    double value = 0.0;
};

struct GrowthFit {
    double log_slope = 0.0;      // b in ln y = a + b * year
    double annual_factor = 1.0;  // e^b
    std::optional<double> doubling_years;  // ln 2 / b, absent when b <= 0
    double intercept = 0.0;      // a
    double r_squared = 0.0;
    std::size_t n = 0;
};

/// OLS of ln(value) on year. Requires n >= 2, two distinct years, and all
/// values > 0.
GrowthFit exp_fit(const std::vector<TimeSeriesPoint>& points);

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    std::size_t n = 0;
};

/// OLS on raw values. Requires n >= 2 and two distinct years.
LinearFit linear_fit(const std::vector<TimeSeriesPoint>& points);

/// Average values per year before fitting (per-year aggregation mode).
std::vector<TimeSeriesPoint> aggregate_by_year(const std::vector<TimeSeriesPoint>& points);

struct KsResult {
    double d_statistic = 0.0;
    double p_value = 1.0;
};

/// Two-sample Kolmogorov-Smirnov test: D = sup |ECDF_a - ECDF_b| with the
/// asymptotic p-value at effective n = na*nb/(na+nb).
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

/// Asymptotic Kolmogorov distribution Q(lambda) = 2 sum (-1)^{k-1} e^{-2k^2 lambda^2}.
double kolmogorov_q(double lambda);

struct Histogram {
    std::vector<double> edges;   // bin i covers [edges[i], edges[i+1])
    std::vector<double> counts;  // size edges.size() - 1
};

struct ChiSquareResult {
    double statistic = 0.0;
    std::size_t dof = 0;
    double p_value = 1.0;
};

/// Two-sample chi-square over histograms sharing bin edges. Bins with
/// expected count < 5 are merged rightward before testing;
/// dof = bins_after_pooling - 1.
ChiSquareResult chi_square_hist(const Histogram& a, const Histogram& b);

}  // namespace srcmetry::trends
