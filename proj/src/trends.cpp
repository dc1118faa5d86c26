// Copyright (c) 2026 srcmetry contributors
// SPDX-License-Identifier: Apache-2.0

#include "srcmetry/trends.hpp"

#include <fmt/format.h>

#include <boost/math/distributions/chi_squared.hpp>

#include <algorithm>
#include <cmath>
#include <map>

#include "srcmetry/types.hpp"

namespace srcmetry::trends {

namespace {

struct Ols {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
};

Ols ols(const std::vector<double>& x, const std::vector<double>& y) {
    const auto n = static_cast<double>(x.size());
    double sx = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / n;
    const double my = sy / n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (sxx == 0.0) {
        throw Error(ErrorCode::domain, "regression requires at least two distinct years");
    }
    Ols fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    if (syy == 0.0) {
        fit.r_squared = 1.0;  // constant series fitted exactly
    } else {
        double ss_res = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double resid = y[i] - (fit.intercept + fit.slope * x[i]);
            ss_res += resid * resid;
        }
        fit.r_squared = 1.0 - ss_res / syy;
    }
    return fit;
}

void check_points(const std::vector<TimeSeriesPoint>& points) {
    if (points.size() < 2) {
        throw Error(ErrorCode::domain,
                    fmt::format("regression requires n >= 2 points, got {}", points.size()));
    }
}

}  // namespace

GrowthFit exp_fit(const std::vector<TimeSeriesPoint>& points) {
    check_points(points);
    std::vector<double> x, y;
    x.reserve(points.size());
    y.reserve(points.size());
    for (const auto& p : points) {
        if (!(p.value > 0.0)) {
            throw Error(ErrorCode::domain,
                        fmt::format("exp_fit requires positive values; year {} has {}", p.year,
                                    p.value));
        }
        x.push_back(static_cast<double>(p.year));
        y.push_back(std::log(p.value));
    }
    const auto fit = ols(x, y);
    GrowthFit out;
    out.log_slope = fit.slope;
    out.annual_factor = std::exp(fit.slope);
    if (fit.slope > 0.0) out.doubling_years = std::log(2.0) / fit.slope;
    out.intercept = fit.intercept;
    out.r_squared = fit.r_squared;
    out.n = points.size();
    return out;
}

LinearFit linear_fit(const std::vector<TimeSeriesPoint>& points) {
    check_points(points);
    std::vector<double> x, y;
    x.reserve(points.size());
    y.reserve(points.size());
    for (const auto& p : points) {
        x.push_back(static_cast<double>(p.year));
        y.push_back(p.value);
    }
    const auto fit = ols(x, y);
    return {fit.slope, fit.intercept, fit.r_squared, points.size()};
}

std::vector<TimeSeriesPoint> aggregate_by_year(const std::vector<TimeSeriesPoint>& points) {
    std::map<int, std::pair<double, std::size_t>> sums;
    for (const auto& p : points) {
        auto& [sum, count] = sums[p.year];
        sum += p.value;
        ++count;
    }
    std::vector<TimeSeriesPoint> out;
    out.reserve(sums.size());
    for (const auto& [year, sc] : sums) {
        out.push_back({year, sc.first / static_cast<double>(sc.second)});
    }
    return out;
}

double kolmogorov_q(double lambda) {
    if (lambda <= 0.0) return 1.0;
    double sum = 0.0;
    double sign = 1.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = std::exp(-2.0 * k * k * lambda * lambda);
        sum += sign * term;
        if (term < 1e-12) break;
        sign = -sign;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) {
        throw Error(ErrorCode::domain, "ks_two_sample requires two non-empty samples");
    }
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const auto na = static_cast<double>(a.size());
    const auto nb = static_cast<double>(b.size());

    double d = 0.0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        const double value = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= value) ++i;
        while (j < b.size() && b[j] <= value) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }

    const double ne = na * nb / (na + nb);
    const double sqrt_ne = std::sqrt(ne);
    const double lambda = (sqrt_ne + 0.12 + 0.11 / sqrt_ne) * d;
    return {d, kolmogorov_q(lambda)};
}

ChiSquareResult chi_square_hist(const Histogram& a, const Histogram& b) {
    if (a.edges.size() < 2 || a.edges != b.edges) {
        throw Error(ErrorCode::domain, "chi_square_hist requires identical bin edges");
    }
    if (a.counts.size() != a.edges.size() - 1 || b.counts.size() != b.edges.size() - 1) {
        throw Error(ErrorCode::domain, "histogram counts must match bin edges");
    }
    double total_a = 0.0, total_b = 0.0;
    for (const auto c : a.counts) total_a += c;
    for (const auto c : b.counts) total_b += c;
    if (total_a <= 0.0 || total_b <= 0.0) {
        throw Error(ErrorCode::domain, "histograms must be non-empty");
    }
    const double total = total_a + total_b;

    // Pool sparse bins rightward until every bin expects >= 5 under
    // homogeneity (for the smaller sample).
    const double min_share = std::min(total_a, total_b) / total;
    std::vector<std::pair<double, double>> bins;  // (a_count, b_count)
    double acc_a = 0.0, acc_b = 0.0;
    for (std::size_t i = 0; i < a.counts.size(); ++i) {
        acc_a += a.counts[i];
        acc_b += b.counts[i];
        const double expected_min = (acc_a + acc_b) * min_share;
        if (expected_min >= 5.0) {
            bins.emplace_back(acc_a, acc_b);
            acc_a = acc_b = 0.0;
        }
    }
    if (acc_a > 0.0 || acc_b > 0.0) {
        if (bins.empty()) {
            bins.emplace_back(acc_a, acc_b);
        } else {
            bins.back().first += acc_a;
            bins.back().second += acc_b;
        }
    }
    if (bins.size() < 2) {
        throw Error(ErrorCode::domain, "histograms collapse to a single bin after pooling");
    }

    // Two-sample statistic for unequal totals:
    // sum (sqrt(Nb/Na)*a_i - sqrt(Na/Nb)*b_i)^2 / (a_i + b_i)
    const double scale_a = std::sqrt(total_b / total_a);
    const double scale_b = std::sqrt(total_a / total_b);
    double statistic = 0.0;
    for (const auto& [ca, cb] : bins) {
        if (ca + cb <= 0.0) continue;
        const double diff = scale_a * ca - scale_b * cb;
        statistic += diff * diff / (ca + cb);
    }
    const auto dof = bins.size() - 1;

    boost::math::chi_squared dist(static_cast<double>(dof));
    const double p = statistic <= 0.0 ? 1.0 : boost::math::cdf(boost::math::complement(dist, statistic));
    return {statistic, dof, p};
}

}  // namespace srcmetry::trends
