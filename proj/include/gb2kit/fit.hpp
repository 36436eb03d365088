#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gb2kit/distribution.hpp"
#include "gb2kit/inequality.hpp"
#include "gb2kit/sample.hpp"

namespace gb2kit {

struct FitOptions {
    int starts = 8;            // deterministic moment/quantile heuristics + jitters
    int max_iterations = 2000; // Nelder-Mead iterations per start
    double simplex_tol = 1e-9; // log-space simplex diameter at convergence
    int threads = 0;           // 0: GB2KIT_THREADS env var, else hardware
};

struct FitDiagnostics {
    long iterations = 0;  // summed over starts
    int starts = 0;
    bool converged = false;
};

struct FitResult {
    DistributionSpec spec;
    double ks = 0.0;
    double log_likelihood = 0.0;
    std::optional<double> mean_analytic;
    std::optional<double> rms_analytic;
    IndexReport indices;
    FitDiagnostics diagnostics;
};

// Maximum likelihood over one family; derivative-free search in log-parameter
// space from several deterministic starts. Needs n >= 50.
FitResult mle_fit(const Sample& s, Family family, const FitOptions& options = {});

// sup_i max(|i/n - F(x_i)|, |(i-1)/n - F(x_i)|) over the sorted sample.
double ks_statistic(const Sample& s, const DistributionSpec& d);

struct TailSlope {
    double slope = 0.0;
    double std_error = 0.0;
    double intercept = 0.0;
    std::size_t points_used = 0;
};

// Least-squares slope of log empirical survival against log x over the top
// fraction of the sample. The largest exclude_top order statistics are left
// out; survival uses the (n - i + 1/2)/n plotting convention.
TailSlope tail_slope(const Sample& s, double top_fraction, int exclude_top = 3);

// Sample with the ceil(top_fraction * n) largest observations removed.
Sample tail_cut(const Sample& s, double top_fraction);

// One row of the fit report: either the empirical data row, a fitted family,
// or a family-level failure marker.
struct ReportRow {
    std::string label;
    std::optional<FitResult> fit;
    std::optional<double> mean;  // data row: sample mean
    std::optional<double> rms;   // data row: sample root mean square
    IndexReport indices;
    std::optional<std::string> error;
};

// Empirical row first, then one row per requested family sorted by KS
// ascending; failures sort last and carry the error text instead of aborting
// the rest.
std::vector<ReportRow> fit_report(const Sample& s, const std::vector<Family>& families,
                                  const FitOptions& options = {});

}  // namespace gb2kit
