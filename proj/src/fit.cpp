#include "gb2kit/fit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <future>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "gb2kit/errors.hpp"
#include "gb2kit/specfun.hpp"

namespace gb2kit {

namespace sf = specfun;

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kLn2Pi = 1.8378770664093454836;

double softplus(double t) { return t > 35.0 ? t : std::log1p(std::exp(t)); }

struct DataStats {
    const std::vector<double>* x = nullptr;  // sorted ascending
    std::vector<double> lx;                  // log of each observation (sorted order)
    double n = 0.0;
    double sum = 0.0, sum_sq = 0.0, sum_inv = 0.0;
    double sum_ln = 0.0, sum_ln_sq = 0.0;
    double mean = 0.0, var = 0.0;
    double mean_ln = 0.0, var_ln = 0.0;
    double mean_inv = 0.0, var_inv = 0.0;

    explicit DataStats(const Sample& s) : x(&s.sorted()) {
        const auto& v = *x;
        n = static_cast<double>(v.size());
        lx.reserve(v.size());
        for (double xi : v) {
            lx.push_back(std::log(xi));
            sum += xi;
            sum_sq += xi * xi;
            sum_inv += 1.0 / xi;
        }
        for (double l : lx) {
            sum_ln += l;
            sum_ln_sq += l * l;
        }
        mean = sum / n;
        var = std::max(0.0, sum_sq / n - mean * mean);
        mean_ln = sum_ln / n;
        var_ln = std::max(0.0, sum_ln_sq / n - mean_ln * mean_ln);
        mean_inv = sum_inv / n;
        double acc = 0.0;
        for (double xi : v) acc += (1.0 / xi - mean_inv) * (1.0 / xi - mean_inv);
        var_inv = acc / n;
    }

    // sample mean and variance of x^g (g may be negative)
    std::pair<double, double> power_moments(double g) const {
        double m1 = 0.0, m2 = 0.0;
        for (double l : lx) {
            const double u = std::exp(g * l);
            m1 += u;
            m2 += u * u;
        }
        m1 /= n;
        m2 /= n;
        return {m1, std::max(m2 - m1 * m1, 1e-300)};
    }
};

// ---- log-likelihoods (natural parameters) -----------------------------------

double loglik(Family f, const std::vector<double>& th, const DataStats& st) {
    const double n = st.n;
    switch (f) {
        case Family::GB2: {
            const double p = th[0], q = th[1], a = th[2], lb = std::log(th[3]);
            double acc = 0.0;
            for (double l : st.lx) acc += softplus(a * (l - lb));
            return n * (std::log(a) - lb - sf::ln_beta(p, q)) +
                   (a * p - 1.0) * (st.sum_ln - n * lb) - (p + q) * acc;
        }
        case Family::BP: {
            const double p = th[0], q = th[1], lb = std::log(th[2]);
            double acc = 0.0;
            for (double l : st.lx) acc += softplus(l - lb);
            return n * (-lb - sf::ln_beta(p, q)) + (p - 1.0) * (st.sum_ln - n * lb) -
                   (p + q) * acc;
        }
        case Family::GIGa: {
            const double a = th[0], g = th[1], lb = std::log(th[2]);
            double acc = 0.0;
            for (double l : st.lx) {
                const double e = g * (lb - l);
                if (e > 700.0) return kNegInf;
                acc += std::exp(e);
            }
            return n * (std::log(g) - lb - sf::ln_gamma(a)) +
                   (1.0 + a * g) * (n * lb - st.sum_ln) - acc;
        }
        case Family::IGa: {
            const double a = th[0], b = th[1];
            return n * (-std::log(b) - sf::ln_gamma(a)) +
                   (1.0 + a) * (n * std::log(b) - st.sum_ln) - b * st.sum_inv;
        }
        case Family::GGa: {
            const double a = th[0], g = th[1], lb = std::log(th[2]);
            double acc = 0.0;
            for (double l : st.lx) {
                const double e = g * (l - lb);
                if (e > 700.0) return kNegInf;
                acc += std::exp(e);
            }
            return n * (std::log(g) - lb - sf::ln_gamma(a)) +
                   (a * g - 1.0) * (st.sum_ln - n * lb) - acc;
        }
        case Family::Ga: {
            const double a = th[0], b = th[1];
            return n * (-std::log(b) - sf::ln_gamma(a)) +
                   (a - 1.0) * (st.sum_ln - n * std::log(b)) - st.sum / b;
        }
        case Family::LN: {
            const double mu = th[0], sg = th[1];
            return -st.sum_ln - n * std::log(sg) - 0.5 * n * kLn2Pi -
                   (st.sum_ln_sq - 2.0 * mu * st.sum_ln + n * mu * mu) /
                       (2.0 * sg * sg);
        }
    }
    return kNegInf;
}

// ---- optimizer-space transform ----------------------------------------------
// All positive parameters are optimized on the log scale; the LN location
// passes through unchanged.

bool identity_coordinate(Family f, std::size_t i) {
    return f == Family::LN && i == 0;
}

std::vector<double> to_opt(Family f, const std::vector<double>& th) {
    std::vector<double> y(th.size());
    for (std::size_t i = 0; i < th.size(); ++i)
        y[i] = identity_coordinate(f, i) ? th[i] : std::log(th[i]);
    return y;
}

std::vector<double> from_opt(Family f, const std::vector<double>& y) {
    std::vector<double> th(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double v = std::clamp(y[i], -200.0, 200.0);
        th[i] = identity_coordinate(f, i) ? y[i] : std::exp(v);
    }
    return th;
}

// ---- Nelder-Mead -------------------------------------------------------------

struct NmOutcome {
    std::vector<double> best;
    double value = 0.0;
    long iterations = 0;
    bool converged = false;
};

template <typename F>
NmOutcome nelder_mead(F&& f, const std::vector<double>& y0, double step, int max_iter,
                      double tol) {
    const std::size_t dim = y0.size();
    std::vector<std::vector<double>> v(dim + 1, y0);
    std::vector<double> fv(dim + 1);
    for (std::size_t i = 0; i < dim; ++i) v[i + 1][i] += step;
    for (std::size_t i = 0; i <= dim; ++i) fv[i] = f(v[i]);

    std::vector<std::size_t> order(dim + 1);
    NmOutcome out;
    for (int iter = 0; iter < max_iter; ++iter) {
        ++out.iterations;
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
        const std::size_t lo = order[0], hi = order[dim], nh = order[dim - 1];

        double diameter = 0.0;
        for (std::size_t i = 0; i <= dim; ++i)
            for (std::size_t k = 0; k < dim; ++k)
                diameter = std::max(diameter, std::abs(v[i][k] - v[lo][k]));
        if (diameter < tol) {
            out.converged = true;
            break;
        }

        std::vector<double> centroid(dim, 0.0);
        for (std::size_t i = 0; i <= dim; ++i) {
            if (i == hi) continue;
            for (std::size_t k = 0; k < dim; ++k) centroid[k] += v[i][k];
        }
        for (double& c : centroid) c /= static_cast<double>(dim);

        auto blend = [&](double coef) {
            std::vector<double> p(dim);
            for (std::size_t k = 0; k < dim; ++k)
                p[k] = centroid[k] + coef * (v[hi][k] - centroid[k]);
            return p;
        };

        std::vector<double> refl = blend(-1.0);
        const double f_refl = f(refl);
        if (f_refl < fv[lo]) {
            std::vector<double> expa = blend(-2.0);
            const double f_expa = f(expa);
            if (f_expa < f_refl) {
                v[hi] = std::move(expa);
                fv[hi] = f_expa;
            } else {
                v[hi] = std::move(refl);
                fv[hi] = f_refl;
            }
            continue;
        }
        if (f_refl < fv[nh]) {
            v[hi] = std::move(refl);
            fv[hi] = f_refl;
            continue;
        }
        const bool outside = f_refl < fv[hi];
        std::vector<double> contr = blend(outside ? -0.5 : 0.5);
        const double f_contr = f(contr);
        if (f_contr < std::min(f_refl, fv[hi])) {
            v[hi] = std::move(contr);
            fv[hi] = f_contr;
            continue;
        }
        // shrink toward the best vertex
        for (std::size_t i = 0; i <= dim; ++i) {
            if (i == lo) continue;
            for (std::size_t k = 0; k < dim; ++k)
                v[i][k] = v[lo][k] + 0.5 * (v[i][k] - v[lo][k]);
            fv[i] = f(v[i]);
        }
    }

    std::size_t best = 0;
    for (std::size_t i = 1; i <= dim; ++i)
        if (fv[i] < fv[best]) best = i;
    out.best = v[best];
    out.value = fv[best];
    return out;
}

// ---- deterministic starts -----------------------------------------------------

double clamp_pos(double v, double lo, double hi) {
    if (!std::isfinite(v) || v <= lo) return lo;
    return std::min(v, hi);
}

// moment-matched (shape, scale) for a gamma sample with mean m, variance v
std::pair<double, double> gamma_moment_start(double m, double v) {
    const double scale = clamp_pos(v / m, 1e-12, 1e12);
    const double shape = clamp_pos(m / scale, 1e-3, 1e6);
    return {shape, scale};
}

// BP(p, q, beta) matching the sample mean and mean square at a fixed q
std::vector<double> bp_start_for_q(double q, double mean, double mean_sq) {
    const double r = mean_sq / (mean * mean);
    double p = (q - 1.0) / (r * (q - 2.0) - (q - 1.0));
    p = clamp_pos(p, 0.3, 500.0);
    const double beta = clamp_pos(mean * (q - 1.0) / p, 1e-12, 1e12);
    return {p, q, beta};
}

std::vector<std::vector<double>> base_starts(Family f, const DataStats& st) {
    std::vector<std::vector<double>> out;
    switch (f) {
        case Family::LN: {
            const double sg = clamp_pos(std::sqrt(st.var_ln), 1e-6, 50.0);
            out.push_back({st.mean_ln, sg});
            out.push_back({st.mean_ln, 1.4 * sg});
            out.push_back({st.mean_ln + 0.3 * sg, 0.8 * sg});
            break;
        }
        case Family::Ga: {
            auto [a, b] = gamma_moment_start(st.mean, st.var);
            out.push_back({a, b});
            // log-based proxy from ln(mean) - mean(ln)
            const double s = std::log(st.mean) - st.mean_ln;
            if (s > 1e-9) {
                const double a2 =
                    clamp_pos((3.0 - s + std::sqrt((s - 3.0) * (s - 3.0) + 24.0 * s)) /
                                  (12.0 * s),
                              1e-3, 1e6);
                out.push_back({a2, st.mean / a2});
            }
            break;
        }
        case Family::IGa: {
            auto [a, lambda] = gamma_moment_start(st.mean_inv, st.var_inv);
            out.push_back({a, 1.0 / lambda});
            out.push_back({clamp_pos(2.0 * a, 1e-3, 1e6), 1.0 / (2.0 * lambda)});
            break;
        }
        case Family::GGa: {
            for (double g : {0.5, 1.0, 2.0, 3.0}) {
                auto [m, v] = st.power_moments(g);
                auto [a, scale] = gamma_moment_start(m, v);
                out.push_back({a, g, std::pow(scale, 1.0 / g)});
            }
            break;
        }
        case Family::GIGa: {
            for (double g : {0.5, 1.0, 2.0, 3.0}) {
                auto [m, v] = st.power_moments(-g);
                auto [a, scale] = gamma_moment_start(m, v);
                out.push_back({a, g, std::pow(scale, -1.0 / g)});
            }
            break;
        }
        case Family::BP: {
            const double mean_sq = st.sum_sq / st.n;
            for (double q : {2.5, 3.5, 5.0, 8.0})
                out.push_back(bp_start_for_q(q, st.mean, mean_sq));
            break;
        }
        case Family::GB2: {
            for (double a : {0.8, 1.2, 1.8, 2.6}) {
                auto [m1, v1] = st.power_moments(a);
                auto [m2, v2] = st.power_moments(2.0 * a);
                (void)v1;
                (void)v2;
                const double mean_sq_u = m2;
                for (double q : {3.0, 6.0}) {
                    auto bp = bp_start_for_q(q, m1, mean_sq_u);
                    out.push_back(
                        {bp[0], bp[1], a, std::pow(bp[2], 1.0 / a)});
                }
            }
            break;
        }
    }
    return out;
}

std::vector<std::vector<double>> make_starts(Family f, const DataStats& st, int count) {
    auto base = base_starts(f, st);
    std::vector<std::vector<double>> out;
    std::size_t k = 0;
    while (out.size() < static_cast<std::size_t>(count)) {
        auto th = base[k % base.size()];
        const auto round = k / base.size();
        if (round > 0) {
            // deterministic jitter: alternate-sign shifts in log space, scaled
            // down as rounds repeat
            const double mag = 0.35 / static_cast<double>(round);
            for (std::size_t i = 0; i < th.size(); ++i) {
                const double shift = ((k + i) % 2 == 0 ? mag : -mag);
                if (identity_coordinate(f, i))
                    th[i] += shift;
                else
                    th[i] *= std::exp(shift);
            }
        }
        out.push_back(std::move(th));
        ++k;
    }
    return out;
}

int resolve_threads(const FitOptions& options) {
    if (options.threads > 0) return options.threads;
    if (const char* env = std::getenv("GB2KIT_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

}  // namespace

FitResult mle_fit(const Sample& s, Family family, const FitOptions& options) {
    if (s.size() < 50) throw DataError("mle_fit: need at least 50 observations");
    if (s.min() == s.max())
        throw DataError("mle_fit: degenerate sample (all observations equal)");

    const DataStats st(s);
    auto objective = [&](const std::vector<double>& y) {
        const auto th = from_opt(family, y);
        const double ll = loglik(family, th, st);
        if (!std::isfinite(ll)) return 1e300;
        return -ll / st.n;
    };

    const auto starts = make_starts(family, st, std::max(1, options.starts));
    FitDiagnostics diag;
    diag.starts = static_cast<int>(starts.size());
    double best_value = std::numeric_limits<double>::infinity();
    std::vector<double> best_y;
    for (const auto& th0 : starts) {
        const auto nm = nelder_mead(objective, to_opt(family, th0), 0.25,
                                    options.max_iterations, options.simplex_tol);
        diag.iterations += nm.iterations;
        diag.converged = diag.converged || nm.converged;
        if (nm.value < best_value) {
            best_value = nm.value;
            best_y = nm.best;
        }
    }
    if (!std::isfinite(best_value) || best_y.empty())
        throw NumericalError("mle_fit: no start converged to a finite likelihood");

    FitResult result{make_spec(family, from_opt(family, best_y)), 0.0, 0.0,
                     std::nullopt,  std::nullopt,                 {},  diag};
    result.log_likelihood = -best_value * st.n;
    result.ks = ks_statistic(s, result.spec);
    result.mean_analytic = mean(result.spec);
    result.rms_analytic = rms(result.spec);
    result.indices = closed_form_indices(result.spec);
    return result;
}

double ks_statistic(const Sample& s, const DistributionSpec& d) {
    const auto& x = s.sorted();
    const double n = static_cast<double>(x.size());
    if (x.empty()) throw DataError("ks_statistic: empty sample");
    double worst = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double F = cdf(d, x[i]);
        const double above = (static_cast<double>(i) + 1.0) / n - F;
        const double below = F - static_cast<double>(i) / n;
        worst = std::max({worst, above, below});
    }
    return worst;
}

TailSlope tail_slope(const Sample& s, double top_fraction, int exclude_top) {
    if (!(top_fraction > 0.0 && top_fraction < 1.0))
        throw std::domain_error("tail_slope: top_fraction must lie in (0, 1)");
    const std::size_t n = s.size();
    const auto m = static_cast<std::size_t>(top_fraction * static_cast<double>(n));
    if (m < 30) throw DataError("tail_slope: tail window needs at least 30 points");
    if (exclude_top < 0) exclude_top = 0;
    if (m <= static_cast<std::size_t>(exclude_top) + 2)
        throw DataError("tail_slope: tail window too small after exclusions");

    const auto& x = s.sorted();
    const std::size_t first = n - m;              // 0-based index of the first tail point
    const std::size_t last = n - 1 - static_cast<std::size_t>(exclude_top);

    double sx = 0.0, sy = 0.0;
    std::size_t k = 0;
    for (std::size_t i = first; i <= last; ++i, ++k) {
        const double survival =
            (static_cast<double>(n - i) - 0.5) / static_cast<double>(n);
        sx += std::log(x[i]);
        sy += std::log(survival);
    }
    const double count = static_cast<double>(k);
    const double mean_x = sx / count, mean_y = sy / count;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = first; i <= last; ++i) {
        const double survival =
            (static_cast<double>(n - i) - 0.5) / static_cast<double>(n);
        const double dx = std::log(x[i]) - mean_x;
        const double dy = std::log(survival) - mean_y;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (!(sxx > 0.0)) throw DataError("tail_slope: tail values are all equal");

    TailSlope out;
    out.points_used = k;
    out.slope = sxy / sxx;
    out.intercept = mean_y - out.slope * mean_x;
    const double ssr = std::max(0.0, syy - out.slope * sxy);
    out.std_error = std::sqrt(ssr / (count - 2.0) / sxx);
    return out;
}

Sample tail_cut(const Sample& s, double top_fraction) {
    if (!(top_fraction > 0.0 && top_fraction < 0.5))
        throw std::domain_error("tail_cut: top_fraction must lie in (0, 0.5)");
    const std::size_t n = s.size();
    const auto k = static_cast<std::size_t>(
        std::ceil(top_fraction * static_cast<double>(n)));
    if (k >= n) throw DataError("tail_cut: cut would remove the whole sample");

    const double threshold = s.sorted()[n - k];  // smallest value being removed
    std::size_t ties_to_drop = 0;
    for (std::size_t i = n - k; i < n; ++i)
        if (s.sorted()[i] == threshold) ++ties_to_drop;

    std::vector<double> kept;
    std::vector<int> kept_years;
    kept.reserve(n - k);
    std::size_t tie_budget = ties_to_drop;
    const auto& v = s.values();
    for (std::size_t i = 0; i < v.size(); ++i) {
        const std::size_t j = v.size() - 1 - i;  // scan from the back so tie drops are stable
        const double val = v[j];
        bool drop = false;
        if (val > threshold) {
            drop = true;
        } else if (val == threshold && tie_budget > 0) {
            drop = true;
            --tie_budget;
        }
        if (!drop) {
            kept.push_back(val);
            if (s.has_years()) kept_years.push_back(s.years()[j]);
        }
    }
    std::reverse(kept.begin(), kept.end());
    std::reverse(kept_years.begin(), kept_years.end());
    if (s.has_years()) return Sample(std::move(kept), std::move(kept_years), s.label());
    return Sample(std::move(kept), s.label());
}

std::vector<ReportRow> fit_report(const Sample& s, const std::vector<Family>& families,
                                  const FitOptions& options) {
    if (families.empty()) throw std::invalid_argument("fit_report: no families requested");

    std::vector<ReportRow> rows;
    ReportRow data_row;
    data_row.label = "Data";
    data_row.mean = s.mean();
    data_row.rms = s.rms();
    data_row.indices = empirical_indices(s);
    rows.push_back(std::move(data_row));

    auto fit_one = [&](Family f) {
        ReportRow row;
        row.label = std::string(family_name(f));
        try {
            FitResult r = mle_fit(s, f, options);
            row.indices = r.indices;
            row.fit = std::move(r);
        } catch (const std::exception& e) {
            row.error = e.what();
        }
        return row;
    };

    std::vector<ReportRow> fitted(families.size());
    const int threads = resolve_threads(options);
    if (threads <= 1 || families.size() == 1) {
        for (std::size_t i = 0; i < families.size(); ++i) fitted[i] = fit_one(families[i]);
    } else {
        std::vector<std::future<ReportRow>> futures;
        futures.reserve(families.size());
        for (Family f : families)
            futures.push_back(std::async(std::launch::async, fit_one, f));
        for (std::size_t i = 0; i < families.size(); ++i) fitted[i] = futures[i].get();
    }

    std::stable_sort(fitted.begin(), fitted.end(), [](const ReportRow& a, const ReportRow& b) {
        if (a.fit && b.fit) return a.fit->ks < b.fit->ks;
        return a.fit && !b.fit;  // failures last
    });
    for (auto& row : fitted) rows.push_back(std::move(row));
    return rows;
}

}  // namespace gb2kit
