#include "gb2kit/inequality.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "gb2kit/errors.hpp"
#include "gb2kit/quadrature.hpp"
#include "gb2kit/specfun.hpp"

namespace gb2kit {

namespace sf = specfun;

namespace {

constexpr double kSqrtPi = 1.7724538509055160273;
constexpr double kSqrt2 = 1.4142135623730950488;

template <typename... Fs>
struct Overload : Fs... {
    using Fs::operator()...;
};
template <typename... Fs>
Overload(Fs...) -> Overload<Fs...>;

void check_agreement(double a, double b, double tol, const char* what) {
    const double scale = std::max({std::abs(a), std::abs(b), 1e-30});
    if (std::abs(a - b) > tol * scale)
        throw NumericalError(std::string(what) + ": alternative routes disagree");
}

// Table-2 style Gini for the GB2 shape (p, q, alpha) via the two 3F2 sums.
double gini_gb2_hyp(double p, double q, double alpha) {
    const double ia = 1.0 / alpha;
    const double ln_pre = sf::ln_beta(2.0 * q - ia, 2.0 * p + ia) - sf::ln_beta(p, q) -
                          sf::ln_beta(p + ia, q - ia);
    const double f1 =
        sf::hyp3f2_unit(1.0, p + q, 2.0 * p + ia, p + 1.0, 2.0 * (p + q));
    const double f2 =
        sf::hyp3f2_unit(1.0, p + q, 2.0 * p + ia, p + 1.0 + ia, 2.0 * (p + q));
    return std::exp(ln_pre) * (f1 / p - f2 / (p + ia));
}

// Product form of the BP Gini, 2 B(2p, 2q-1) / (p B(p,q)^2).
double gini_bp_product(double p, double q) {
    return 2.0 *
           std::exp(sf::ln_beta(2.0 * p, 2.0 * q - 1.0) - 2.0 * sf::ln_beta(p, q)) / p;
}

// Product form of the BP Hoover, p^(p-1) (q-1)^(q-1) (p+q-1)^(1-p-q) / B(p,q).
double hoover_bp_product(double p, double q) {
    return std::exp((p - 1.0) * std::log(p) + (q - 1.0) * std::log(q - 1.0) +
                    (1.0 - p - q) * std::log(p + q - 1.0) - sf::ln_beta(p, q));
}

// Hoover as the CDF difference F(mu) - F1(mu) for the GB2 shape; r = mu/beta.
double hoover_gb2_cdf(double p, double q, double alpha, double mean_over_beta) {
    const double ia = 1.0 / alpha;
    const double z = 1.0 / (1.0 + std::exp(-alpha * std::log(mean_over_beta)));
    return sf::reg_inc_beta(z, p, q) - sf::reg_inc_beta(z, p + ia, q - ia);
}

}  // namespace

std::optional<double> gini_closed(const DistributionSpec& d) {
    if (!mean_exists(d)) return std::nullopt;
    return std::visit(
        Overload{
            [](const Gb2Params& g) { return gini_gb2_hyp(g.p, g.q, g.alpha); },
            [](const BetaPrimeParams& g) {
                const double product = gini_bp_product(g.p, g.q);
                const double hyp = gini_gb2_hyp(g.p, g.q, 1.0);
                check_agreement(product, hyp, 1e-9, "BP Gini");
                return product;
            },
            [](const GenInvGammaParams& g) {
                const double ig = 1.0 / g.gamma;
                const double t1 = sf::hyp2f1(g.alpha - ig, 2.0 * g.alpha - ig,
                                             g.alpha - ig + 1.0, -1.0) /
                                  (g.alpha - ig);
                const double t2 =
                    sf::hyp2f1(g.alpha, 2.0 * g.alpha - ig, g.alpha + 1.0, -1.0) /
                    g.alpha;
                return (t1 - t2) * std::exp(-sf::ln_beta(g.alpha, g.alpha - ig));
            },
            [](const InvGammaParams& g) {
                return std::exp(sf::ln_gamma(g.alpha - 0.5) - sf::ln_gamma(g.alpha)) /
                       kSqrtPi;
            },
            [](const GenGammaParams& g) {
                const double ig = 1.0 / g.gamma;
                const double b = 2.0 * g.alpha + ig;
                const double t1 = sf::hyp2f1(1.0, b, g.alpha + 1.0, 0.5) / g.alpha;
                const double t2 =
                    sf::hyp2f1(1.0, b, g.alpha + ig + 1.0, 0.5) / (g.alpha + ig);
                return (t1 - t2) * std::exp(-b * std::log(2.0) -
                                            sf::ln_beta(g.alpha, g.alpha + ig));
            },
            [](const GammaParams& g) {
                return std::exp(sf::ln_gamma(g.alpha + 0.5) -
                                sf::ln_gamma(g.alpha + 1.0)) /
                       kSqrtPi;
            },
            [](const LogNormalParams& g) { return sf::erf(0.5 * g.sigma); },
        },
        d.params);
}

std::optional<double> hoover_closed(const DistributionSpec& d) {
    const auto mu = mean(d);
    if (!mu) return std::nullopt;
    return std::visit(
        Overload{
            [&](const Gb2Params& g) {
                return hoover_gb2_cdf(g.p, g.q, g.alpha, *mu / g.beta);
            },
            [&](const BetaPrimeParams& g) {
                const double via_cdf = hoover_gb2_cdf(g.p, g.q, 1.0, *mu / g.beta);
                check_agreement(via_cdf, hoover_bp_product(g.p, g.q), 1e-9, "BP Hoover");
                return via_cdf;
            },
            [&](const GenInvGammaParams& g) {
                const double u = std::exp(-g.gamma * std::log(*mu / g.beta));
                return sf::reg_inc_gamma_q(g.alpha, u) -
                       sf::reg_inc_gamma_q(g.alpha - 1.0 / g.gamma, u);
            },
            [&](const InvGammaParams& g) {
                const double u = g.beta / *mu;  // = alpha - 1
                return sf::reg_inc_gamma_q(g.alpha, u) -
                       sf::reg_inc_gamma_q(g.alpha - 1.0, u);
            },
            [&](const GenGammaParams& g) {
                const double u = std::exp(g.gamma * std::log(*mu / g.beta));
                return sf::reg_inc_gamma_q(g.alpha + 1.0 / g.gamma, u) -
                       sf::reg_inc_gamma_q(g.alpha, u);
            },
            [&](const GammaParams& g) {
                const double u = *mu / g.beta;  // = alpha
                return sf::reg_inc_gamma_q(g.alpha + 1.0, u) -
                       sf::reg_inc_gamma_q(g.alpha, u);
            },
            [&](const LogNormalParams& g) {
                return sf::erf(g.sigma / (2.0 * kSqrt2));
            },
        },
        d.params);
}

std::optional<double> theil_t_closed(const DistributionSpec& d) {
    if (!mean_exists(d)) return std::nullopt;
    return std::visit(
        Overload{
            [](const Gb2Params& g) {
                const double ia = 1.0 / g.alpha;
                return ia * (sf::digamma(g.p + ia) - sf::digamma(g.q - ia)) +
                       sf::ln_beta(g.p, g.q) - sf::ln_beta(g.p + ia, g.q - ia);
            },
            [](const BetaPrimeParams& g) {
                return sf::digamma(g.p + 1.0) - sf::digamma(g.q - 1.0) +
                       std::log((g.q - 1.0) / g.p);
            },
            [](const GenInvGammaParams& g) {
                const double ig = 1.0 / g.gamma;
                return -ig * sf::digamma(g.alpha - ig) + sf::ln_gamma(g.alpha) -
                       sf::ln_gamma(g.alpha - ig);
            },
            [](const InvGammaParams& g) {
                return -sf::digamma(g.alpha - 1.0) + std::log(g.alpha - 1.0);
            },
            [](const GenGammaParams& g) {
                const double ig = 1.0 / g.gamma;
                return ig * sf::digamma(g.alpha + ig) + sf::ln_gamma(g.alpha) -
                       sf::ln_gamma(g.alpha + ig);
            },
            [](const GammaParams& g) {
                return sf::digamma(g.alpha + 1.0) - std::log(g.alpha);
            },
            [](const LogNormalParams& g) { return 0.5 * g.sigma * g.sigma; },
        },
        d.params);
}

std::optional<double> theil_l_closed(const DistributionSpec& d) {
    if (!mean_exists(d)) return std::nullopt;
    return std::visit(
        Overload{
            [](const Gb2Params& g) {
                const double ia = 1.0 / g.alpha;
                return ia * (sf::digamma(g.q) - sf::digamma(g.p)) -
                       (sf::ln_beta(g.p, g.q) - sf::ln_beta(g.p + ia, g.q - ia));
            },
            [](const BetaPrimeParams& g) {
                return sf::digamma(g.q) - sf::digamma(g.p) -
                       std::log((g.q - 1.0) / g.p);
            },
            [](const GenInvGammaParams& g) {
                const double ig = 1.0 / g.gamma;
                return ig * sf::digamma(g.alpha) -
                       (sf::ln_gamma(g.alpha) - sf::ln_gamma(g.alpha - ig));
            },
            [](const InvGammaParams& g) {
                return sf::digamma(g.alpha) - std::log(g.alpha - 1.0);
            },
            [](const GenGammaParams& g) {
                const double ig = 1.0 / g.gamma;
                return -ig * sf::digamma(g.alpha) + sf::ln_gamma(g.alpha + ig) -
                       sf::ln_gamma(g.alpha);
            },
            [](const GammaParams& g) {
                return -sf::digamma(g.alpha) + std::log(g.alpha);
            },
            [](const LogNormalParams& g) { return 0.5 * g.sigma * g.sigma; },
        },
        d.params);
}

namespace {

double front_exponent(const DistributionSpec& d) {
    return std::visit(
        Overload{
            [](const Gb2Params& g) { return g.alpha * g.p - 1.0; },
            [](const BetaPrimeParams& g) { return g.p - 1.0; },
            [](const GenInvGammaParams&) {
                return std::numeric_limits<double>::infinity();
            },
            [](const InvGammaParams&) { return std::numeric_limits<double>::infinity(); },
            [](const GenGammaParams& g) { return g.alpha * g.gamma - 1.0; },
            [](const GammaParams& g) { return g.alpha - 1.0; },
            [](const LogNormalParams&) {
                return std::numeric_limits<double>::infinity();
            },
        },
        d.params);
}

// x with pdf(x) = target inside (lo, hi), by bisection on a monotone stretch.
double pdf_level_crossing(const DistributionSpec& d, double target, double lo,
                          double hi, bool rising) {
    for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double val = pdf(d, mid);
        const bool below = val < target;
        if (below == rising)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

DmmsBreakdown dmms_breakdown(const DistributionSpec& d) {
    if (front_exponent(d) < 0.0)
        throw std::domain_error("dmms: PDF is unbounded at the origin");
    const double m = mode(d);
    const double peak = (m > 0.0) ? pdf(d, m) : pdf_origin_limit(d);
    if (!(peak > 0.0) || !std::isfinite(peak))
        throw NumericalError("dmms: modal PDF not finite");
    const double half = 0.5 * peak;
    const double anchor = std::max(m, scale_parameter(d));

    double left = 0.0;
    if (m > 0.0) {
        // PDF rises from 0 at the origin to the peak; bracket the crossing.
        double lo = m * 1e-9;
        int guard = 0;
        while (pdf(d, lo) >= half && ++guard < 2000) lo *= 0.5;
        // a front exponent just above 0 pushes the crossing below the double
        // range; the excluded mass is then negligible and the edge is 0
        left = (guard < 2000) ? pdf_level_crossing(d, half, lo, m, /*rising=*/true) : 0.0;
    }

    double hi = anchor;
    int guard = 0;
    while (pdf(d, hi) >= half) {
        hi *= 2.0;
        if (++guard > 400) throw NumericalError("dmms: right half-height not bracketed");
    }
    const double right_lo = (m > 0.0) ? m : anchor * 1e-12;
    const double right = pdf_level_crossing(d, half, right_lo, hi, /*rising=*/false);

    const double width = right - left;
    return {1.0 - peak * width, peak, width, m};
}

double dmms(const DistributionSpec& d) { return dmms_breakdown(d).value; }

double index_quadrature(const DistributionSpec& d, IndexKind which, double rel_tol) {
    const auto mu_opt = mean(d);
    if (!mu_opt)
        throw NumericalError("index_quadrature: defining integral diverges (no mean)");
    const double mu = *mu_opt;

    switch (which) {
        case IndexKind::Gini: {
            // E|X - Y| = 2 int F (1 - F); one-dimensional instead of the
            // double integral over p(x) p(y) |x - y|.
            auto f = [&](double x) {
                const double F = cdf(d, x);
                return F * (1.0 - F);
            };
            return quad::integrate_positive_axis(f, mu, rel_tol) / mu;
        }
        case IndexKind::Hoover: {
            auto f = [&](double x) { return pdf(d, x) * std::abs(x - mu); };
            const double lower = quad::integrate_finite(f, 0.0, mu, rel_tol);
            const double upper = quad::integrate_upper(f, mu, rel_tol);
            return (lower + upper) / (2.0 * mu);
        }
        case IndexKind::TheilT: {
            auto f = [&](double x) {
                const double r = x / mu;
                return pdf(d, x) * r * std::log(r);
            };
            return quad::integrate_finite(f, 0.0, mu, rel_tol) +
                   quad::integrate_upper(f, mu, rel_tol);
        }
        case IndexKind::TheilL: {
            auto f = [&](double x) { return pdf(d, x) * std::log(mu / x); };
            return quad::integrate_finite(f, 0.0, mu, rel_tol) +
                   quad::integrate_upper(f, mu, rel_tol);
        }
    }
    throw std::invalid_argument("index_quadrature: unknown index");
}

double gini_bp_approx(double p, double q) {
    if (!(p >= 1.0) || !(q >= 2.0))
        throw std::domain_error("gini_bp_approx: requires p >= 1 and q >= 2");
    return (p * q + 6.0 * p + 7.0 * q - 6.0) / (8.0 * (p * q + q - 1.0));
}

BpLimitValues bp_asymptotics(double p, double q) {
    BpLimitValues r{};
    r.gini_large_q = std::exp(sf::ln_gamma(p + 0.5) - sf::ln_gamma(p + 1.0)) / kSqrtPi;
    r.gini_large_p = std::exp(sf::ln_gamma(q - 0.5) - sf::ln_gamma(q)) / kSqrtPi;
    r.hoover_large_q = std::exp(-p + (p - 1.0) * std::log(p) - sf::ln_gamma(p));
    r.hoover_large_p =
        std::exp(1.0 - q + (q - 1.0) * std::log(q - 1.0) - sf::ln_gamma(q));
    r.gini_p1_large_q = 0.5 + 0.25 / q;
    r.gini_large_p_q2 = 0.5 + 0.25 / p;
    const double inv_e = std::exp(-1.0);
    r.hoover_p1_large_q = inv_e * (1.0 + 0.5 / q);
    r.hoover_large_p_q2 = inv_e * (1.0 + 0.5 / p);
    const double c = 1.0 / std::sqrt(2.0 * 3.14159265358979323846);
    r.gini_both_large = c * (1.0 / std::sqrt(p) + 1.0 / std::sqrt(q));
    r.hoover_both_large = r.gini_both_large;
    r.theil_t_p1_large_q = 1.0 - sf::kEulerGamma + 0.5 / q;
    r.theil_t_large_p_q2 = sf::kEulerGamma + 0.5 / p;
    r.theil_t_both_large = 0.5 / p + 0.5 / q;
    return r;
}

IndexReport closed_form_indices(const DistributionSpec& d) {
    IndexReport r;
    r.method = IndexMethod::ClosedForm;
    r.gini = gini_closed(d);
    r.hoover = hoover_closed(d);
    r.theil_t = theil_t_closed(d);
    r.theil_l = theil_l_closed(d);
    if (front_exponent(d) >= 0.0) r.dmms = dmms(d);
    return r;
}

namespace {

// Gaussian KDE with Silverman bandwidth over the sorted sample; evaluation
// restricted to a +-8h window.
class Kde {
public:
    explicit Kde(const Sample& s) : x_(s.sorted()) {
        const double n = static_cast<double>(x_.size());
        const double sd = s.std_dev();
        const double iqr = s.quantile(0.75) - s.quantile(0.25);
        double spread = sd;
        if (iqr > 0.0) spread = std::min(spread, iqr / 1.34);
        h_ = 0.9 * spread * std::pow(n, -0.2);
    }

    bool degenerate() const { return !(h_ > 0.0); }

    double operator()(double x) const {
        const double lo = x - 8.0 * h_;
        const double hi = x + 8.0 * h_;
        auto first = std::lower_bound(x_.begin(), x_.end(), lo);
        auto last = std::upper_bound(first, x_.end(), hi);
        double acc = 0.0;
        for (auto it = first; it != last; ++it) {
            const double z = (x - *it) / h_;
            acc += std::exp(-0.5 * z * z);
        }
        const double norm = static_cast<double>(x_.size()) * h_ * 2.5066282746310005;
        return acc / norm;
    }

    double bandwidth() const { return h_; }

private:
    const std::vector<double>& x_;
    double h_ = 0.0;
};

double kde_dmms(const Sample& s) {
    Kde kde(s);
    if (kde.degenerate()) return 0.0;  // all observations equal
    // coarse scan for the modal region, then golden refinement
    const double lo = s.min();
    const double hi = s.quantile(0.95);
    const int kGrid = 256;
    double best_x = lo, best_f = -1.0;
    for (int i = 0; i <= kGrid; ++i) {
        const double x = lo + (hi - lo) * i / kGrid;
        const double f = kde(x);
        if (f > best_f) {
            best_f = f;
            best_x = x;
        }
    }
    const double kGold = 0.6180339887498949;
    double a = std::max(lo, best_x - (hi - lo) / kGrid * 2.0);
    double b = std::min(hi, best_x + (hi - lo) / kGrid * 2.0);
    double c = b - kGold * (b - a), dd = a + kGold * (b - a);
    double fc = kde(c), fd = kde(dd);
    for (int it = 0; it < 80; ++it) {
        if (fc > fd) {
            b = dd;
            dd = c;
            fd = fc;
            c = b - kGold * (b - a);
            fc = kde(c);
        } else {
            a = c;
            c = dd;
            fc = fd;
            dd = a + kGold * (b - a);
            fd = kde(dd);
        }
    }
    const double m = 0.5 * (a + b);
    const double peak = kde(m);
    const double half = 0.5 * peak;

    // walk outward in bandwidth steps until the density falls below half
    double step = kde.bandwidth();
    double xl = m;
    while (xl > step && kde(xl - step) >= half) xl -= step;
    double left_lo = std::max(xl - step, 1e-300);
    double left = left_lo;
    if (kde(left_lo) < half) {
        double llo = left_lo, lhi = xl;
        for (int it = 0; it < 100; ++it) {
            const double mid = 0.5 * (llo + lhi);
            (kde(mid) < half ? llo : lhi) = mid;
        }
        left = 0.5 * (llo + lhi);
    }
    double xr = m;
    while (kde(xr + step) >= half) xr += step;
    double rlo = xr, rhi = xr + step;
    for (int it = 0; it < 100; ++it) {
        const double mid = 0.5 * (rlo + rhi);
        (kde(mid) >= half ? rlo : rhi) = mid;
    }
    const double right = 0.5 * (rlo + rhi);
    return 1.0 - peak * (right - left);
}

}  // namespace

double empirical_index(const Sample& s, IndexKind which) {
    const auto& sorted = s.sorted();
    const auto n = static_cast<double>(sorted.size());
    if (sorted.size() < 2) throw DataError("empirical_index: need at least 2 points");
    const double mu = s.mean();
    switch (which) {
        case IndexKind::Gini: {
            // rank formula, the empirical-measure version of the mean
            // absolute difference
            double weighted = 0.0, total = 0.0;
            for (std::size_t i = 0; i < sorted.size(); ++i) {
                weighted += static_cast<double>(i + 1) * sorted[i];
                total += sorted[i];
            }
            return 2.0 * weighted / (n * total) - (n + 1.0) / n;
        }
        case IndexKind::Hoover: {
            double acc = 0.0;
            for (double v : sorted) acc += std::abs(v - mu);
            return acc / (2.0 * n * mu);
        }
        case IndexKind::TheilT: {
            double acc = 0.0;
            for (double v : sorted) {
                const double r = v / mu;
                acc += r * std::log(r);
            }
            return acc / n;
        }
        case IndexKind::TheilL: {
            double acc = 0.0;
            for (double v : sorted) acc += std::log(mu / v);
            return acc / n;
        }
    }
    throw std::invalid_argument("empirical_index: unknown index");
}

IndexReport empirical_indices(const Sample& s) {
    IndexReport r;
    r.method = IndexMethod::Empirical;
    r.gini = empirical_index(s, IndexKind::Gini);
    r.hoover = empirical_index(s, IndexKind::Hoover);
    r.theil_t = empirical_index(s, IndexKind::TheilT);
    r.theil_l = empirical_index(s, IndexKind::TheilL);
    r.dmms = kde_dmms(s);
    return r;
}

}  // namespace gb2kit
