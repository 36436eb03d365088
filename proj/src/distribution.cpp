#include "gb2kit/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "gb2kit/errors.hpp"
#include "gb2kit/rng.hpp"
#include "gb2kit/specfun.hpp"

namespace gb2kit {

namespace sf = specfun;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLn2Pi = 1.8378770664093454836;

void require_positive(double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw std::invalid_argument(std::string(what) + " must be positive and finite");
    }
}

// ln(1 + e^t) without overflow.
double softplus(double t) { return t > 35.0 ? t : std::log1p(std::exp(t)); }

// 1 / (1 + e^-t).
double logistic(double t) {
    if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
    const double e = std::exp(t);
    return e / (1.0 + e);
}

template <typename... Fs>
struct Overload : Fs... {
    using Fs::operator()...;
};
template <typename... Fs>
Overload(Fs...) -> Overload<Fs...>;

}  // namespace

Family DistributionSpec::family() const {
    return std::visit(
        Overload{
            [](const Gb2Params&) { return Family::GB2; },
            [](const BetaPrimeParams&) { return Family::BP; },
            [](const GenInvGammaParams&) { return Family::GIGa; },
            [](const InvGammaParams&) { return Family::IGa; },
            [](const GenGammaParams&) { return Family::GGa; },
            [](const GammaParams&) { return Family::Ga; },
            [](const LogNormalParams&) { return Family::LN; },
        },
        params);
}

std::string_view family_name(Family f) {
    switch (f) {
        case Family::GB2: return "GB2";
        case Family::BP: return "BP";
        case Family::GIGa: return "GIGa";
        case Family::IGa: return "IGa";
        case Family::GGa: return "GGa";
        case Family::Ga: return "Ga";
        case Family::LN: return "LN";
    }
    return "?";
}

std::optional<Family> family_from_name(std::string_view name) {
    for (Family f : {Family::GB2, Family::BP, Family::GIGa, Family::IGa, Family::GGa,
                     Family::Ga, Family::LN}) {
        if (name == family_name(f)) return f;
    }
    return std::nullopt;
}

DistributionSpec make_gb2(double p, double q, double alpha, double beta) {
    require_positive(p, "GB2 p");
    require_positive(q, "GB2 q");
    require_positive(alpha, "GB2 alpha");
    require_positive(beta, "GB2 beta");
    return {Gb2Params{p, q, alpha, beta}};
}

DistributionSpec make_beta_prime(double p, double q, double beta) {
    require_positive(p, "BP p");
    require_positive(q, "BP q");
    require_positive(beta, "BP beta");
    return {BetaPrimeParams{p, q, beta}};
}

DistributionSpec make_gen_inv_gamma(double alpha, double gamma, double beta) {
    require_positive(alpha, "GIGa alpha");
    require_positive(gamma, "GIGa gamma");
    require_positive(beta, "GIGa beta");
    return {GenInvGammaParams{alpha, gamma, beta}};
}

DistributionSpec make_inv_gamma(double alpha, double beta) {
    require_positive(alpha, "IGa alpha");
    require_positive(beta, "IGa beta");
    return {InvGammaParams{alpha, beta}};
}

DistributionSpec make_gen_gamma(double alpha, double gamma, double beta) {
    require_positive(alpha, "GGa alpha");
    require_positive(gamma, "GGa gamma");
    require_positive(beta, "GGa beta");
    return {GenGammaParams{alpha, gamma, beta}};
}

DistributionSpec make_gamma(double alpha, double beta) {
    require_positive(alpha, "Ga alpha");
    require_positive(beta, "Ga beta");
    return {GammaParams{alpha, beta}};
}

DistributionSpec make_log_normal(double mu, double sigma) {
    if (!std::isfinite(mu)) throw std::invalid_argument("LN mu must be finite");
    require_positive(sigma, "LN sigma");
    return {LogNormalParams{mu, sigma}};
}

DistributionSpec make_spec(Family f, const std::vector<double>& v) {
    auto need = [&](std::size_t n) {
        if (v.size() != n) throw std::invalid_argument("make_spec: wrong parameter count");
    };
    switch (f) {
        case Family::GB2: need(4); return make_gb2(v[0], v[1], v[2], v[3]);
        case Family::BP: need(3); return make_beta_prime(v[0], v[1], v[2]);
        case Family::GIGa: need(3); return make_gen_inv_gamma(v[0], v[1], v[2]);
        case Family::IGa: need(2); return make_inv_gamma(v[0], v[1]);
        case Family::GGa: need(3); return make_gen_gamma(v[0], v[1], v[2]);
        case Family::Ga: need(2); return make_gamma(v[0], v[1]);
        case Family::LN: need(2); return make_log_normal(v[0], v[1]);
    }
    throw std::invalid_argument("make_spec: unknown family");
}

std::vector<double> param_vector(const DistributionSpec& d) {
    return std::visit(
        Overload{
            [](const Gb2Params& g) { return std::vector<double>{g.p, g.q, g.alpha, g.beta}; },
            [](const BetaPrimeParams& g) { return std::vector<double>{g.p, g.q, g.beta}; },
            [](const GenInvGammaParams& g) {
                return std::vector<double>{g.alpha, g.gamma, g.beta};
            },
            [](const InvGammaParams& g) { return std::vector<double>{g.alpha, g.beta}; },
            [](const GenGammaParams& g) {
                return std::vector<double>{g.alpha, g.gamma, g.beta};
            },
            [](const GammaParams& g) { return std::vector<double>{g.alpha, g.beta}; },
            [](const LogNormalParams& g) { return std::vector<double>{g.mu, g.sigma}; },
        },
        d.params);
}

std::vector<std::string_view> param_names(Family f) {
    switch (f) {
        case Family::GB2: return {"p", "q", "alpha", "beta"};
        case Family::BP: return {"p", "q", "beta"};
        case Family::GIGa: return {"alpha", "gamma", "beta"};
        case Family::IGa: return {"alpha", "beta"};
        case Family::GGa: return {"alpha", "gamma", "beta"};
        case Family::Ga: return {"alpha", "beta"};
        case Family::LN: return {"mu", "sigma"};
    }
    return {};
}

bool bell_shaped(const DistributionSpec& d) {
    return std::visit(
        Overload{
            [](const Gb2Params& g) { return g.alpha * g.p > 1.0; },
            [](const BetaPrimeParams& g) { return g.p > 1.0; },
            [](const GenInvGammaParams&) { return true; },
            [](const InvGammaParams&) { return true; },
            [](const GenGammaParams& g) { return g.alpha * g.gamma > 1.0; },
            [](const GammaParams& g) { return g.alpha > 1.0; },
            [](const LogNormalParams&) { return true; },
        },
        d.params);
}

bool mean_exists(const DistributionSpec& d) {
    return std::visit(
        Overload{
            [](const Gb2Params& g) { return g.alpha * g.q > 1.0; },
            [](const BetaPrimeParams& g) { return g.q > 1.0; },
            [](const GenInvGammaParams& g) { return g.alpha * g.gamma > 1.0; },
            [](const InvGammaParams& g) { return g.alpha > 1.0; },
            [](const GenGammaParams&) { return true; },
            [](const GammaParams&) { return true; },
            [](const LogNormalParams&) { return true; },
        },
        d.params);
}

bool variance_exists(const DistributionSpec& d) {
    return std::visit(
        Overload{
            [](const Gb2Params& g) { return g.alpha * g.q > 2.0; },
            [](const BetaPrimeParams& g) { return g.q > 2.0; },
            [](const GenInvGammaParams& g) { return g.alpha * g.gamma > 2.0; },
            [](const InvGammaParams& g) { return g.alpha > 2.0; },
            [](const GenGammaParams&) { return true; },
            [](const GammaParams&) { return true; },
            [](const LogNormalParams&) { return true; },
        },
        d.params);
}

double ln_pdf(const DistributionSpec& d, double x) {
    if (!(x > 0.0)) throw std::domain_error("pdf: x must be positive");
    const double lx = std::log(x);
    return std::visit(
        Overload{
            [&](const Gb2Params& g) {
                const double t = g.alpha * (lx - std::log(g.beta));
                return std::log(g.alpha) - std::log(g.beta) - sf::ln_beta(g.p, g.q) +
                       (g.alpha * g.p - 1.0) * (lx - std::log(g.beta)) -
                       (g.p + g.q) * softplus(t);
            },
            [&](const BetaPrimeParams& g) {
                const double t = lx - std::log(g.beta);
                return -std::log(g.beta) - sf::ln_beta(g.p, g.q) + (g.p - 1.0) * t -
                       (g.p + g.q) * softplus(t);
            },
            [&](const GenInvGammaParams& g) {
                const double t = std::log(g.beta) - lx;
                return std::log(g.gamma) - std::log(g.beta) - sf::ln_gamma(g.alpha) +
                       (1.0 + g.alpha * g.gamma) * t - std::exp(g.gamma * t);
            },
            [&](const InvGammaParams& g) {
                const double t = std::log(g.beta) - lx;
                return -std::log(g.beta) - sf::ln_gamma(g.alpha) + (1.0 + g.alpha) * t -
                       std::exp(t);
            },
            [&](const GenGammaParams& g) {
                const double t = lx - std::log(g.beta);
                return std::log(g.gamma) - std::log(g.beta) - sf::ln_gamma(g.alpha) +
                       (g.alpha * g.gamma - 1.0) * t - std::exp(g.gamma * t);
            },
            [&](const GammaParams& g) {
                const double t = lx - std::log(g.beta);
                return -std::log(g.beta) - sf::ln_gamma(g.alpha) + (g.alpha - 1.0) * t -
                       std::exp(t);
            },
            [&](const LogNormalParams& g) {
                const double z = (lx - g.mu) / g.sigma;
                return -lx - std::log(g.sigma) - 0.5 * kLn2Pi - 0.5 * z * z;
            },
        },
        d.params);
}

double pdf(const DistributionSpec& d, double x) { return std::exp(ln_pdf(d, x)); }

double cdf(const DistributionSpec& d, double x) {
    if (!(x > 0.0)) throw std::domain_error("cdf: x must be positive");
    const double lx = std::log(x);
    return std::visit(
        Overload{
            [&](const Gb2Params& g) {
                const double z = logistic(g.alpha * (lx - std::log(g.beta)));
                return sf::reg_inc_beta(z, g.p, g.q);
            },
            [&](const BetaPrimeParams& g) {
                const double z = logistic(lx - std::log(g.beta));
                return sf::reg_inc_beta(z, g.p, g.q);
            },
            [&](const GenInvGammaParams& g) {
                const double u = std::exp(g.gamma * (std::log(g.beta) - lx));
                return sf::reg_inc_gamma_q(g.alpha, u);
            },
            [&](const InvGammaParams& g) {
                const double u = std::exp(std::log(g.beta) - lx);
                return sf::reg_inc_gamma_q(g.alpha, u);
            },
            [&](const GenGammaParams& g) {
                const double u = std::exp(g.gamma * (lx - std::log(g.beta)));
                return 1.0 - sf::reg_inc_gamma_q(g.alpha, u);
            },
            [&](const GammaParams& g) {
                const double u = std::exp(lx - std::log(g.beta));
                return 1.0 - sf::reg_inc_gamma_q(g.alpha, u);
            },
            [&](const LogNormalParams& g) {
                const double z = (lx - g.mu) / (g.sigma * 1.4142135623730950488);
                return 0.5 + 0.5 * sf::erf(z);
            },
        },
        d.params);
}

std::optional<double> mean(const DistributionSpec& d) {
    if (!mean_exists(d)) return std::nullopt;
    return std::visit(
        Overload{
            [](const Gb2Params& g) {
                const double ia = 1.0 / g.alpha;
                return g.beta *
                       std::exp(sf::ln_beta(g.p + ia, g.q - ia) - sf::ln_beta(g.p, g.q));
            },
            [](const BetaPrimeParams& g) { return g.beta * g.p / (g.q - 1.0); },
            [](const GenInvGammaParams& g) {
                const double ig = 1.0 / g.gamma;
                return g.beta *
                       std::exp(sf::ln_gamma(g.alpha - ig) - sf::ln_gamma(g.alpha));
            },
            [](const InvGammaParams& g) { return g.beta / (g.alpha - 1.0); },
            [](const GenGammaParams& g) {
                const double ig = 1.0 / g.gamma;
                return g.beta *
                       std::exp(sf::ln_gamma(g.alpha + ig) - sf::ln_gamma(g.alpha));
            },
            [](const GammaParams& g) { return g.alpha * g.beta; },
            [](const LogNormalParams& g) { return std::exp(g.mu + 0.5 * g.sigma * g.sigma); },
        },
        d.params);
}

std::optional<double> second_moment(const DistributionSpec& d) {
    if (!variance_exists(d)) return std::nullopt;
    return std::visit(
        Overload{
            [](const Gb2Params& g) {
                const double s = 2.0 / g.alpha;
                return g.beta * g.beta *
                       std::exp(sf::ln_beta(g.p + s, g.q - s) - sf::ln_beta(g.p, g.q));
            },
            [](const BetaPrimeParams& g) {
                return g.beta * g.beta * g.p * (g.p + 1.0) / ((g.q - 1.0) * (g.q - 2.0));
            },
            [](const GenInvGammaParams& g) {
                const double s = 2.0 / g.gamma;
                return g.beta * g.beta *
                       std::exp(sf::ln_gamma(g.alpha - s) - sf::ln_gamma(g.alpha));
            },
            [](const InvGammaParams& g) {
                return g.beta * g.beta / ((g.alpha - 1.0) * (g.alpha - 2.0));
            },
            [](const GenGammaParams& g) {
                const double s = 2.0 / g.gamma;
                return g.beta * g.beta *
                       std::exp(sf::ln_gamma(g.alpha + s) - sf::ln_gamma(g.alpha));
            },
            [](const GammaParams& g) {
                return g.alpha * (g.alpha + 1.0) * g.beta * g.beta;
            },
            [](const LogNormalParams& g) {
                return std::exp(2.0 * g.mu + 2.0 * g.sigma * g.sigma);
            },
        },
        d.params);
}

std::optional<double> rms(const DistributionSpec& d) {
    const auto m2 = second_moment(d);
    if (!m2) return std::nullopt;
    return std::sqrt(*m2);
}

double scale_parameter(const DistributionSpec& d) {
    return std::visit(
        Overload{
            [](const Gb2Params& g) { return g.beta; },
            [](const BetaPrimeParams& g) { return g.beta; },
            [](const GenInvGammaParams& g) { return g.beta; },
            [](const InvGammaParams& g) { return g.beta; },
            [](const GenGammaParams& g) { return g.beta; },
            [](const GammaParams& g) { return g.beta; },
            [](const LogNormalParams& g) { return std::exp(g.mu); },
        },
        d.params);
}

double pdf_origin_limit(const DistributionSpec& d) {
    return std::visit(
        Overload{
            [](const Gb2Params& g) {
                const double front = g.alpha * g.p - 1.0;
                if (front > 0.0) return 0.0;
                if (front == 0.0)
                    return g.alpha / (g.beta * std::exp(sf::ln_beta(g.p, g.q)));
                return kInf;
            },
            [](const BetaPrimeParams& g) {
                const double front = g.p - 1.0;
                if (front > 0.0) return 0.0;
                if (front == 0.0) return g.q / g.beta;  // 1 / (beta B(1, q))
                return kInf;
            },
            [](const GenInvGammaParams&) { return 0.0; },
            [](const InvGammaParams&) { return 0.0; },
            [](const GenGammaParams& g) {
                const double front = g.alpha * g.gamma - 1.0;
                if (front > 0.0) return 0.0;
                if (front == 0.0)
                    return g.gamma / (g.beta * std::exp(sf::ln_gamma(g.alpha)));
                return kInf;
            },
            [](const GammaParams& g) {
                if (g.alpha > 1.0) return 0.0;
                if (g.alpha == 1.0) return 1.0 / g.beta;
                return kInf;
            },
            [](const LogNormalParams&) { return 0.0; },
        },
        d.params);
}

namespace {

// Stationary point of the log-PDF where one exists in closed form.
double analytic_mode(const DistributionSpec& d) {
    return std::visit(
        Overload{
            [](const Gb2Params& g) {
                if (g.alpha * g.p <= 1.0) return 0.0;
                return g.beta * std::pow((g.alpha * g.p - 1.0) / (g.alpha * g.q + 1.0),
                                         1.0 / g.alpha);
            },
            [](const BetaPrimeParams& g) {
                if (g.p <= 1.0) return 0.0;
                return g.beta * (g.p - 1.0) / (g.q + 1.0);
            },
            [](const GenInvGammaParams& g) {
                return g.beta *
                       std::pow(g.gamma / (1.0 + g.alpha * g.gamma), 1.0 / g.gamma);
            },
            [](const InvGammaParams& g) { return g.beta / (g.alpha + 1.0); },
            [](const GenGammaParams& g) {
                if (g.alpha * g.gamma <= 1.0) return 0.0;
                return g.beta *
                       std::pow((g.alpha * g.gamma - 1.0) / g.gamma, 1.0 / g.gamma);
            },
            [](const GammaParams& g) {
                if (g.alpha <= 1.0) return 0.0;
                return g.beta * (g.alpha - 1.0);
            },
            [](const LogNormalParams& g) { return std::exp(g.mu - g.sigma * g.sigma); },
        },
        d.params);
}

}  // namespace

double mode(const DistributionSpec& d) {
    const double seed = analytic_mode(d);
    if (seed == 0.0) return 0.0;
    // Golden-section polish on the log-PDF in log-x around the analytic point.
    const double kGold = 0.6180339887498949;
    double lo = std::log(seed) - 1.5;
    double hi = std::log(seed) + 1.5;
    double c = hi - kGold * (hi - lo);
    double dd = lo + kGold * (hi - lo);
    double fc = ln_pdf(d, std::exp(c));
    double fd = ln_pdf(d, std::exp(dd));
    for (int it = 0; it < 120 && hi - lo > 1e-13; ++it) {
        if (fc > fd) {
            hi = dd;
            dd = c;
            fd = fc;
            c = hi - kGold * (hi - lo);
            fc = ln_pdf(d, std::exp(c));
        } else {
            lo = c;
            c = dd;
            fc = fd;
            dd = lo + kGold * (hi - lo);
            fd = ln_pdf(d, std::exp(dd));
        }
    }
    const double polished = std::exp(0.5 * (lo + hi));
    // the closed-form point wins unless the search genuinely improved on it
    const double f_seed = ln_pdf(d, seed);
    const double margin = 1e-12 * (1.0 + std::abs(f_seed));
    return ln_pdf(d, polished) > f_seed + margin ? polished : seed;
}

DistributionSpec invert_variable(const DistributionSpec& d) {
    return std::visit(
        Overload{
            [](const Gb2Params& g) {
                return make_gb2(g.q, g.p, g.alpha, 1.0 / g.beta);
            },
            [](const BetaPrimeParams& g) {
                return make_beta_prime(g.q, g.p, 1.0 / g.beta);
            },
            [](const GenInvGammaParams& g) {
                return make_gen_gamma(g.alpha, g.gamma, 1.0 / g.beta);
            },
            [](const InvGammaParams& g) { return make_gamma(g.alpha, 1.0 / g.beta); },
            [](const GenGammaParams& g) {
                return make_gen_inv_gamma(g.alpha, g.gamma, 1.0 / g.beta);
            },
            [](const GammaParams& g) { return make_inv_gamma(g.alpha, 1.0 / g.beta); },
            [](const LogNormalParams& g) { return make_log_normal(-g.mu, g.sigma); },
        },
        d.params);
}

TailExponents tail_exponents(const DistributionSpec& d) {
    return std::visit(
        Overload{
            [](const Gb2Params& g) -> TailExponents {
                return {g.alpha * g.p - 1.0, -g.alpha * g.q - 1.0, -g.alpha * g.q};
            },
            [](const BetaPrimeParams& g) -> TailExponents {
                return {g.p - 1.0, -g.q - 1.0, -g.q};
            },
            [](const GenInvGammaParams& g) -> TailExponents {
                return {std::nullopt, -g.alpha * g.gamma - 1.0, -g.alpha * g.gamma};
            },
            [](const InvGammaParams& g) -> TailExponents {
                return {std::nullopt, -g.alpha - 1.0, -g.alpha};
            },
            [](const auto&) -> TailExponents {
                throw NoPowerTailError("tail_exponents: family has no power-law tail");
            },
        },
        d.params);
}

double quantile(const DistributionSpec& d, double u, double hint) {
    if (!(u > 0.0 && u < 1.0)) throw std::domain_error("quantile: u must lie in (0, 1)");
    double x0 = (std::isfinite(hint) && hint > 0.0) ? hint : scale_parameter(d);
    double lo = x0, hi = x0;
    double flo = cdf(d, lo);
    double fhi = flo;
    int guard = 0;
    while (flo > u) {
        hi = lo;
        fhi = flo;
        lo *= 0.125;
        flo = cdf(d, lo);
        if (++guard > 600) throw NumericalError("quantile: lower bracket not found");
    }
    while (fhi < u) {
        lo = std::max(lo, hi);
        flo = std::max(flo, fhi);
        hi *= 8.0;
        fhi = cdf(d, hi);
        if (++guard > 600) throw NumericalError("quantile: upper bracket not found");
    }
    if (lo == hi) return lo;

    // Newton steps in log-x, falling back to bisection when a step leaves the
    // bracket.
    double tlo = std::log(lo), thi = std::log(hi);
    double t = 0.5 * (tlo + thi);
    for (int it = 0; it < 200; ++it) {
        const double x = std::exp(t);
        const double f = cdf(d, x);
        if (std::abs(f - u) <= 1e-13) return x;
        if (f > u)
            thi = t;
        else
            tlo = t;
        if (thi - tlo < 4e-16 * std::max(1.0, std::abs(t))) return std::exp(0.5 * (tlo + thi));
        const double density = pdf(d, x) * x;  // dF/d(ln x)
        double next = t - (f - u) / density;
        if (!(next > tlo && next < thi) || !std::isfinite(next)) next = 0.5 * (tlo + thi);
        t = next;
    }
    return std::exp(0.5 * (tlo + thi));
}

double quantile(const DistributionSpec& d, double u) {
    return quantile(d, u, std::numeric_limits<double>::quiet_NaN());
}

std::vector<double> sample_values(const DistributionSpec& d, std::size_t n,
                                  std::uint64_t seed) {
    rng::Engine eng(seed);
    std::vector<double> u(n);
    for (auto& v : u) v = eng.uniform01();
    // Invert in ascending order of u so each root find can start from the
    // previous quantile, then scatter back to the draw order.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return u[a] < u[b]; });
    std::vector<double> out(n);
    double prev = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t k = 0; k < n; ++k) {
        const double x = quantile(d, u[order[k]], prev);
        out[order[k]] = x;
        prev = x;
    }
    return out;
}

}  // namespace gb2kit
