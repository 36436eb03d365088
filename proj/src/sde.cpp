#include "gb2kit/sde.hpp"

#include <cmath>
#include <stdexcept>

#include "gb2kit/errors.hpp"
#include "gb2kit/rng.hpp"

namespace gb2kit {

void validate(const SdeConfig& c) {
    if (!(c.gamma_rate > 0.0)) throw std::invalid_argument("SdeConfig: gamma_rate must be positive");
    if (!(c.theta > 0.0)) throw std::invalid_argument("SdeConfig: theta must be positive");
    if (c.kappa2 < 0.0 || c.kappa_alpha < 0.0)
        throw std::invalid_argument("SdeConfig: volatilities must be non-negative");
    if (c.kappa2 == 0.0 && c.kappa_alpha == 0.0)
        throw std::invalid_argument("SdeConfig: at least one volatility must be positive");
    if (!(c.alpha > 0.0)) throw std::invalid_argument("SdeConfig: alpha must be positive");
    if (c.n_paths < 1) throw std::invalid_argument("SdeConfig: n_paths must be >= 1");
}

SdeConfig resolved(const SdeConfig& c) {
    validate(c);
    SdeConfig r = c;
    if (!(r.dt > 0.0)) r.dt = 1e-3 / r.gamma_rate;
    const double relax_steps = 1.0 / (r.gamma_rate * r.dt);
    if (r.burn_in < 0) r.burn_in = static_cast<std::int64_t>(20.0 * relax_steps);
    if (r.thin < 1) r.thin = static_cast<std::int64_t>(relax_steps);
    if (r.thin < 1) r.thin = 1;
    return r;
}

DistributionSpec steady_state_spec(const SdeConfig& c) {
    validate(c);
    const double g = c.gamma_rate;
    const double th = c.theta;
    const double k2sq = c.kappa2 * c.kappa2;
    const double kasq = c.kappa_alpha * c.kappa_alpha;
    const double a = c.alpha;

    if (c.kappa2 == 0.0) {
        // pure additive branch: generalized gamma steady state
        const double shape = (a - 1.0 + 2.0 * g * th / kasq) / a;
        if (!(shape > 0.0))
            throw std::invalid_argument("steady_state_spec: non-positive shape p");
        const double scale = std::pow(a * kasq / (2.0 * g), 1.0 / a);
        if (a == 1.0) return make_gamma(shape, scale);
        return make_gen_gamma(shape, a, scale);
    }
    if (c.kappa_alpha == 0.0) {
        // pure multiplicative branch: inverse-gamma-type steady state
        const double shape = (1.0 + 2.0 * g / k2sq) / a;
        const double scale = std::pow(2.0 * g * th / (a * k2sq), 1.0 / a);
        if (a == 1.0) return make_inv_gamma(shape, scale);
        return make_gen_inv_gamma(shape, a, scale);
    }

    const double q = (1.0 + 2.0 * g / k2sq) / a;
    const double p = (a - 1.0 + 2.0 * g * th / kasq) / a;
    if (!(p > 0.0) || !(q > 0.0))
        throw std::invalid_argument("steady_state_spec: derived shape parameters not positive");
    if (a == 1.0) return make_beta_prime(p, q, kasq / k2sq);
    return make_gb2(p, q, a, std::pow(c.kappa_alpha / c.kappa2, 2.0 / a));
}

namespace {

// one Gaussian per step via Box-Muller, cached in pairs
class NormalSource {
public:
    explicit NormalSource(std::uint64_t seed) : eng_(seed) {}

    double next() {
        if (have_) {
            have_ = false;
            return spare_;
        }
        const double u1 = eng_.uniform01();
        const double u2 = eng_.uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586477 * u2;
        spare_ = r * std::sin(a);
        have_ = true;
        return r * std::cos(a);
    }

private:
    rng::Engine eng_;
    double spare_ = 0.0;
    bool have_ = false;
};

}  // namespace

SimResult simulate(const SdeConfig& config, std::size_t n_samples, std::uint64_t seed) {
    const SdeConfig c = resolved(config);
    if (n_samples == 0) throw std::invalid_argument("simulate: n_samples must be positive");

    const double dt = c.dt;
    const double sqrt_dt = std::sqrt(dt);
    const double g = c.gamma_rate;
    const double th = c.theta;
    const double k2sq = c.kappa2 * c.kappa2;
    const double kasq = c.kappa_alpha * c.kappa_alpha;
    const double a = c.alpha;
    const double floor = 1e-12 * th;

    const bool alpha_is_1 = (a == 1.0);
    const bool alpha_is_2 = (a == 2.0);

    const std::size_t per_path =
        (n_samples + static_cast<std::size_t>(c.n_paths) - 1) / c.n_paths;

    SimResult result;
    result.values.reserve(per_path * c.n_paths);
    result.path_means.reserve(c.n_paths);
    std::int64_t guard_hits = 0;
    std::int64_t steps = 0;

    for (int path = 0; path < c.n_paths; ++path) {
        NormalSource normals(rng::substream_seed(seed, static_cast<std::uint64_t>(path)));
        double x = th;
        double path_sum = 0.0;
        std::size_t collected = 0;
        const std::int64_t total = c.burn_in + static_cast<std::int64_t>(per_path) * c.thin;
        for (std::int64_t k = 1; k <= total; ++k) {
            // drift and diffusion evaluated at the truncated state
            const double xe = x > floor ? x : floor;
            double drift, var;
            if (alpha_is_1) {
                drift = -g * (xe - th);
                var = k2sq * xe * xe + kasq * xe;
            } else if (alpha_is_2) {
                drift = -g * (xe - th / xe);
                var = k2sq * xe * xe + kasq;
            } else {
                const double x1a = std::pow(xe, 1.0 - a);
                drift = -g * (xe - th * x1a);
                var = k2sq * xe * xe + kasq * x1a * xe;  // x^(2-alpha) = x * x^(1-alpha)
            }
            x += drift * dt + std::sqrt(var) * sqrt_dt * normals.next();
            ++steps;
            if (x < floor) {
                x = floor;
                ++guard_hits;
            }
            if (k > c.burn_in && (k - c.burn_in) % c.thin == 0 && collected < per_path) {
                result.values.push_back(x);
                path_sum += x;
                ++collected;
            }
        }
        result.path_means.push_back(path_sum / static_cast<double>(collected));
    }

    if (result.values.size() > n_samples) result.values.resize(n_samples);
    result.total_steps = steps;
    result.guard_rate = static_cast<double>(guard_hits) / static_cast<double>(steps);
    if (result.guard_rate > 0.05)
        throw NumericalError(
            "simulate: positivity guard triggered on more than 5% of steps; reduce dt");
    return result;
}

Sample simulate_sample(const SdeConfig& c, std::size_t n_samples, std::uint64_t seed) {
    SimResult r = simulate(c, n_samples, seed);
    return Sample(std::move(r.values), "sde");
}

}  // namespace gb2kit
