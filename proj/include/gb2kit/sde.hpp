#pragma once

#include <cstdint>
#include <vector>

#include "gb2kit/distribution.hpp"
#include "gb2kit/sample.hpp"

namespace gb2kit {

// Mean-reverting SDE
//   dx = -gamma (x - theta x^(1-alpha)) dt
//        + sqrt(kappa2^2 x^2 + kappa_alpha^2 x^(2-alpha)) dW
// whose stationary density is a GB2 family member. alpha = 1 is the additive
// + multiplicative noise model with a Beta Prime steady state; kappa_alpha is
// then the model's kappa_1.
struct SdeConfig {
    double gamma_rate = 1.0;   // reversion rate (1/time)
    double theta = 1.0;        // reversion level (data units)
    double kappa2 = 0.0;       // multiplicative volatility (1/sqrt(time))
    double kappa_alpha = 0.0;  // additive-branch volatility
    double alpha = 1.0;        // exponent; 1 recovers the BP model
    double dt = 0.0;           // step; <= 0 selects 1e-3 / gamma_rate
    std::int64_t burn_in = -1; // steps; < 0 selects 20 relaxation times
    std::int64_t thin = -1;    // steps between retained draws; < 0 selects one relaxation time
    int n_paths = 8;
};

void validate(const SdeConfig& c);

// Copy with the default integration controls filled in.
SdeConfig resolved(const SdeConfig& c);

// Stationary distribution implied by the coefficients:
//   alpha = 1: BP(2 gamma theta / k1^2, 1 + 2 gamma / k2^2, k1^2 / k2^2)
//   general:   GB2 with beta = (ka/k2)^(2/alpha),
//              p = (alpha - 1 + 2 gamma theta / ka^2) / alpha,
//              q = (1 + 2 gamma / k2^2) / alpha
// One-sided noise degenerates to the gamma-type limits: kappa_alpha = 0 gives
// GIGa (IGa at alpha = 1), kappa2 = 0 gives GGa (Ga at alpha = 1).
DistributionSpec steady_state_spec(const SdeConfig& c);

struct SimResult {
    std::vector<double> values;       // pooled post-burn-in draws
    std::vector<double> path_means;   // per-path sample means (independent across paths)
    double guard_rate = 0.0;          // fraction of steps clamped at the floor
    std::int64_t total_steps = 0;
};

// Euler-Maruyama with full truncation at a floor of 1e-12 * theta. Paths use
// seeds rng::substream_seed(seed, path); pooling is path-major and
// deterministic. Throws NumericalError if the floor triggers on > 5% of steps.
SimResult simulate(const SdeConfig& c, std::size_t n_samples, std::uint64_t seed);

Sample simulate_sample(const SdeConfig& c, std::size_t n_samples, std::uint64_t seed);

}  // namespace gb2kit
