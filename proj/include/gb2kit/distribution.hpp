#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <variant>
#include <vector>

namespace gb2kit {

// The distribution family: GB2 and its one- and two-sided limits.
enum class Family { GB2, BP, GIGa, IGa, GGa, Ga, LN };

std::string_view family_name(Family f);
std::optional<Family> family_from_name(std::string_view name);

struct Gb2Params {
    double p, q, alpha, beta;
};
struct BetaPrimeParams {
    double p, q, beta;
};
struct GenInvGammaParams {
    double alpha, gamma, beta;
};
struct InvGammaParams {
    double alpha, beta;
};
struct GenGammaParams {
    double alpha, gamma, beta;
};
struct GammaParams {
    double alpha, beta;
};
struct LogNormalParams {
    double mu, sigma;
};

using FamilyParams =
    std::variant<Gb2Params, BetaPrimeParams, GenInvGammaParams, InvGammaParams,
                 GenGammaParams, GammaParams, LogNormalParams>;

struct DistributionSpec {
    FamilyParams params;
    Family family() const;
};

// Factories; throw std::invalid_argument on non-positive shape/scale (LN mu may
// be any real).
DistributionSpec make_gb2(double p, double q, double alpha, double beta);
DistributionSpec make_beta_prime(double p, double q, double beta);
DistributionSpec make_gen_inv_gamma(double alpha, double gamma, double beta);
DistributionSpec make_inv_gamma(double alpha, double beta);
DistributionSpec make_gen_gamma(double alpha, double gamma, double beta);
DistributionSpec make_gamma(double alpha, double beta);
DistributionSpec make_log_normal(double mu, double sigma);

// Generic construction from a flat parameter vector in the family's canonical
// order (the order param_names reports); used by the fitting code.
DistributionSpec make_spec(Family f, const std::vector<double>& params);
std::vector<double> param_vector(const DistributionSpec& d);
std::vector<std::string_view> param_names(Family f);

// Shape predicates.
bool bell_shaped(const DistributionSpec& d);      // PDF has an interior maximum
bool mean_exists(const DistributionSpec& d);
bool variance_exists(const DistributionSpec& d);

double pdf(const DistributionSpec& d, double x);     // x > 0
double ln_pdf(const DistributionSpec& d, double x);  // -inf where the PDF is 0
double cdf(const DistributionSpec& d, double x);     // x > 0

std::optional<double> mean(const DistributionSpec& d);
std::optional<double> second_moment(const DistributionSpec& d);
std::optional<double> rms(const DistributionSpec& d);  // sqrt(E[x^2])

// Inverse CDF by bracketed root finding; cdf(quantile(u)) = u to ~1e-12.
double quantile(const DistributionSpec& d, double u);
double quantile(const DistributionSpec& d, double u, double hint);

// Argmax of the PDF; 0 for monotone-decreasing members.
double mode(const DistributionSpec& d);

// PDF value approached as x -> 0+ (may be 0, finite, or +inf).
double pdf_origin_limit(const DistributionSpec& d);

// The x -> 1/x change of variable, mapped inside the family set.
DistributionSpec invert_variable(const DistributionSpec& d);

struct TailExponents {
    // exponent of the PDF as x -> 0; absent when the front end decays faster
    // than any power (GIGa, IGa)
    std::optional<double> front;
    double tail;            // exponent of the PDF as x -> inf
    double survival_slope;  // log-log slope of 1 - CDF at large x
};

// Only the fat-tailed members have one; throws NoPowerTailError otherwise.
TailExponents tail_exponents(const DistributionSpec& d);

// Characteristic scale (beta, or e^mu for LN); seeds root brackets.
double scale_parameter(const DistributionSpec& d);

// Inverse-CDF sampling, deterministic per seed.
std::vector<double> sample_values(const DistributionSpec& d, std::size_t n,
                                  std::uint64_t seed);

}  // namespace gb2kit
