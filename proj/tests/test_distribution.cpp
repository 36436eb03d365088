#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "gb2kit/distribution.hpp"
#include "gb2kit/errors.hpp"
#include "gb2kit/fit.hpp"
#include "gb2kit/quadrature.hpp"
#include "gb2kit/sample.hpp"
#include "gb2kit/specfun.hpp"

using namespace gb2kit;

#define CHECK_CLOSE(a, b, tol) CHECK(std::abs((a) - (b)) <= (tol))
#define CHECK_REL(a, b, tol) CHECK(std::abs((a) - (b)) <= (tol)*std::abs(b))

namespace {

std::vector<DistributionSpec> family_grid() {
    return {
        make_gb2(3.03, 1.5521, 1.8265, 57.5208),
        make_gb2(1.4, 2.2, 0.9, 2.0),
        make_beta_prime(13.3205, 3.7632, 23.4072),
        make_beta_prime(2.0, 3.0, 1.0),
        make_gen_inv_gamma(5.4618, 0.72, 849.623),
        make_gen_inv_gamma(2.5, 1.4, 3.0),
        make_inv_gamma(3.2, 2.0),
        make_gen_gamma(2.0, 1.5, 3.0),
        make_gen_gamma(41.9754, 0.2442, 1.0),
        make_gamma(2.0, 1.5),
        make_log_normal(4.5178, 0.62),
        make_log_normal(0.0, 1.1),
    };
}

}  // namespace

TEST_CASE("factories reject non-positive parameters") {
    CHECK_THROWS_AS(make_gb2(0.0, 1.0, 1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(make_beta_prime(1.0, -2.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(make_log_normal(0.0, 0.0), std::invalid_argument);
    CHECK_NOTHROW(make_log_normal(-3.0, 1.0));  // negative location is fine
}

TEST_CASE("bell shape and moment existence are queryable, not errors") {
    const auto spiky = make_beta_prime(0.8, 5.0, 1.0);
    CHECK_FALSE(bell_shaped(spiky));
    CHECK(bell_shaped(make_beta_prime(1.7, 5.0, 1.0)));
    CHECK(bell_shaped(make_gen_inv_gamma(0.3, 0.5, 1.0)));

    CHECK_FALSE(mean_exists(make_gb2(2.0, 0.4, 2.0, 1.0)));  // alpha q = 0.8
    CHECK(mean_exists(make_gb2(2.0, 0.6, 2.0, 1.0)));        // alpha q = 1.2
    CHECK_FALSE(variance_exists(make_gb2(1.1477, 0.5488, 3.5129, 70.7373)));
    CHECK(mean(make_gb2(2.0, 0.4, 2.0, 1.0)) == std::nullopt);
}

TEST_CASE("pdf spot values") {
    // BP(1, 2): density approaches 2/beta at the origin
    const auto bp = make_beta_prime(1.0, 2.0, 5.0);
    CHECK_REL(pdf_origin_limit(bp), 2.0 / 5.0, 1e-12);
    CHECK_REL(pdf(bp, 1e-9), 2.0 / 5.0, 1e-6);

    // LN at its median
    const double mu = 1.3, sg = 0.62;
    const auto ln = make_log_normal(mu, sg);
    const double expect = 1.0 / (std::exp(mu) * sg * std::sqrt(2.0 * 3.14159265358979324));
    CHECK_REL(pdf(ln, std::exp(mu)), expect, 1e-13);

    CHECK_THROWS_AS(pdf(bp, 0.0), std::domain_error);
    CHECK_THROWS_AS(cdf(bp, -1.0), std::domain_error);
}

TEST_CASE("cdf spot values") {
    // GB2 at x = beta collapses to I(1/2, p, q)
    const auto gb2 = make_gb2(3.03, 1.5521, 1.8265, 57.5208);
    CHECK_REL(cdf(gb2, 57.5208), specfun::reg_inc_beta(0.5, 3.03, 1.5521), 1e-12);
    // GIGa at x = beta collapses to Q(alpha, 1)
    const auto giga = make_gen_inv_gamma(5.4618, 0.72, 849.623);
    CHECK_REL(cdf(giga, 849.623), specfun::reg_inc_gamma_q(5.4618, 1.0), 1e-12);
    // exponential special case of the gamma
    const auto expo = make_gamma(1.0, 2.5);
    for (double x : {0.5, 2.5, 9.0})
        CHECK_REL(cdf(expo, x), 1.0 - std::exp(-x / 2.5), 1e-13);
}

TEST_CASE("GB2 with alpha=1 is BP; gamma=1 collapses the generalized pairs") {
    const auto gb2 = make_gb2(2.3, 3.1, 1.0, 4.0);
    const auto bp = make_beta_prime(2.3, 3.1, 4.0);
    for (double x : {2.0, 4.0, 8.0}) {
        CHECK_REL(pdf(gb2, x), pdf(bp, x), 1e-12);
        CHECK_REL(cdf(gb2, x), cdf(bp, x), 1e-12);
    }
    const auto giga = make_gen_inv_gamma(2.7, 1.0, 1.8);
    const auto iga = make_inv_gamma(2.7, 1.8);
    const auto gga = make_gen_gamma(2.7, 1.0, 1.8);
    const auto ga = make_gamma(2.7, 1.8);
    for (double x : {0.4, 1.8, 5.0}) {
        CHECK_REL(pdf(giga, x), pdf(iga, x), 1e-12);
        CHECK_REL(cdf(giga, x), cdf(iga, x), 1e-12);
        CHECK_REL(pdf(gga, x), pdf(ga, x), 1e-12);
        CHECK_REL(cdf(gga, x), cdf(ga, x), 1e-12);
    }
}

TEST_CASE("pdf integrates to one across the family grid") {
    for (const auto& d : family_grid()) {
        const double pivot = std::max(mode(d), scale_parameter(d));
        const double total = quad::integrate_positive_axis(
            [&](double x) { return pdf(d, x); }, pivot, 1e-10);
        CHECK_CLOSE(total, 1.0, 1e-7);
    }
}

TEST_CASE("cdf is the integral of pdf (finite differences)") {
    for (const auto& d : family_grid()) {
        const double med = quantile(d, 0.5);
        for (int k = 1; k <= 10; ++k) {
            const double x = quantile(d, k / 11.0);
            const double h = 1e-5 * med;
            const double deriv = (cdf(d, x + h) - cdf(d, x - h)) / (2.0 * h);
            CHECK_REL(deriv, pdf(d, x), 2e-5);
        }
    }
}

TEST_CASE("means match the closed forms") {
    CHECK_CLOSE(*mean(make_beta_prime(13.3205, 3.7632, 23.4072)), 112.84, 0.01);
    CHECK_CLOSE(*mean(make_gb2(3.03, 1.5521, 1.8265, 57.5208)), 113.70, 0.01);
    CHECK_REL(*mean(make_gamma(2.5, 3.0)), 7.5, 1e-13);
    CHECK_REL(*mean(make_inv_gamma(3.0, 4.0)), 2.0, 1e-13);
}

TEST_CASE("rms handles existence and closed forms") {
    // infinite-variance regime: alpha q < 2
    CHECK(rms(make_gb2(1.1477, 0.5488, 3.5129, 70.7373)) == std::nullopt);
    // LN second moment: sqrt(E x^2) = exp(mu + sigma^2)
    CHECK_REL(*rms(make_log_normal(4.5178, 0.62)), std::exp(4.5178 + 0.62 * 0.62),
              1e-12);
    CHECK_CLOSE(*rms(make_log_normal(4.5178, 0.62)), 134.5855, 5e-3);
    // gamma second moment
    CHECK_REL(*rms(make_gamma(2.5, 3.0)), 3.0 * std::sqrt(2.5 * 3.5), 1e-12);
}

TEST_CASE("quantile inverts the cdf") {
    const auto ln = make_log_normal(1.7, 0.9);
    CHECK_REL(quantile(ln, 0.5), std::exp(1.7), 1e-9);

    const auto gb2 = make_gb2(3.03, 1.5521, 1.8265, 57.5208);
    for (double u = 0.02; u < 0.999; u += 0.07) {
        const double x = quantile(gb2, u);
        CHECK_CLOSE(cdf(gb2, x), u, 1e-8);
    }
    const auto bp = make_beta_prime(2.0, 3.0, 1.5);
    for (double u : {0.01, 0.2, 0.5, 0.9, 0.999}) {
        CHECK_CLOSE(cdf(bp, quantile(bp, u)), u, 1e-9);
    }
    CHECK_THROWS_AS(quantile(bp, 0.0), std::domain_error);
    CHECK_THROWS_AS(quantile(bp, 1.0), std::domain_error);
}

TEST_CASE("sampling is deterministic and matches its own cdf") {
    const auto gb2 = make_gb2(3.03, 1.5521, 1.8265, 57.52);
    const auto one = sample_values(gb2, 1, 42);
    const auto one_again = sample_values(gb2, 1, 42);
    CHECK(one[0] == one_again[0]);

    const auto many = sample_values(gb2, 100000, 7);
    const auto many_again = sample_values(gb2, 100000, 7);
    CHECK(many == many_again);

    const Sample s(many);
    CHECK(ks_statistic(s, gb2) < 0.01);
}

TEST_CASE("large BP sample reproduces the analytic mean") {
    const auto bp = make_beta_prime(13.3205, 3.7632, 23.4072);
    const auto values = sample_values(bp, 1000000, 2024);
    double acc = 0.0;
    for (double v : values) acc += v;
    const double sample_mean = acc / static_cast<double>(values.size());
    CHECK_CLOSE(sample_mean, 112.84, 1.0);
}

TEST_CASE("mode closed forms") {
    const double mu = 2.0, sg = 0.7;
    CHECK_REL(mode(make_log_normal(mu, sg)), std::exp(mu - sg * sg), 1e-9);
    CHECK(mode(make_beta_prime(1.0, 2.0, 3.0)) == 0.0);  // monotone density
    CHECK_REL(mode(make_beta_prime(4.0, 3.0, 2.0)), 2.0 * 3.0 / 4.0, 1e-9);
    CHECK_REL(mode(make_gamma(3.5, 2.0)), 2.0 * 2.5, 1e-9);
}

TEST_CASE("invert_variable maps the family onto itself") {
    const auto bp = invert_variable(make_beta_prime(13.32, 3.76, 23.41));
    const auto& bpv = std::get<BetaPrimeParams>(bp.params);
    CHECK(bpv.p == 3.76);
    CHECK(bpv.q == 13.32);
    CHECK_REL(bpv.beta, 1.0 / 23.41, 1e-15);

    const auto ln = invert_variable(make_log_normal(4.5178, 0.62));
    const auto& lnv = std::get<LogNormalParams>(ln.params);
    CHECK(lnv.mu == -4.5178);
    CHECK(lnv.sigma == 0.62);

    CHECK(invert_variable(make_gen_inv_gamma(2.0, 1.5, 3.0)).family() == Family::GGa);
    CHECK(invert_variable(make_gamma(2.0, 3.0)).family() == Family::IGa);

    for (const auto& d : family_grid()) {
        const auto twice = invert_variable(invert_variable(d));
        const auto a = param_vector(d);
        const auto b = param_vector(twice);
        REQUIRE(a.size() == b.size());
        for (std::size_t i = 0; i < a.size(); ++i) CHECK_REL(b[i], a[i], 1e-15);
    }
}

TEST_CASE("inverse-variable change of density identity") {
    for (const auto& d : family_grid()) {
        const auto inv = invert_variable(d);
        for (double u : {0.1, 0.35, 0.6, 0.85}) {
            const double x = quantile(d, u);
            CHECK_REL(pdf(d, x) * x * x, pdf(inv, 1.0 / x), 1e-10);
        }
    }
}

TEST_CASE("tail exponents") {
    const auto t1 = tail_exponents(make_gb2(3.03, 1.5521, 1.8265, 57.52));
    CHECK_CLOSE(t1.survival_slope, -2.835, 1e-3);
    CHECK_REL(*t1.front, 1.8265 * 3.03 - 1.0, 1e-12);
    CHECK_REL(t1.tail, -1.8265 * 1.5521 - 1.0, 1e-12);

    CHECK_CLOSE(tail_exponents(make_beta_prime(13.3205, 3.7632, 23.4)).survival_slope,
                -3.763, 1e-3);
    const auto t3 = tail_exponents(make_gen_inv_gamma(5.4618, 0.72, 849.6));
    CHECK_CLOSE(t3.survival_slope, -3.933, 1e-3);
    CHECK_FALSE(t3.front.has_value());

    CHECK_THROWS_AS(tail_exponents(make_gen_gamma(2.0, 1.5, 3.0)), NoPowerTailError);
    CHECK_THROWS_AS(tail_exponents(make_gamma(2.0, 3.0)), NoPowerTailError);
    CHECK_THROWS_AS(tail_exponents(make_log_normal(0.0, 1.0)), NoPowerTailError);
}

TEST_CASE("GB2 approaches GGa as q grows with the scale rescaled") {
    const double p = 2.0, alpha = 1.5, beta = 3.0, q = 500.0;
    const auto gb2 = make_gb2(p, q, alpha, beta * std::pow(q, 1.0 / alpha));
    const auto gga = make_gen_gamma(p, alpha, beta);
    const auto values = sample_values(gb2, 100000, 99);
    CHECK(ks_statistic(Sample(values), gga) < 0.01);
}

TEST_CASE("spec round trip through the flat parameter vector") {
    for (const auto& d : family_grid()) {
        const auto rebuilt = make_spec(d.family(), param_vector(d));
        CHECK(param_vector(rebuilt) == param_vector(d));
        CHECK(param_names(d.family()).size() == param_vector(d).size());
    }
}
