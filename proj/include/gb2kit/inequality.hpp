#pragma once

#include <optional>

#include "gb2kit/distribution.hpp"
#include "gb2kit/sample.hpp"

namespace gb2kit {

enum class IndexKind { Gini, Hoover, TheilT, TheilL };
enum class IndexMethod { ClosedForm, Quadrature, Empirical };

// One row of an inequality summary. An absent value means the index does not
// exist for the spec (the mean or the defining integral diverges).
struct IndexReport {
    std::optional<double> gini;
    std::optional<double> hoover;
    std::optional<double> theil_t;
    std::optional<double> theil_l;
    std::optional<double> dmms;
    IndexMethod method = IndexMethod::ClosedForm;
};

// Closed forms. Each returns nullopt when the index does not exist.
std::optional<double> gini_closed(const DistributionSpec& d);
std::optional<double> hoover_closed(const DistributionSpec& d);
std::optional<double> theil_t_closed(const DistributionSpec& d);
std::optional<double> theil_l_closed(const DistributionSpec& d);

// DMMS = 1 - (modal PDF) * (width at half the modal height). Requires a
// bounded PDF (front exponent >= 0); throws std::domain_error otherwise.
struct DmmsBreakdown {
    double value;
    double modal_pdf;
    double half_width;
    double mode;
};
DmmsBreakdown dmms_breakdown(const DistributionSpec& d);
double dmms(const DistributionSpec& d);

// Independent route: adaptive quadrature of the defining integrals, using
// only pdf/cdf. The standing cross-check for every closed form above.
double index_quadrature(const DistributionSpec& d, IndexKind which,
                        double rel_tol = 1e-9);

// Rational approximation to the BP Gini, (pq+6p+7q-6)/(8(pq+q-1)).
double gini_bp_approx(double p, double q);

// Large-parameter limit expressions for the BP indices.
struct BpLimitValues {
    double gini_large_q;        // Gamma(p+1/2) / (sqrt(pi) Gamma(p+1))
    double gini_large_p;        // Gamma(q-1/2) / (sqrt(pi) Gamma(q))
    double hoover_large_q;      // e^-p p^(p-1) / Gamma(p)
    double hoover_large_p;      // e^(1-q) (q-1)^(q-1) / Gamma(q)
    double gini_p1_large_q;     // 1/2 + 1/(4q)
    double gini_large_p_q2;     // 1/2 + 1/(4p)
    double hoover_p1_large_q;   // 1/e + 1/(2eq)
    double hoover_large_p_q2;   // 1/e + 1/(2ep)
    double gini_both_large;     // (1/sqrt(2 pi)) (1/sqrt(p) + 1/sqrt(q))
    double hoover_both_large;   // same expression
    double theil_t_p1_large_q;  // 1 - euler_gamma + 1/(2q)
    double theil_t_large_p_q2;  // euler_gamma + 1/(2p)
    double theil_t_both_large;  // 1/(2p) + 1/(2q)
};
BpLimitValues bp_asymptotics(double p, double q);

// Full closed-form report for a spec (dmms omitted when the PDF is unbounded).
IndexReport closed_form_indices(const DistributionSpec& d);

// Sample versions of the four integrals plus a kernel-density DMMS.
IndexReport empirical_indices(const Sample& s);
double empirical_index(const Sample& s, IndexKind which);

}  // namespace gb2kit
