#pragma once

// Double-exponential (tanh-sinh / exp-sinh) quadrature. Handles integrable
// endpoint singularities and algebraic decay at infinity, which is what the
// index integrals and the hypergeometric tail corrections need.

#include <cmath>
#include <cstdlib>
#include <limits>

#include "gb2kit/errors.hpp"

namespace gb2kit::quad {

inline constexpr double kPiHalf = 1.5707963267948966;

// Integrate f over (a, b) with the tanh-sinh rule. rel_tol is a relative
// target; an absolute floor of abs_floor stops the refinement for integrals
// that are essentially zero.
template <typename F>
double integrate_finite(F&& f, double a, double b, double rel_tol = 1e-10,
                        double abs_floor = 1e-300) {
    if (!(b > a)) return 0.0;
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);

    // value of f at the transformed node for step h and index k (k != 0 uses both signs)
    auto node_sum = [&](double h, long k0, long stride) {
        double acc = 0.0;
        for (long k = k0;; k += stride) {
            const double t = h * static_cast<double>(k);
            const double u = kPiHalf * std::sinh(t);
            const double ch = std::cosh(u);
            const double w = kPiHalf * std::cosh(t) / (ch * ch);
            if (w < 1e-320) break;
            // distance from the endpoints, computed without loss near tanh(u) ~ +-1
            const double d = half / (std::exp(u) * ch);  // half*(1 -+ tanh(u)) for the far side
            const double xp = b - d;
            const double xm = a + d;
            double s = 0.0;
            if (xp > a && xp < b) s += f(xp);
            if (xm > a && xm < b) s += f(xm);
            acc += w * s;
            if (k > 4096L * stride) break;
        }
        return acc;
    };

    double h = 1.0;
    double sum = kPiHalf * f(mid) + node_sum(h, 1, 1);
    double integral = h * half * sum;
    for (int level = 1; level <= 12; ++level) {
        h *= 0.5;
        sum += node_sum(h, 1, 2);  // odd multiples of the new h
        const double refined = h * half * sum;
        const double change = std::abs(refined - integral);
        integral = refined;
        if (level >= 3 && change <= rel_tol * std::abs(integral) + abs_floor) return integral;
    }
    if (!std::isfinite(integral))
        throw NumericalError("tanh-sinh quadrature did not converge");
    return integral;
}

// Integrate f over (a, inf) with the exp-sinh rule; f must decay at least
// algebraically faster than 1/x.
template <typename F>
double integrate_upper(F&& f, double a, double rel_tol = 1e-10,
                       double abs_floor = 1e-300) {
    auto node_sum = [&](double h, long k0, long stride) {
        double acc = 0.0;
        for (long k = k0;; k += stride) {
            const double t = h * static_cast<double>(k);
            const double u = kPiHalf * std::sinh(t);
            const double ct = std::cosh(t);
            const double xp = std::exp(u);   // node > 1
            const double xm = 1.0 / xp;      // node < 1
            double term = 0.0;
            const double wp = kPiHalf * ct * xp;
            const double wm = kPiHalf * ct * xm;
            if (std::isfinite(xp) && a + xp > a) term += wp * f(a + xp);
            if (xm > 0.0) term += wm * f(a + xm);
            if (!std::isfinite(term)) throw NumericalError("exp-sinh integrand not finite");
            acc += term;
            if (std::abs(term) < 1e-320 && k > 8 * stride) break;
            if (k > 4096L * stride) break;
        }
        return acc;
    };

    double h = 1.0;
    double sum = kPiHalf * f(a + 1.0) + node_sum(h, 1, 1);
    double integral = h * sum;
    for (int level = 1; level <= 12; ++level) {
        h *= 0.5;
        sum += node_sum(h, 1, 2);
        const double refined = h * sum;
        const double change = std::abs(refined - integral);
        integral = refined;
        if (level >= 3 && change <= rel_tol * std::abs(integral) + abs_floor) return integral;
    }
    if (!std::isfinite(integral))
        throw NumericalError("exp-sinh quadrature did not converge");
    return integral;
}

// Integrate f over (0, inf): split at a pivot near the mass of the integrand
// so each piece is handled by the rule suited to it.
template <typename F>
double integrate_positive_axis(F&& f, double pivot, double rel_tol = 1e-10) {
    if (!(pivot > 0.0) || !std::isfinite(pivot)) pivot = 1.0;
    return integrate_finite(f, 0.0, pivot, rel_tol) +
           integrate_upper(f, pivot, rel_tol);
}

}  // namespace gb2kit::quad
