#pragma once

/// \file jacobi.hpp
/// \brief Jacobi polynomials and the classical asymptotics used to reason
///        about them: Bessel functions of the first kind, the Mehler-Heine
///        scaling limit, Darboux's trigonometric approximation, zero
///        localisation in angle space, and a two-branch envelope bound.
///
/// Evaluation is by the standard three-term recurrence in double precision;
/// every other operation is built on top of it.  Angles are always measured
/// through the substitution x = cos(theta), theta in (0, pi).

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "mlab/errors.hpp"

namespace mlab {

/// Parameter pair (alpha, beta) of a Jacobi family P_n^{(alpha,beta)}.
struct JacobiParams {
    double alpha = 0.0;
    double beta = 0.0;

    /// \throws domain_error unless both parameters exceed -1.
    void validate() const {
        if (!(alpha > -1.0) || !(beta > -1.0)) {
            throw domain_error("jacobi: parameters must satisfy alpha > -1 and beta > -1, got alpha=" +
                               std::to_string(alpha) + " beta=" + std::to_string(beta));
        }
    }
};

/// \brief Evaluate P_n^{(alpha,beta)}(x) by forward recurrence.
///
/// Normalisation is the classical one with P_n(1) = binom(n + alpha, n).
///
/// \param params  family parameters, each > -1
/// \param n       degree, n >= 0
/// \param x       evaluation point in [-1, 1]
/// \throws domain_error on invalid parameters, negative degree, or x outside [-1, 1]
inline double jacobi_eval(const JacobiParams& params, int n, double x) {
    params.validate();
    if (n < 0) {
        throw domain_error("jacobi: degree must be nonnegative, got n=" + std::to_string(n));
    }
    if (!(x >= -1.0 && x <= 1.0)) {
        throw domain_error("jacobi: evaluation point must lie in [-1, 1], got x=" + std::to_string(x));
    }

    const double a = params.alpha;
    const double b = params.beta;
    if (n == 0) {
        return 1.0;
    }
    double pm1 = 1.0;                                  // P_0
    double p = 0.5 * ((a + b + 2.0) * x + (a - b));    // P_1
    for (int k = 2; k <= n; ++k) {
        const double s = 2.0 * k + a + b;              // 2k + alpha + beta
        const double c0 = 2.0 * k * (k + a + b) * (s - 2.0);
        const double c1 = (s - 1.0) * (s * (s - 2.0) * x + a * a - b * b);
        const double c2 = 2.0 * (k + a - 1.0) * (k + b - 1.0) * s;
        const double next = (c1 * p - c2 * pm1) / c0;
        pm1 = p;
        p = next;
    }
    return p;
}

/// \brief Evaluate d/dx P_n^{(alpha,beta)}(x) through the shifted-family
///        identity: the derivative is ((n + alpha + beta + 1) / 2) times
///        P_{n-1} of the family (alpha + 1, beta + 1).
inline double jacobi_deriv(const JacobiParams& params, int n, double x) {
    params.validate();
    if (n < 0) {
        throw domain_error("jacobi: degree must be nonnegative, got n=" + std::to_string(n));
    }
    if (n == 0) {
        return 0.0;
    }
    const JacobiParams shifted{params.alpha + 1.0, params.beta + 1.0};
    return 0.5 * (n + params.alpha + params.beta + 1.0) * jacobi_eval(shifted, n - 1, x);
}

/// \brief Bessel function of the first kind J_alpha(z) by its ascending series.
///
/// Terms are accumulated until the next one falls below 1e-17 of the running
/// sum; the supported argument range [0, 50] keeps the alternating series
/// well conditioned at this precision.
///
/// \param alpha  order, alpha > -1
/// \param z      argument in [0, 50]
/// \throws domain_error    for z outside [0, 50] or alpha <= -1
/// \throws numerical_error if 200 terms do not reach the tolerance
inline double bessel_j(double alpha, double z) {
    if (!(alpha > -1.0)) {
        throw domain_error("jacobi: bessel_j requires alpha > -1, got " + std::to_string(alpha));
    }
    if (!(z >= 0.0 && z <= 50.0)) {
        throw domain_error("jacobi: bessel_j supports z in [0, 50], got " + std::to_string(z));
    }
    if (z == 0.0) {
        if (alpha == 0.0) {
            return 1.0;
        }
        return alpha > 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    }

    const long double half = 0.5L * static_cast<long double>(z);
    // Leading term (z/2)^alpha / Gamma(alpha + 1), formed in log space so
    // fractional orders stay accurate.  The sum runs in long double because
    // the alternating terms peak near exp(z) before cancelling down to O(1).
    long double term = expl(static_cast<long double>(alpha) * logl(half) -
                            lgammal(static_cast<long double>(alpha) + 1.0L));
    long double sum = term;
    const long double ratio_base = -half * half;
    for (int m = 0; m < 200; ++m) {
        term *= ratio_base / ((m + 1.0L) * (m + 1.0L + static_cast<long double>(alpha)));
        sum += term;
        if (fabsl(term) <= 1e-17L * fabsl(sum)) {
            return static_cast<double>(sum);
        }
    }
    throw numerical_error("jacobi: bessel_j series did not converge within 200 terms at z=" +
                          std::to_string(z));
}

/// \brief Absolute gap | n^{-alpha} P_n(cos(z/n)) - (z/2)^{-alpha} J_alpha(z) |
///        between the scaled polynomial and its Mehler-Heine limit.
///
/// \param z  scaling variable, 0 < z <= n (and z <= 50 for the Bessel factor)
inline double mehler_heine_gap(const JacobiParams& params, double z, int n) {
    params.validate();
    if (n < 1) {
        throw domain_error("jacobi: mehler_heine_gap requires n >= 1");
    }
    if (!(z > 0.0 && z <= static_cast<double>(n))) {
        throw domain_error("jacobi: mehler_heine_gap requires 0 < z <= n, got z=" + std::to_string(z));
    }
    const double scaled_poly =
        std::pow(static_cast<double>(n), -params.alpha) * jacobi_eval(params, n, std::cos(z / n));
    const double limit = std::pow(0.5 * z, -params.alpha) * bessel_j(params.alpha, z);
    return std::abs(scaled_poly - limit);
}

/// Ingredients of Darboux's interior approximation
///   P_n(cos theta) ~ n^{-1/2} k(theta) cos(N theta + gamma).
struct DarbouxApprox {
    double k_theta = 0.0; ///< amplitude k(theta)
    double big_n = 0.0;   ///< frequency N = n + (alpha + beta + 1) / 2
    double gamma = 0.0;   ///< phase gamma = -(alpha + 1/2) pi / 2
};

/// \brief Amplitude, frequency and phase of the Darboux approximation at theta.
/// \param theta  angle strictly inside (0, pi)
inline DarbouxApprox darboux_approx(const JacobiParams& params, int n, double theta) {
    params.validate();
    if (n < 1) {
        throw domain_error("jacobi: darboux_approx requires n >= 1");
    }
    if (!(theta > 0.0 && theta < M_PI)) {
        throw domain_error("jacobi: darboux_approx requires theta in (0, pi), got " +
                           std::to_string(theta));
    }
    DarbouxApprox out;
    const double s = std::sin(0.5 * theta);
    const double c = std::cos(0.5 * theta);
    out.k_theta = std::pow(M_PI, -0.5) * std::pow(s, -params.alpha - 0.5) *
                  std::pow(c, -params.beta - 0.5);
    out.big_n = n + 0.5 * (params.alpha + params.beta + 1.0);
    out.gamma = -0.5 * (params.alpha + 0.5) * M_PI;
    return out;
}

/// \brief Value of the Darboux approximation n^{-1/2} k(theta) cos(N theta + gamma).
inline double darboux_eval(const JacobiParams& params, int n, double theta) {
    const DarbouxApprox d = darboux_approx(params, n, theta);
    return std::pow(static_cast<double>(n), -0.5) * d.k_theta *
           std::cos(d.big_n * theta + d.gamma);
}

/// \brief Zeros of theta -> P_n^{(alpha,beta)}(cos theta) inside [a, b].
///
/// Initial guesses come from the phase of the Darboux cosine; each guess is
/// refined by a Newton iteration safeguarded by bisection on a bracket of
/// width one Darboux half-period.  Results are strictly increasing.
///
/// \param a,b  angle window with 0 < a < b < pi
/// \throws numerical_error if a zero fails to converge within 50 steps
inline std::vector<double> jacobi_zeros_theta(const JacobiParams& params, int n,
                                              double a, double b) {
    params.validate();
    if (n < 1) {
        throw domain_error("jacobi: jacobi_zeros_theta requires n >= 1");
    }
    if (!(0.0 < a && a < b && b < M_PI)) {
        throw domain_error("jacobi: jacobi_zeros_theta requires 0 < a < b < pi");
    }

    const auto g = [&](double theta) { return jacobi_eval(params, n, std::cos(theta)); };
    const auto dg = [&](double theta) {
        return -std::sin(theta) * jacobi_deriv(params, n, std::cos(theta));
    };

    const double big_n = n + 0.5 * (params.alpha + params.beta + 1.0);
    const double gamma = -0.5 * (params.alpha + 0.5) * M_PI;
    // Darboux phase puts the l-th zero near ((l - 1/2) pi - gamma) / N.
    const int l_lo = static_cast<int>(std::floor((big_n * a + gamma) / M_PI + 0.5));
    const int l_hi = static_cast<int>(std::ceil((big_n * b + gamma) / M_PI + 0.5));

    std::vector<double> zeros;
    const double half_period = 0.5 * M_PI / big_n;
    for (int l = l_lo; l <= l_hi; ++l) {
        const double guess = ((l - 0.5) * M_PI - gamma) / big_n;
        if (guess <= 0.0 || guess >= M_PI) {
            continue;
        }
        // Bracket one half-period around the guess, clipped into (0, pi).
        double lo = std::max(guess - 0.9 * half_period, 1e-12);
        double hi = std::min(guess + 0.9 * half_period, M_PI - 1e-12);
        double flo = g(lo);
        double fhi = g(hi);
        if (flo == 0.0) {
            hi = lo;
        } else if (fhi == 0.0) {
            lo = hi;
        } else if (flo * fhi > 0.0) {
            continue; // no sign change: the guess fell between zero cells
        }

        double theta = guess;
        bool converged = false;
        for (int step = 0; step < 50 && !converged; ++step) {
            const double val = g(theta);
            if (val == 0.0) {
                converged = true;
                break;
            }
            if (val * flo < 0.0) {
                hi = theta;
                fhi = val;
            } else {
                lo = theta;
                flo = val;
            }
            const double der = dg(theta);
            double next = (der != 0.0) ? theta - val / der : 0.5 * (lo + hi);
            if (!(next > lo && next < hi)) {
                next = 0.5 * (lo + hi); // Newton left the bracket: bisect
            }
            if (std::abs(next - theta) <= 1e-15 * std::max(1.0, std::abs(theta))) {
                theta = next;
                converged = true;
            }
            theta = next;
            if (hi - lo <= 1e-15) {
                converged = true;
            }
        }
        if (!converged) {
            throw numerical_error("jacobi: zero refinement failed to converge near theta=" +
                                  std::to_string(guess));
        }
        if (theta >= a && theta <= b) {
            if (zeros.empty() || theta - zeros.back() > half_period * 1e-6) {
                zeros.push_back(theta);
            }
        }
    }
    return zeros;
}

/// \brief Two-branch envelope bound for |P_n^{(alpha,beta)}(cos theta)|:
///        n^alpha on (0, 1/n] and n^{-1/2} theta^{-alpha-1/2} on
///        [1/n, pi - 0.1].  The branches agree exactly at theta = 1/n.
///
/// Valid for alpha >= beta >= -1/2, the regime in which the tip at theta = 0
/// is the dominant endpoint.
inline double envelope_bound(const JacobiParams& params, int n, double theta) {
    params.validate();
    if (!(params.beta >= -0.5) || !(params.alpha >= params.beta)) {
        throw domain_error("jacobi: envelope_bound requires alpha >= beta >= -1/2");
    }
    if (n < 1) {
        throw domain_error("jacobi: envelope_bound requires n >= 1");
    }
    if (!(theta > 0.0 && theta <= M_PI - 0.1)) {
        throw domain_error("jacobi: envelope_bound requires theta in (0, pi - 0.1], got " +
                           std::to_string(theta));
    }
    const double split = 1.0 / n;
    if (theta <= split) {
        return std::pow(static_cast<double>(n), params.alpha);
    }
    return std::pow(static_cast<double>(n), -0.5) * std::pow(theta, -params.alpha - 0.5);
}

} // namespace mlab
