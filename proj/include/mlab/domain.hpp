#pragma once

/// \file domain.hpp
/// \brief Cusp profiles, planar graph domains, and the scale geometry that
///        drives everything else: the modulus of continuity near the cusp
///        tip, the per-degree scale epsilon_n, and convexity diagnostics of
///        the profile tail.
///
/// A profile f maps [0, 1] to [0, +inf) with f(1) = 0 for genuine cusps; the
/// associated domain is { (x, y) : 0 <= x <= 1, |y| <= f(x) } (symmetric) or
/// its upper half.  Three families are supported: power cusps (1-x)^k,
/// logarithmically corrected cusps, and piecewise-quadratic interpolants with
/// a flat cap near x = 0 (the output of the construct module, which also
/// covers constant profiles as the degenerate knot-free case).

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "mlab/errors.hpp"

namespace mlab {

/// A Hermite knot of a flat-cap interpolant: position, value, one-sided slope.
struct ProfileKnot {
    double x = 0.0;
    double value = 0.0;
    double slope = 0.0;
};

/// One quadratic piece value(x) = c0 + c1 (x - a) + c2 (x - a)^2 on [a, b].
struct QuadPiece {
    double a = 0.0;
    double b = 0.0;
    double c0 = 0.0;
    double c1 = 0.0;
    double c2 = 0.0;

    double eval(double x) const {
        const double d = x - a;
        return c0 + d * (c1 + d * c2);
    }
    double deriv(double x) const { return c1 + 2.0 * c2 * (x - a); }
};

/// \brief A cusp profile on [0, 1].
///
/// PowerCusp:  f(x) = (1 - x)^k with k >= 1.
/// LogCusp:    f(x) = t / (1 - ln t) with t = (1 - x)^iota, iota >= 1.
/// FlatCap:    cap_value on [0, knots.front().x], then quadratic pieces,
///             then a power tail c (1 - x)^s.  With no knots the profile is
///             the constant cap_value on all of [0, 1].
struct CuspProfile {
    enum class Kind { PowerCusp, LogCusp, FlatCap };

    Kind kind = Kind::PowerCusp;
    double param = 1.0;     ///< k (PowerCusp), iota (LogCusp), cap height (FlatCap)
    double eta = 0.0;       ///< declared start of the convex strictly-decreasing tail
    std::vector<ProfileKnot> knots; ///< FlatCap only, increasing in x
    std::vector<QuadPiece> pieces;  ///< FlatCap only, contiguous on [knots.front().x, knots.back().x]
    double tail_c = 0.0;    ///< FlatCap tail coefficient
    double tail_s = 0.0;    ///< FlatCap tail exponent
    double tail_x = 1.0;    ///< FlatCap tail start (= knots.back().x)
};

/// Power cusp (1 - x)^k; requires k >= 1.
inline CuspProfile power_cusp(double k) {
    if (!(k >= 1.0)) {
        throw domain_error("domain: power_cusp requires k >= 1, got " + std::to_string(k));
    }
    CuspProfile p;
    p.kind = CuspProfile::Kind::PowerCusp;
    p.param = k;
    p.eta = 0.0;
    return p;
}

/// Logarithmically corrected cusp t / (1 - ln t), t = (1 - x)^iota; iota >= 1.
inline CuspProfile log_cusp(double iota) {
    if (!(iota >= 1.0)) {
        throw domain_error("domain: log_cusp requires iota >= 1, got " + std::to_string(iota));
    }
    CuspProfile p;
    p.kind = CuspProfile::Kind::LogCusp;
    p.param = iota;
    p.eta = 0.0;
    return p;
}

/// Constant profile of the given positive height (a knot-free flat cap).
/// This is the Lipschitz baseline: the domain is a rectangle, not a cusp.
inline CuspProfile flat_profile(double height) {
    if (!(height > 0.0)) {
        throw domain_error("domain: flat_profile requires a positive height");
    }
    CuspProfile p;
    p.kind = CuspProfile::Kind::FlatCap;
    p.param = height;
    p.eta = 0.0;
    return p;
}

/// True when the profile decreases strictly to f(1) = 0, i.e. the domain has
/// an actual cusp at (1, 0).
inline bool is_cuspidal(const CuspProfile& p) {
    if (p.kind == CuspProfile::Kind::FlatCap) {
        return !p.knots.empty();
    }
    return true;
}

/// Left end of the strictly decreasing region ([eta_dec, 1]).
inline double decreasing_start(const CuspProfile& p) {
    if (p.kind == CuspProfile::Kind::FlatCap) {
        if (p.knots.empty()) {
            throw domain_error("domain: constant profile has no strictly decreasing region");
        }
        return p.knots.front().x;
    }
    return 0.0;
}

/// \brief Evaluate the profile as a function of the tip gap u = 1 - x.
///
/// Working in u avoids the catastrophic cancellation of forming 1 - x for
/// x within a few ulps of 1; the scale equation needs u resolved far below
/// the spacing of doubles near 1.  Piece offsets use 1 - a, which is exact
/// for a >= 1/2 (Sterbenz), so no precision is lost re-entering x space.
///
/// \param u  gap in [0, 1]
inline double profile_eval_gap(const CuspProfile& p, double u) {
    if (!(u >= 0.0 && u <= 1.0)) {
        throw domain_error("domain: profile gap must lie in [0, 1], got " + std::to_string(u));
    }
    switch (p.kind) {
    case CuspProfile::Kind::PowerCusp:
        return std::pow(u, p.param);
    case CuspProfile::Kind::LogCusp: {
        // Within one ulp of the tip the correction is indistinguishable from 0.
        if (u <= 1e-15) {
            return 0.0;
        }
        const double t = std::pow(u, p.param);
        return t / (1.0 - std::log(t));
    }
    case CuspProfile::Kind::FlatCap: {
        if (p.knots.empty()) {
            return p.param;
        }
        if (u >= 1.0 - p.knots.front().x) {
            return p.param;
        }
        if (u <= 1.0 - p.tail_x) {
            return p.tail_c * std::pow(u, p.tail_s);
        }
        for (const QuadPiece& piece : p.pieces) {
            if (u >= 1.0 - piece.b) {
                const double d = (1.0 - piece.a) - u; // both subtractions exact for a, b >= 1/2
                return piece.c0 + d * (piece.c1 + d * piece.c2);
            }
        }
        const QuadPiece& last = p.pieces.back();
        const double d = (1.0 - last.a) - u;
        return last.c0 + d * (last.c1 + d * last.c2);
    }
    }
    throw domain_error("domain: unknown profile kind");
}

/// \brief Evaluate the profile at x in [0, 1].
inline double profile_eval(const CuspProfile& p, double x) {
    if (!(x >= 0.0 && x <= 1.0)) {
        throw domain_error("domain: profile argument must lie in [0, 1], got " + std::to_string(x));
    }
    return profile_eval_gap(p, 1.0 - x);
}

/// \brief One-sided (from the right) derivative of the profile at x in [0, 1).
inline double profile_deriv(const CuspProfile& p, double x) {
    if (!(x >= 0.0 && x < 1.0)) {
        throw domain_error("domain: profile_deriv requires x in [0, 1), got " + std::to_string(x));
    }
    const double u = 1.0 - x;
    switch (p.kind) {
    case CuspProfile::Kind::PowerCusp:
        return -p.param * std::pow(u, p.param - 1.0);
    case CuspProfile::Kind::LogCusp: {
        if (u <= 1e-15) {
            return 0.0;
        }
        const double t = std::pow(u, p.param);
        const double one_minus_log = 1.0 - std::log(t);
        return -p.param * std::pow(u, p.param - 1.0) * (2.0 - std::log(t)) /
               (one_minus_log * one_minus_log);
    }
    case CuspProfile::Kind::FlatCap: {
        if (p.knots.empty() || x < p.knots.front().x) {
            return 0.0;
        }
        if (x >= p.tail_x) {
            return -p.tail_c * p.tail_s * std::pow(u, p.tail_s - 1.0);
        }
        for (const QuadPiece& piece : p.pieces) {
            if (x < piece.b) {
                return piece.deriv(x);
            }
        }
        return p.pieces.back().deriv(x);
    }
    }
    throw domain_error("domain: unknown profile kind");
}

/// Supremum of the profile over [0, 1] (attained at x = 0 for every kind).
inline double profile_sup(const CuspProfile& p) { return profile_eval(p, 0.0); }

/// \brief Points of [0, 1] where the profile's defining formula changes.
///
/// Quadrature meshes merge these so no panel straddles a kink.
inline std::vector<double> profile_breakpoints(const CuspProfile& p) {
    std::vector<double> pts;
    if (p.kind == CuspProfile::Kind::FlatCap && !p.knots.empty()) {
        pts.push_back(p.knots.front().x);
        for (const QuadPiece& piece : p.pieces) {
            pts.push_back(piece.b);
        }
        pts.push_back(p.tail_x);
        std::sort(pts.begin(), pts.end());
        pts.erase(std::unique(pts.begin(), pts.end(),
                              [](double a, double b) { return std::abs(a - b) < 1e-15; }),
                  pts.end());
    }
    return pts;
}

/// \brief Gap form of the profile inverse: the u = 1 - x with f(1 - u) = t.
///
/// Solves by 200 fixed bisection steps in u over the strictly decreasing
/// region, which pins the root to adjacent doubles in u itself (far finer
/// than the spacing of doubles near x = 1).
///
/// \param t  target value in (0, f(eta_dec)]
inline double profile_inverse_gap(const CuspProfile& p, double t) {
    const double start = decreasing_start(p);
    const double top = profile_eval_gap(p, 1.0 - start);
    if (!(t > 0.0 && t <= top)) {
        throw domain_error("domain: profile_inverse target must lie in (0, f(eta_dec)], got t=" +
                           std::to_string(t));
    }
    double ulo = 0.0;               // f(1 - u) - t <= 0 here (f(1) = 0)
    double uhi = 1.0 - start;       // f(1 - u) - t >= 0 here
    for (int i = 0; i < 200; ++i) {
        const double umid = 0.5 * (ulo + uhi);
        if (profile_eval_gap(p, umid) - t < 0.0) {
            ulo = umid;
        } else {
            uhi = umid;
        }
    }
    return 0.5 * (ulo + uhi);
}

/// \brief Inverse of the profile on its strictly decreasing region [eta_dec, 1].
/// \param t  target value in (0, f(eta_dec)]
inline double profile_inverse(const CuspProfile& p, double t) {
    return 1.0 - profile_inverse_gap(p, t);
}

/// A planar graph domain over a cusp profile.
struct GraphDomain {
    enum class Symmetry { UpperOnly, Symmetric };

    CuspProfile profile;
    Symmetry symmetry = Symmetry::Symmetric;
};

/// Axis-aligned bounding box of a graph domain.
struct BoundingBox {
    double x_lo = 0.0;
    double x_hi = 1.0;
    double y_lo = 0.0;
    double y_hi = 1.0;
};

/// Bounding box with the y-extent max(1, sup f), so bases stay well scaled
/// for normalised profiles and still cover taller caps.
inline BoundingBox bounding_box(const GraphDomain& d) {
    BoundingBox box;
    const double y = std::max(1.0, profile_sup(d.profile));
    box.x_lo = 0.0;
    box.x_hi = 1.0;
    box.y_hi = y;
    box.y_lo = (d.symmetry == GraphDomain::Symmetry::Symmetric) ? -y : 0.0;
    return box;
}

/// \brief Modulus of continuity of the domain at the cusp tip:
///        omega(t) = sqrt((1 - f^{-1}(t))^2 + t^2) for t in (0, f(eta_dec)].
inline double modulus_of_continuity(const GraphDomain& d, double t) {
    if (!is_cuspidal(d.profile)) {
        throw domain_error("domain: modulus_of_continuity requires a cuspidal profile");
    }
    return std::hypot(profile_inverse_gap(d.profile, t), t);
}

/// Scale data of a domain at degree n.
struct CuspScale {
    int n = 0;
    double epsilon_n = 0.0; ///< root of 2 n^2 omega(eps / n^2) = 1
    double x_n = 0.0;       ///< f^{-1}(eps_n / n^2)
    double u_n = 0.0;       ///< arccos(x_n)
};

/// \brief Solve the scale equation 2 n^2 omega(eps / n^2) = 1 for epsilon_n.
///
/// Bisection runs in t = eps / n^2 over (0, f(eta_dec)] with 300 fixed steps;
/// the residual of the returned root is checked against 1e-12.
///
/// \throws construction_error for non-cuspidal profiles or when the scale
///         equation has no sign change over the bracket
inline CuspScale solve_epsilon_n(const GraphDomain& d, int n) {
    if (n < 1) {
        throw domain_error("domain: solve_epsilon_n requires n >= 1");
    }
    if (!is_cuspidal(d.profile)) {
        throw construction_error(
            "domain: solve_epsilon_n requires a cuspidal profile (constant profiles have no scale)");
    }
    const double n2 = 2.0 * static_cast<double>(n) * static_cast<double>(n);
    // Work in the gap variable throughout: near the root, 1 - x would burn
    // half the mantissa and the residual could never reach 1e-12.
    const auto residual = [&](double t) {
        return n2 * std::hypot(profile_inverse_gap(d.profile, t), t) - 1.0;
    };

    double tlo = 0.0; // residual limit at t -> 0+ is -1
    double thi = profile_eval_gap(d.profile, 1.0 - decreasing_start(d.profile));
    if (residual(thi) < 0.0) {
        throw construction_error("domain: scale equation has no root below f(eta_dec) at n=" +
                                 std::to_string(n));
    }
    for (int i = 0; i < 300; ++i) {
        const double tmid = 0.5 * (tlo + thi);
        if (tmid <= tlo || tmid >= thi) {
            break; // interval collapsed to adjacent doubles
        }
        if (residual(tmid) < 0.0) {
            tlo = tmid;
        } else {
            thi = tmid;
        }
    }
    const double t = 0.5 * (tlo + thi);
    if (std::abs(residual(t)) > 1e-12) {
        throw numerical_error("domain: scale equation residual exceeds 1e-12 at n=" +
                              std::to_string(n));
    }
    CuspScale out;
    out.n = n;
    out.epsilon_n = static_cast<double>(n) * static_cast<double>(n) * t;
    const double gap = profile_inverse_gap(d.profile, t);
    out.x_n = 1.0 - gap;
    // arccos(1 - gap) through the half-angle identity keeps full precision.
    out.u_n = 2.0 * std::asin(std::sqrt(0.5 * gap));
    return out;
}

namespace detail {

/// Uniform 2048-point sample of the profile on [eta, 1 - 1e-9].
inline std::vector<double> tail_grid_values(const CuspProfile& p, double eta) {
    constexpr int kGridSize = 2048;
    const double hi = 1.0 - 1e-9;
    std::vector<double> values(kGridSize);
    for (int i = 0; i < kGridSize; ++i) {
        const double x = eta + (hi - eta) * i / (kGridSize - 1);
        values[i] = profile_eval(p, x);
    }
    return values;
}

/// Discrete convexity of values^{1/r}: every second difference >= -1e-12.
inline bool grid_convex(const std::vector<double>& values, double r) {
    const double inv_r = 1.0 / r;
    std::vector<double> z(values.size());
    for (size_t i = 0; i < values.size(); ++i) {
        z[i] = std::pow(values[i], inv_r);
    }
    for (size_t i = 1; i + 1 < z.size(); ++i) {
        if (z[i - 1] - 2.0 * z[i] + z[i + 1] < -1e-12) {
            return false;
        }
    }
    return true;
}

} // namespace detail

/// \brief Largest r in [1, r_max] such that f^{1/r} is convex on the sampled
///        tail [eta, 1 - 1e-9] (2048 uniform points, slack -1e-12 on second
///        differences, bisection to width 1e-6).
///
/// Returns r_max itself when even f^{1/r_max} is convex; that value means
/// "at least r_max", not an exact index.
///
/// \throws domain_error when f itself (r = 1) is not convex on the grid
inline double index_of_convexity(const CuspProfile& p, double eta, double r_max) {
    if (!(eta >= 0.0 && eta < 1.0) || !(r_max > 1.0)) {
        throw domain_error("domain: index_of_convexity requires eta in [0, 1) and r_max > 1");
    }
    const std::vector<double> values = detail::tail_grid_values(p, eta);
    if (!detail::grid_convex(values, 1.0)) {
        throw domain_error("domain: profile is not convex on [eta, 1) at r = 1");
    }
    if (detail::grid_convex(values, r_max)) {
        return r_max;
    }
    double lo = 1.0;
    double hi = r_max;
    while (hi - lo > 1e-6) {
        const double mid = 0.5 * (lo + hi);
        if (detail::grid_convex(values, mid)) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

/// Diagnostics of the profile tail produced by validate_regular_cusp.
struct RegularityReport {
    bool convex_tail = false;    ///< f convex on [eta, 1 - 1e-9] (grid test)
    double i_conv = 0.0;         ///< grid index of convexity (r_max-capped)
    double margin = 0.0;         ///< min over grid of (i_conv + 0.01) f + f' (1 - x)
    bool regular = false;        ///< convex tail with finite index
};

/// \brief Run the regular-cusp diagnostics on a domain's profile.
///
/// The margin is the grid minimum of (I + 0.01) f(x) + f'(x) (1 - x); it is
/// nonnegative for power and flat-cap tails, and reported (without a sign
/// requirement) for profiles whose curvature concentrates at the tip faster
/// than the sampled index can see.
inline RegularityReport validate_regular_cusp(const GraphDomain& d) {
    constexpr double kRMax = 16.0;
    const CuspProfile& p = d.profile;
    RegularityReport rep;

    const std::vector<double> values = detail::tail_grid_values(p, p.eta);
    rep.convex_tail = detail::grid_convex(values, 1.0);
    if (!rep.convex_tail) {
        rep.i_conv = std::numeric_limits<double>::quiet_NaN();
        rep.margin = std::numeric_limits<double>::quiet_NaN();
        rep.regular = false;
        return rep;
    }
    rep.i_conv = index_of_convexity(p, p.eta, kRMax);

    constexpr int kGridSize = 2048;
    const double hi = 1.0 - 1e-9;
    double margin = std::numeric_limits<double>::infinity();
    for (int i = 0; i < kGridSize; ++i) {
        const double x = p.eta + (hi - p.eta) * i / (kGridSize - 1);
        const double value = (rep.i_conv + 0.01) * profile_eval(p, x) +
                             profile_deriv(p, x) * (1.0 - x);
        margin = std::min(margin, value);
    }
    rep.margin = margin;
    rep.regular = rep.convex_tail && rep.i_conv < kRMax;
    return rep;
}

} // namespace mlab
