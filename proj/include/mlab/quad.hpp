#pragma once

/// \file quad.hpp
/// \brief Quadrature for cusp-domain integrals: Gauss-Legendre rules, meshes
///        geometrically graded toward the cusp tip, and the two workhorse
///        integrals of the laboratory -- weighted L^p line integrals of
///        Jacobi polynomials and L^p norms of bivariate polynomials over
///        graph domains.
///
/// Determinism: all reductions run in a fixed pairwise order over panel
/// index, so results are bit-identical across runs and thread counts.

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "mlab/domain.hpp"
#include "mlab/errors.hpp"
#include "mlab/jacobi.hpp"
#include "mlab/poly2d.hpp"

namespace mlab {

namespace fault {
/// Test hook for fault injection: added to the first Gauss-Legendre weight
/// before the rule's sum invariant is checked.  Zero in normal operation.
inline double quad_weight_perturbation = 0.0;
} // namespace fault

/// Nodes and weights of a quadrature rule on [-1, 1].
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// \brief m-point Gauss-Legendre rule on [-1, 1], 1 <= m <= 256.
///
/// Nodes are Newton-refined Legendre roots from Chebyshev initial guesses;
/// weights use 2 / ((1 - x^2) L'_m(x)^2).  The weight sum is verified
/// against 2 to 1e-13 before the rule is returned.
inline QuadratureRule gauss_legendre(int m) {
    if (m < 1 || m > 256) {
        throw config_error("quad: gauss_legendre supports 1 <= m <= 256, got " + std::to_string(m));
    }
    QuadratureRule rule;
    rule.nodes.resize(m);
    rule.weights.resize(m);
    if (m == 1) {
        rule.nodes[0] = 0.0;
        rule.weights[0] = 2.0;
    } else {
        const JacobiParams leg{0.0, 0.0};
        for (int i = 0; i < (m + 1) / 2; ++i) {
            double x = std::cos(M_PI * (i + 0.75) / (m + 0.5));
            double d = 0.0;
            for (int it = 0; it < 100; ++it) {
                const double v = jacobi_eval(leg, m, x);
                d = jacobi_deriv(leg, m, x);
                const double step = v / d;
                x -= step;
                if (std::abs(step) < 1e-15) {
                    break;
                }
            }
            d = jacobi_deriv(leg, m, x);
            const double w = 2.0 / ((1.0 - x * x) * d * d);
            // Fill symmetrically; for odd m the middle node lands on 0.
            rule.nodes[m - 1 - i] = x;
            rule.nodes[i] = -x;
            rule.weights[i] = w;
            rule.weights[m - 1 - i] = w;
        }
        if (m % 2 == 1) {
            rule.nodes[m / 2] = 0.0;
        }
    }

    rule.weights[0] += fault::quad_weight_perturbation;
    double sum = 0.0;
    for (double w : rule.weights) {
        sum += w;
    }
    if (std::abs(sum - 2.0) > 1e-13) {
        throw numerical_error("quad: Gauss-Legendre weight sum deviates from 2 by " +
                              std::to_string(sum - 2.0) + " at m=" + std::to_string(m));
    }
    return rule;
}

/// A partition of [lo, hi] into panels, geometrically graded toward hi.
struct GradedMesh {
    std::vector<double> breakpoints; ///< strictly increasing, first = lo, last = hi

    int panel_count() const { return static_cast<int>(breakpoints.size()) - 1; }
    double lo() const { return breakpoints.front(); }
    double hi() const { return breakpoints.back(); }
};

/// \brief Mesh on [lo, hi] graded toward hi: breakpoints lo and
///        hi - (hi - lo) rho^j for j = 1..depth, then hi (depth + 1 panels).
inline GradedMesh graded_mesh(double lo, double hi, double rho = 0.5, int depth = 40) {
    if (!(lo < hi)) {
        throw config_error("quad: graded_mesh requires lo < hi");
    }
    if (!(rho > 0.0 && rho < 1.0) || depth < 1 || depth > 60) {
        throw config_error("quad: graded_mesh requires rho in (0, 1) and depth in [1, 60]");
    }
    GradedMesh mesh;
    mesh.breakpoints.reserve(depth + 2);
    mesh.breakpoints.push_back(lo);
    const double span = hi - lo;
    for (int j = depth; j >= 1; --j) {
        const double b = hi - span * std::pow(rho, static_cast<double>(depth + 1 - j));
        if (b > mesh.breakpoints.back() && b < hi) {
            mesh.breakpoints.push_back(b);
        }
    }
    mesh.breakpoints.push_back(hi);
    return mesh;
}

/// \brief Insert extra breakpoints (profile kinks, polynomial zeros) into a
///        mesh, keeping it sorted and deduplicated.
inline GradedMesh mesh_with_breakpoints(const GradedMesh& mesh, const std::vector<double>& extra) {
    GradedMesh out = mesh;
    for (double b : extra) {
        if (b > mesh.lo() + 1e-14 && b < mesh.hi() - 1e-14) {
            out.breakpoints.push_back(b);
        }
    }
    std::sort(out.breakpoints.begin(), out.breakpoints.end());
    out.breakpoints.erase(std::unique(out.breakpoints.begin(), out.breakpoints.end(),
                                      [](double a, double b) { return b - a < 1e-14; }),
                          out.breakpoints.end());
    if (out.breakpoints.back() != mesh.hi()) {
        out.breakpoints.push_back(mesh.hi());
    }
    return out;
}

/// Graded mesh on [lo, hi] that respects a profile's piece boundaries.
inline GradedMesh graded_mesh_for_profile(const CuspProfile& p, double lo = 0.0, double hi = 1.0,
                                          double rho = 0.5, int depth = 40) {
    return mesh_with_breakpoints(graded_mesh(lo, hi, rho, depth), profile_breakpoints(p));
}

namespace detail {

/// Sum values[lo, hi) pairwise: fixed reduction tree, independent of any
/// runtime threading, accurate to O(log n) rounding.
inline double pairwise_sum(const std::vector<double>& values, size_t lo, size_t hi) {
    const size_t n = hi - lo;
    if (n == 0) {
        return 0.0;
    }
    if (n <= 4) {
        double acc = 0.0;
        for (size_t i = lo; i < hi; ++i) {
            acc += values[i];
        }
        return acc;
    }
    const size_t mid = lo + n / 2;
    return pairwise_sum(values, lo, mid) + pairwise_sum(values, mid, hi);
}

inline double pairwise_sum(const std::vector<double>& values) {
    return pairwise_sum(values, 0, values.size());
}

} // namespace detail

/// \brief Integrate f over a graded mesh with the given per-panel rule.
///
/// Panel contributions are reduced pairwise by panel index.
template <class F>
double integrate_graded(F&& f, const GradedMesh& mesh, const QuadratureRule& rule) {
    const int panels = mesh.panel_count();
    std::vector<double> contributions(panels);
    for (int k = 0; k < panels; ++k) {
        const double a = mesh.breakpoints[k];
        const double b = mesh.breakpoints[k + 1];
        const double mid = 0.5 * (a + b);
        const double halfwidth = 0.5 * (b - a);
        double acc = 0.0;
        for (size_t i = 0; i < rule.nodes.size(); ++i) {
            acc += rule.weights[i] * f(mid + halfwidth * rule.nodes[i]);
        }
        contributions[k] = halfwidth * acc;
    }
    return detail::pairwise_sum(contributions);
}

namespace detail {

/// True when p is an even integer (|P|^p is then smooth across sign changes).
inline bool is_even_integer(double p) {
    return p == std::floor(p) && (static_cast<long long>(p) % 2 == 0);
}

/// Zeros of P_n^{(alpha,beta)} inside (lo, hi), as x-coordinates.
inline std::vector<double> jacobi_zeros_x(const JacobiParams& params, int n, double lo, double hi) {
    std::vector<double> out;
    if (n < 1) {
        return out;
    }
    const double a = std::max(lo, -1.0 + 1e-12);
    const double b = std::min(hi, 1.0 - 1e-12);
    if (!(a < b)) {
        return out;
    }
    // Angle window: theta decreasing in x.
    const double th_lo = std::acos(b);
    const double th_hi = std::acos(a);
    if (!(th_lo < th_hi)) {
        return out;
    }
    for (double th : jacobi_zeros_theta(params, n, std::max(th_lo, 1e-10),
                                        std::min(th_hi, M_PI - 1e-10))) {
        out.push_back(std::cos(th));
    }
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace detail

/// \brief Weighted L^p line integral of a Jacobi polynomial:
///        integral over [mesh.lo, mesh.hi] of
///        f(x)^weight_power |P_n^{(alpha,beta)}(x)|^p dx.
///
/// With weight_power = 0 the profile is never evaluated and the mesh may
/// cover any subinterval of [-1, 1]; otherwise the mesh must lie in [0, 1].
/// For p that is not an even integer the mesh is split at the polynomial's
/// zeros so every panel sees a smooth integrand.
///
/// \param nodes_per_panel  0 selects max(16, ceil(8 n / panels), n + 16);
///                         an explicit count must keep the total >= 8 n
inline double lp_weighted_line(const CuspProfile& profile, double weight_power,
                               const JacobiParams& params, int n, double p,
                               const GradedMesh& mesh, int nodes_per_panel = 0) {
    params.validate();
    if (n < 0) {
        throw domain_error("quad: lp_weighted_line requires n >= 0");
    }
    if (!(p >= 1.0)) {
        throw domain_error("quad: lp_weighted_line requires p >= 1, got " + std::to_string(p));
    }
    if (!(mesh.lo() >= -1.0 - 1e-15 && mesh.hi() <= 1.0 + 1e-15)) {
        throw domain_error("quad: integration range must lie in [-1, 1]");
    }
    if (weight_power != 0.0 && mesh.lo() < -1e-15) {
        throw domain_error("quad: weighted integrals require a mesh inside [0, 1]");
    }

    GradedMesh work = mesh;
    if (!detail::is_even_integer(p)) {
        work = mesh_with_breakpoints(work, detail::jacobi_zeros_x(params, n, mesh.lo(), mesh.hi()));
    }
    int m = nodes_per_panel;
    if (m == 0) {
        m = std::max({16, static_cast<int>(std::ceil(8.0 * n / work.panel_count())), n + 16});
        if (m > 256) {
            // Past the rule cap, spend the extra resolution on the mesh: split
            // every panel so the oscillation count per panel stays bounded.
            const int split = static_cast<int>(std::ceil(m / 128.0));
            GradedMesh refined;
            refined.breakpoints.push_back(work.breakpoints.front());
            for (int k = 0; k + 1 < static_cast<int>(work.breakpoints.size()); ++k) {
                const double a = work.breakpoints[k];
                const double b = work.breakpoints[k + 1];
                for (int s = 1; s <= split; ++s) {
                    refined.breakpoints.push_back(a + (b - a) * s / split);
                }
            }
            work = refined;
            m = 256;
        }
    }
    const int panels = work.panel_count();
    if (m > 256) {
        throw config_error("quad: nodes per panel " + std::to_string(m) +
                           " exceeds the 256-point rule cap; refine the mesh instead");
    }
    if (static_cast<long long>(m) * panels < 8LL * n) {
        throw config_error("quad: total node count " + std::to_string(m * panels) +
                           " is below the required 8 n = " + std::to_string(8 * n));
    }
    const QuadratureRule rule = gauss_legendre(m);

    const auto integrand = [&](double x) {
        const double poly = std::abs(jacobi_eval(params, n, x));
        const double weight = (weight_power == 0.0)
                                  ? 1.0
                                  : std::pow(profile_eval(profile, x), weight_power);
        return weight * std::pow(poly, p);
    };
    return integrate_graded(integrand, work, rule);
}

namespace detail {

/// Inner integral of |Q(x, .)|^p over [y0, y1] by Gauss-Legendre, splitting
/// at sampled sign changes when p is not an even integer.
inline double inner_abs_power_integral(const Poly2D& poly, double x, double y0, double y1,
                                       double p, const QuadratureRule& rule) {
    if (!(y1 > y0)) {
        return 0.0;
    }
    std::vector<double> cuts = {y0, y1};
    if (!is_even_integer(p)) {
        const int samples = std::max(8, 4 * poly.degree);
        double prev_y = y0;
        double prev_v = poly2d_eval(poly, x, y0);
        for (int i = 1; i <= samples; ++i) {
            const double y = y0 + (y1 - y0) * i / samples;
            const double v = poly2d_eval(poly, x, y);
            if (prev_v == 0.0 || (prev_v < 0.0) != (v < 0.0)) {
                // Bisect the bracket to the crossing.
                double a = prev_y, b = y, fa = prev_v;
                for (int it = 0; it < 60; ++it) {
                    const double mid = 0.5 * (a + b);
                    const double fm = poly2d_eval(poly, x, mid);
                    if (fa == 0.0 || (fa < 0.0) == (fm < 0.0)) {
                        a = mid;
                        fa = fm;
                    } else {
                        b = mid;
                    }
                }
                cuts.push_back(0.5 * (a + b));
            }
            prev_y = y;
            prev_v = v;
        }
        std::sort(cuts.begin(), cuts.end());
        cuts.erase(std::unique(cuts.begin(), cuts.end(),
                               [&](double a, double b) { return b - a < 1e-14 * (y1 - y0); }),
                   cuts.end());
    }

    double acc = 0.0;
    for (size_t s = 0; s + 1 < cuts.size(); ++s) {
        const double mid = 0.5 * (cuts[s] + cuts[s + 1]);
        const double halfwidth = 0.5 * (cuts[s + 1] - cuts[s]);
        double seg = 0.0;
        for (size_t i = 0; i < rule.nodes.size(); ++i) {
            const double y = mid + halfwidth * rule.nodes[i];
            seg += rule.weights[i] * std::pow(std::abs(poly2d_eval(poly, x, y)), p);
        }
        acc += halfwidth * seg;
    }
    return acc;
}

} // namespace detail

/// \brief p-th power of the L^p norm of a bivariate polynomial over a graph
///        domain: integral of |Q(x, y)|^p over { 0 <= x <= 1, y between
///        -f(x) (or 0) and f(x) }.
///
/// The outer rule uses max(16, degree + 2) nodes per panel of the given
/// mesh.  inner_nodes = 0 requests the analytic inner integral, available
/// exactly when Q = y q(x) in the monomial basis: the inner integral is then
/// f^{p+1} |q|^p / (p + 1), doubled for symmetric domains.
inline double lp_norm_pth_power(const GraphDomain& domain, const Poly2D& poly, double p,
                                const GradedMesh& mesh, int inner_nodes) {
    if (!(p >= 1.0)) {
        throw domain_error("quad: lp_norm_pth_power requires p >= 1, got " + std::to_string(p));
    }
    if (!(mesh.lo() >= -1e-15 && mesh.hi() <= 1.0 + 1e-15)) {
        throw domain_error("quad: domain integrals require a mesh inside [0, 1]");
    }
    if (inner_nodes < 0 || inner_nodes > 256) {
        throw config_error("quad: inner_nodes must lie in [0, 256]");
    }

    std::vector<double> separable;
    if (inner_nodes == 0) {
        separable = poly2d_separable_y_factor(poly);
        if (separable.empty()) {
            throw config_error(
                "quad: analytic inner integration (inner_nodes = 0) requires a monomial-basis "
                "polynomial of the form y * q(x)");
        }
    }

    const GradedMesh work = mesh_with_breakpoints(mesh, profile_breakpoints(domain.profile));
    const int outer_m = std::max(16, poly.degree + 2);
    const QuadratureRule outer_rule = gauss_legendre(outer_m);
    const QuadratureRule inner_rule =
        (inner_nodes > 0) ? gauss_legendre(inner_nodes) : QuadratureRule{};
    const bool symmetric = domain.symmetry == GraphDomain::Symmetry::Symmetric;

    const auto column = [&](double x) -> double {
        const double fx = profile_eval(domain.profile, x);
        if (fx <= 0.0) {
            return 0.0;
        }
        if (!separable.empty()) {
            double q = 0.0;
            for (int i = static_cast<int>(separable.size()) - 1; i >= 0; --i) {
                q = q * x + separable[i];
            }
            const double inner = std::pow(fx, p + 1.0) / (p + 1.0) * std::pow(std::abs(q), p);
            return symmetric ? 2.0 * inner : inner;
        }
        if (symmetric) {
            // |Q|^p is integrated on both halves; they differ unless Q is
            // even in y, so integrate each half explicitly.
            return detail::inner_abs_power_integral(poly, x, -fx, 0.0, p, inner_rule) +
                   detail::inner_abs_power_integral(poly, x, 0.0, fx, p, inner_rule);
        }
        return detail::inner_abs_power_integral(poly, x, 0.0, fx, p, inner_rule);
    };

    const int panels = work.panel_count();
    std::vector<double> contributions(panels);
    for (int k = 0; k < panels; ++k) {
        const double a = work.breakpoints[k];
        const double b = work.breakpoints[k + 1];
        const double mid = 0.5 * (a + b);
        const double halfwidth = 0.5 * (b - a);
        double acc = 0.0;
        for (size_t i = 0; i < outer_rule.nodes.size(); ++i) {
            acc += outer_rule.weights[i] * column(mid + halfwidth * outer_rule.nodes[i]);
        }
        contributions[k] = halfwidth * acc;
    }
    return detail::pairwise_sum(contributions);
}

} // namespace mlab
