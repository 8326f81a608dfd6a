#pragma once

/// \file poly2d.hpp
/// \brief Bivariate polynomials of bounded total degree in one of two bases:
///        raw monomials x^i y^j, or a tensor-Legendre basis scaled to a
///        bounding box.  Coefficients are stored over the triangular index
///        set { (i, j) : i + j <= degree } in graded order.
///
/// The graded index of (i, j) is t (t + 1) / 2 + j with t = i + j, so for a
/// fixed total degree t the entries run j = 0 .. t.

#include <cmath>
#include <string>
#include <vector>

#include "mlab/domain.hpp"
#include "mlab/errors.hpp"

namespace mlab {

/// Number of monomials of total degree <= degree in two variables.
inline int poly2d_dimension(int degree) { return (degree + 1) * (degree + 2) / 2; }

/// Graded index of the basis element with x-exponent i and y-exponent j.
inline int poly2d_index(int i, int j) {
    const int t = i + j;
    return t * (t + 1) / 2 + j;
}

/// A bivariate polynomial of bounded total degree.
struct Poly2D {
    enum class Basis { Monomial, TensorLegendre };

    Basis basis = Basis::Monomial;
    int degree = 0;
    BoundingBox box;                ///< scaling box for the tensor-Legendre basis
    std::vector<double> coeffs;     ///< graded order, size poly2d_dimension(degree)
};

/// Zero polynomial of the requested degree and basis.
inline Poly2D make_poly2d(Poly2D::Basis basis, int degree, const BoundingBox& box = {}) {
    if (degree < 0) {
        throw domain_error("poly2d: degree must be nonnegative");
    }
    Poly2D p;
    p.basis = basis;
    p.degree = degree;
    p.box = box;
    p.coeffs.assign(poly2d_dimension(degree), 0.0);
    return p;
}

namespace detail {

/// Legendre values L_0..L_deg and derivatives at s, by the three-term and
/// derivative recurrences (L'_k = L'_{k-2} + (2k - 1) L_{k-1}, stable at
/// the interval ends).
inline void legendre_values(int deg, double s, std::vector<double>& vals,
                            std::vector<double>& ders) {
    vals.resize(deg + 1);
    ders.resize(deg + 1);
    vals[0] = 1.0;
    ders[0] = 0.0;
    if (deg >= 1) {
        vals[1] = s;
        ders[1] = 1.0;
    }
    for (int k = 2; k <= deg; ++k) {
        vals[k] = ((2.0 * k - 1.0) * s * vals[k - 1] - (k - 1.0) * vals[k - 2]) / k;
        ders[k] = ders[k - 2] + (2.0 * k - 1.0) * vals[k - 1];
    }
}

} // namespace detail

/// \brief Values (and optionally x/y partial derivatives) of every basis
///        element at (x, y), in graded order.
///
/// Pass nullptr for derivative outputs that are not needed.  Vectors are
/// resized to poly2d_dimension(degree).
inline void poly2d_basis(const Poly2D& p, double x, double y, std::vector<double>* vals,
                         std::vector<double>* dx, std::vector<double>* dy) {
    const int dim = poly2d_dimension(p.degree);
    if (vals) vals->resize(dim);
    if (dx) dx->resize(dim);
    if (dy) dy->resize(dim);

    if (p.basis == Poly2D::Basis::Monomial) {
        std::vector<double> xp(p.degree + 1, 1.0), yp(p.degree + 1, 1.0);
        for (int k = 1; k <= p.degree; ++k) {
            xp[k] = xp[k - 1] * x;
            yp[k] = yp[k - 1] * y;
        }
        for (int t = 0; t <= p.degree; ++t) {
            for (int j = 0; j <= t; ++j) {
                const int i = t - j;
                const int idx = poly2d_index(i, j);
                if (vals) (*vals)[idx] = xp[i] * yp[j];
                if (dx) (*dx)[idx] = (i > 0) ? i * xp[i - 1] * yp[j] : 0.0;
                if (dy) (*dy)[idx] = (j > 0) ? j * xp[i] * yp[j - 1] : 0.0;
            }
        }
        return;
    }

    // Tensor-Legendre: L_i(sx) L_j(sy) with affine maps onto [-1, 1].
    const double cx = 2.0 / (p.box.x_hi - p.box.x_lo);
    const double cy = 2.0 / (p.box.y_hi - p.box.y_lo);
    const double sx = cx * (x - p.box.x_lo) - 1.0;
    const double sy = cy * (y - p.box.y_lo) - 1.0;
    std::vector<double> lx, dlx, ly, dly;
    detail::legendre_values(p.degree, sx, lx, dlx);
    detail::legendre_values(p.degree, sy, ly, dly);
    for (int t = 0; t <= p.degree; ++t) {
        for (int j = 0; j <= t; ++j) {
            const int i = t - j;
            const int idx = poly2d_index(i, j);
            if (vals) (*vals)[idx] = lx[i] * ly[j];
            if (dx) (*dx)[idx] = cx * dlx[i] * ly[j];
            if (dy) (*dy)[idx] = cy * lx[i] * dly[j];
        }
    }
}

/// Evaluate the polynomial at (x, y).
inline double poly2d_eval(const Poly2D& p, double x, double y) {
    std::vector<double> vals;
    poly2d_basis(p, x, y, &vals, nullptr, nullptr);
    double acc = 0.0;
    for (size_t k = 0; k < vals.size(); ++k) {
        acc += p.coeffs[k] * vals[k];
    }
    return acc;
}

/// \brief If the polynomial is exactly y * q(x) in the monomial basis
///        (every nonzero coefficient has y-exponent 1), return the
///        coefficients of q; otherwise return an empty vector.
inline std::vector<double> poly2d_separable_y_factor(const Poly2D& p) {
    if (p.basis != Poly2D::Basis::Monomial || p.degree < 1) {
        return {};
    }
    std::vector<double> q(p.degree, 0.0); // q has degree at most p.degree - 1
    bool any = false;
    for (int t = 0; t <= p.degree; ++t) {
        for (int j = 0; j <= t; ++j) {
            const double c = p.coeffs[poly2d_index(t - j, j)];
            if (c == 0.0) {
                continue;
            }
            if (j != 1) {
                return {};
            }
            q[t - j] = c;
            any = true;
        }
    }
    if (!any) {
        return {};
    }
    return q;
}

} // namespace mlab
