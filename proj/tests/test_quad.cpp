#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "mlab/poly2d.hpp"
#include "mlab/quad.hpp"

using namespace mlab;

TEST_CASE("gauss_legendre small rules are exact", "[quad]") {
    const QuadratureRule r1 = gauss_legendre(1);
    REQUIRE(r1.nodes == std::vector<double>{0.0});
    REQUIRE(r1.weights == std::vector<double>{2.0});

    const QuadratureRule r2 = gauss_legendre(2);
    REQUIRE(r2.nodes[0] == Catch::Approx(-1.0 / std::sqrt(3.0)).margin(1e-15));
    REQUIRE(r2.nodes[1] == Catch::Approx(1.0 / std::sqrt(3.0)).margin(1e-15));
    REQUIRE(r2.weights[0] == Catch::Approx(1.0).margin(1e-15));
    REQUIRE(r2.weights[1] == Catch::Approx(1.0).margin(1e-15));

    REQUIRE_THROWS_AS(gauss_legendre(0), config_error);
    REQUIRE_THROWS_AS(gauss_legendre(257), config_error);
}

TEST_CASE("gauss_legendre weight sums and polynomial exactness", "[quad]") {
    for (int m : {1, 2, 3, 5, 8, 16, 33, 64, 128, 256}) {
        const QuadratureRule r = gauss_legendre(m);
        double sum = 0.0;
        for (double w : r.weights) {
            sum += w;
        }
        REQUIRE(std::abs(sum - 2.0) <= 1e-13);
    }
    // A 5-point rule integrates monomials of degree <= 9 exactly.
    const QuadratureRule r5 = gauss_legendre(5);
    for (int k = 0; k <= 9; ++k) {
        double acc = 0.0;
        for (size_t i = 0; i < r5.nodes.size(); ++i) {
            acc += r5.weights[i] * std::pow(r5.nodes[i], k);
        }
        const double exact = (k % 2 == 0) ? 2.0 / (k + 1) : 0.0;
        REQUIRE(acc == Catch::Approx(exact).margin(1e-14));
    }
}

TEST_CASE("gauss_legendre weight-sum invariant detects injected faults", "[quad]") {
    fault::quad_weight_perturbation = 1e-6;
    try {
        REQUIRE_THROWS_WITH(gauss_legendre(8), Catch::Matchers::ContainsSubstring("quad"));
    } catch (...) {
        fault::quad_weight_perturbation = 0.0;
        throw;
    }
    fault::quad_weight_perturbation = 0.0;
    REQUIRE_NOTHROW(gauss_legendre(8));
}

TEST_CASE("graded_mesh layout and validation", "[quad]") {
    const GradedMesh m = graded_mesh(0.0, 1.0, 0.5, 3);
    REQUIRE(m.breakpoints == std::vector<double>{0.0, 0.5, 0.75, 0.875, 1.0});
    REQUIRE(m.panel_count() == 4);

    const GradedMesh deep = graded_mesh(0.0, 1.0, 0.5, 40);
    REQUIRE(deep.panel_count() == 41);
    for (size_t i = 0; i + 1 < deep.breakpoints.size(); ++i) {
        REQUIRE(deep.breakpoints[i] < deep.breakpoints[i + 1]);
    }

    REQUIRE_THROWS_AS(graded_mesh(1.0, 0.0), config_error);
    REQUIRE_THROWS_AS(graded_mesh(0.0, 1.0, 1.5, 10), config_error);
    REQUIRE_THROWS_AS(graded_mesh(0.0, 1.0, 0.5, 0), config_error);
}

TEST_CASE("integrate_graded handles smooth and endpoint-singular integrands", "[quad]") {
    const QuadratureRule rule = gauss_legendre(16);
    const GradedMesh mesh = graded_mesh(0.0, 1.0, 0.5, 8);
    REQUIRE(integrate_graded([](double x) { return x * x * x; }, mesh, rule) ==
            Catch::Approx(0.25).epsilon(1e-14));

    // sqrt(1 - x) probe with a deliberately weak 4-point rule: the graded
    // increments contract by 2^{-3/2} per extra depth level, which keeps the
    // convergence behaviour observable instead of vanishing into roundoff.
    const QuadratureRule weak = gauss_legendre(4);
    const auto probe = [](double x) { return std::sqrt(1.0 - x); };
    const auto value_at_depth = [&](int depth) {
        return integrate_graded(probe, graded_mesh(0.0, 1.0, 0.5, depth), weak);
    };
    for (int d : {6, 10, 14}) {
        const double inc1 = value_at_depth(d + 1) - value_at_depth(d);
        const double inc2 = value_at_depth(d + 2) - value_at_depth(d + 1);
        REQUIRE(std::abs(inc2 / inc1) > 0.33);
        REQUIRE(std::abs(inc2 / inc1) < 0.38);
    }
    REQUIRE(value_at_depth(24) == Catch::Approx(2.0 / 3.0).margin(1e-9));
}

TEST_CASE("lp_weighted_line closed-form oracles", "[quad]") {
    // Unweighted Legendre L^2 norm over the full interval: 2 / (2n + 1).
    const GradedMesh full = graded_mesh(-1.0, 1.0, 0.5, 8);
    REQUIRE(lp_weighted_line(power_cusp(1.0), 0.0, JacobiParams{0.0, 0.0}, 4, 2.0, full) ==
            Catch::Approx(2.0 / 9.0).epsilon(1e-13));

    // integral over [0,1] of (1 - x) ((3x + 1) / 2)^3 = 0.7 exactly, and the
    // degree-1 factor is positive there so p = 3 sees no sign change.
    const GradedMesh unit = graded_mesh(0.0, 1.0, 0.5, 10);
    REQUIRE(lp_weighted_line(power_cusp(1.0), 1.0, JacobiParams{1.0, 0.0}, 1, 3.0, unit) ==
            Catch::Approx(0.7).epsilon(1e-13));

    // integral over [0,1] of (1 - x) |L_2(x)|^3: the zero at 1/sqrt(3) lies
    // inside, so this exercises the odd-p zero splitting.
    const double exact = 4.0 / (35.0 * std::sqrt(3.0)) - 47.0 / 2240.0 - 1.0 / 96.0;
    REQUIRE(lp_weighted_line(power_cusp(1.0), 1.0, JacobiParams{0.0, 0.0}, 2, 3.0, unit) ==
            Catch::Approx(exact).epsilon(1e-11));
}

TEST_CASE("lp_weighted_line is stable under depth doubling and node halving", "[quad]") {
    const JacobiParams p75{7.5, 0.0};
    const CuspProfile cusp = power_cusp(2.0);
    const double d20 =
        lp_weighted_line(cusp, 1.0, p75, 40, 2.0, graded_mesh(0.0, 1.0, 0.5, 20));
    const double d40 =
        lp_weighted_line(cusp, 1.0, p75, 40, 2.0, graded_mesh(0.0, 1.0, 0.5, 40));
    REQUIRE(std::abs(d40 - d20) <= 1e-8 * std::abs(d40));

    // Doubling the automatic per-panel node count moves the value by < 1e-12.
    const GradedMesh mesh = graded_mesh(0.0, 1.0, 0.5, 20);
    const int auto_m = std::max({16, static_cast<int>(std::ceil(8.0 * 40 / mesh.panel_count())), 56});
    const double doubled = lp_weighted_line(cusp, 1.0, p75, 40, 2.0, mesh, 2 * auto_m);
    REQUIRE(std::abs(doubled - d20) <= 1e-12 * std::abs(d20));
}

TEST_CASE("lp_weighted_line graded increments contract to the rounding floor", "[quad]") {
    // Contract-reachable endpoint singularity: weight (1 - x)^{2.5} against a
    // smooth squared polynomial.
    const CuspProfile cusp = power_cusp(2.5);
    const JacobiParams leg{0.0, 0.0};
    std::vector<double> values;
    for (int depth = 5; depth <= 13; ++depth) {
        values.push_back(
            lp_weighted_line(cusp, 1.0, leg, 6, 2.0, graded_mesh(0.0, 1.0, 0.5, depth)));
    }
    const double scale = std::abs(values.back());
    for (size_t i = 0; i + 2 < values.size(); ++i) {
        const double inc1 = std::abs(values[i + 1] - values[i]);
        const double inc2 = std::abs(values[i + 2] - values[i + 1]);
        REQUIRE(inc2 <= std::max(0.5 * inc1, 1e-13 * scale));
    }
}

TEST_CASE("lp_weighted_line node budget and range validation", "[quad]") {
    const GradedMesh coarse = graded_mesh(0.0, 1.0, 0.5, 3);
    REQUIRE_THROWS_AS(
        lp_weighted_line(power_cusp(2.0), 1.0, JacobiParams{0.0, 0.0}, 40, 2.0, coarse, 8),
        config_error);
    REQUIRE_THROWS_AS(lp_weighted_line(power_cusp(2.0), 1.0, JacobiParams{0.0, 0.0}, 4, 0.5,
                                       graded_mesh(0.0, 1.0)),
                      domain_error);
    REQUIRE_THROWS_AS(lp_weighted_line(power_cusp(2.0), 1.0, JacobiParams{0.0, 0.0}, 4, 2.0,
                                       graded_mesh(-0.5, 0.5)),
                      domain_error);
    REQUIRE_THROWS_AS(lp_weighted_line(power_cusp(2.0), 0.0, JacobiParams{0.0, 0.0}, 4, 2.0,
                                       graded_mesh(-2.0, 0.5)),
                      domain_error);
}

TEST_CASE("lp_weighted_line high degrees refine the mesh automatically", "[quad]") {
    // n = 300 exceeds the 256-node rule cap; the automatic path must split
    // panels rather than fail, and agree with an explicitly refined call.
    const CuspProfile cusp = power_cusp(2.0);
    const JacobiParams p{3.0, 0.0};
    const GradedMesh base = graded_mesh(0.0, 1.0, 0.5, 20);
    const double automatic = lp_weighted_line(cusp, 1.0, p, 300, 2.0, base);
    REQUIRE(automatic > 0.0);

    GradedMesh fine;
    fine.breakpoints.push_back(0.0);
    for (size_t k = 0; k + 1 < base.breakpoints.size(); ++k) {
        for (int s = 1; s <= 4; ++s) {
            fine.breakpoints.push_back(base.breakpoints[k] +
                                       (base.breakpoints[k + 1] - base.breakpoints[k]) * s / 4.0);
        }
    }
    const double refined = lp_weighted_line(cusp, 1.0, p, 300, 2.0, fine, 256);
    REQUIRE(automatic == Catch::Approx(refined).epsilon(1e-10));
}

TEST_CASE("lp_norm_pth_power closed-form oracles on simple domains", "[quad]") {
    // Unit square via the constant profile of height 1.
    const GraphDomain square{flat_profile(1.0), GraphDomain::Symmetry::UpperOnly};
    const GradedMesh mesh = graded_mesh(0.0, 1.0, 0.5, 10);

    Poly2D xy = make_poly2d(Poly2D::Basis::Monomial, 2);
    xy.coeffs[poly2d_index(1, 1)] = 1.0;
    REQUIRE(lp_norm_pth_power(square, xy, 2.0, mesh, 8) == Catch::Approx(1.0 / 9.0).epsilon(1e-12));

    // Triangle under f(x) = 1 - x: the L^1 norm of 1 is the area 1/2.
    const GraphDomain triangle{power_cusp(1.0), GraphDomain::Symmetry::UpperOnly};
    Poly2D one = make_poly2d(Poly2D::Basis::Monomial, 0);
    one.coeffs[0] = 1.0;
    REQUIRE(lp_norm_pth_power(triangle, one, 1.0, mesh, 8) == Catch::Approx(0.5).epsilon(1e-12));

    // Odd-p inner sign splitting: |y - 0.2|^3 over the unit square.
    Poly2D shifted = make_poly2d(Poly2D::Basis::Monomial, 1);
    shifted.coeffs[poly2d_index(0, 1)] = 1.0;
    shifted.coeffs[poly2d_index(0, 0)] = -0.2;
    const double exact = (std::pow(0.2, 4.0) + std::pow(0.8, 4.0)) / 4.0;
    REQUIRE(lp_norm_pth_power(square, shifted, 3.0, mesh, 16) ==
            Catch::Approx(exact).epsilon(1e-9));
}

TEST_CASE("lp_norm_pth_power analytic inner path matches the generic rule", "[quad]") {
    const GraphDomain dom{log_cusp(1.0), GraphDomain::Symmetry::UpperOnly};
    const GradedMesh mesh = graded_mesh(0.0, 1.0, 0.5, 30);

    // Q = y (x^2 - 0.3)
    Poly2D q = make_poly2d(Poly2D::Basis::Monomial, 3);
    q.coeffs[poly2d_index(2, 1)] = 1.0;
    q.coeffs[poly2d_index(0, 1)] = -0.3;

    const double analytic = lp_norm_pth_power(dom, q, 2.0, mesh, 0);
    const double generic = lp_norm_pth_power(dom, q, 2.0, mesh, 32);
    REQUIRE(analytic == Catch::Approx(generic).epsilon(1e-10));

    // Same value from the 1-D reduction: f^{p+1} / (p+1) |q|^p.
    const QuadratureRule rule = gauss_legendre(32);
    const double reduced = integrate_graded(
        [&](double x) {
            const double f = profile_eval(dom.profile, x);
            const double qq = x * x - 0.3;
            return std::pow(f, 3.0) / 3.0 * qq * qq;
        },
        mesh, rule);
    REQUIRE(analytic == Catch::Approx(reduced).epsilon(1e-10));

    // Deterministic: repeated evaluation is bit-identical.
    REQUIRE(lp_norm_pth_power(dom, q, 2.0, mesh, 32) == generic);
}

TEST_CASE("lp_norm_pth_power symmetric domains double the upper half", "[quad]") {
    Poly2D qx = make_poly2d(Poly2D::Basis::Monomial, 1);
    qx.coeffs[poly2d_index(1, 0)] = 1.0;
    const GradedMesh mesh = graded_mesh(0.0, 1.0, 0.5, 20);
    const double upper = lp_norm_pth_power({log_cusp(1.0), GraphDomain::Symmetry::UpperOnly}, qx,
                                           2.5, mesh, 12);
    const double sym = lp_norm_pth_power({log_cusp(1.0), GraphDomain::Symmetry::Symmetric}, qx,
                                         2.5, mesh, 12);
    REQUIRE(sym == Catch::Approx(2.0 * upper).epsilon(1e-13));
}

TEST_CASE("lp_norm_pth_power validates its configuration", "[quad]") {
    const GraphDomain square{flat_profile(1.0), GraphDomain::Symmetry::UpperOnly};
    const GradedMesh mesh = graded_mesh(0.0, 1.0, 0.5, 8);
    Poly2D qx = make_poly2d(Poly2D::Basis::Monomial, 1);
    qx.coeffs[poly2d_index(1, 0)] = 1.0;

    REQUIRE_THROWS_AS(lp_norm_pth_power(square, qx, 0.9, mesh, 8), domain_error);
    REQUIRE_THROWS_AS(lp_norm_pth_power(square, qx, 2.0, mesh, -1), config_error);
    REQUIRE_THROWS_AS(lp_norm_pth_power(square, qx, 2.0, mesh, 300), config_error);
    // x alone is not of the form y q(x), so the analytic inner path refuses.
    REQUIRE_THROWS_AS(lp_norm_pth_power(square, qx, 2.0, mesh, 0), config_error);
}

TEST_CASE("poly2d graded indexing, evaluation and bases", "[quad]") {
    REQUIRE(poly2d_dimension(0) == 1);
    REQUIRE(poly2d_dimension(2) == 6);
    REQUIRE(poly2d_index(0, 0) == 0);
    REQUIRE(poly2d_index(1, 0) == 1);
    REQUIRE(poly2d_index(0, 1) == 2);
    REQUIRE(poly2d_index(2, 0) == 3);
    REQUIRE(poly2d_index(1, 1) == 4);
    REQUIRE(poly2d_index(0, 2) == 5);

    Poly2D q = make_poly2d(Poly2D::Basis::Monomial, 2);
    q.coeffs[poly2d_index(0, 0)] = 1.0;
    q.coeffs[poly2d_index(1, 0)] = 2.0;
    q.coeffs[poly2d_index(0, 1)] = 3.0;
    q.coeffs[poly2d_index(1, 1)] = 4.0;
    REQUIRE(poly2d_eval(q, 0.3, 0.7) == Catch::Approx(1.0 + 0.6 + 2.1 + 0.84).epsilon(1e-15));

    // Tensor-Legendre on [0,1]^2: element (2,0) is L_2(2x - 1).
    BoundingBox box;
    box.y_lo = 0.0;
    Poly2D t = make_poly2d(Poly2D::Basis::TensorLegendre, 2, box);
    t.coeffs[poly2d_index(2, 0)] = 1.0;
    for (double x : {0.0, 0.25, 0.6, 1.0}) {
        const double s = 2.0 * x - 1.0;
        REQUIRE(poly2d_eval(t, x, 0.5) == Catch::Approx(0.5 * (3.0 * s * s - 1.0)).margin(1e-14));
    }

    // Basis derivatives against finite differences, both bases.
    for (const Poly2D& probe : {q, t}) {
        std::vector<double> vp, vm, dx, dy;
        const double x = 0.4, y = 0.3, h = 1e-6;
        poly2d_basis(probe, x, y, nullptr, &dx, &dy);
        poly2d_basis(probe, x + h, y, &vp, nullptr, nullptr);
        poly2d_basis(probe, x - h, y, &vm, nullptr, nullptr);
        for (size_t k = 0; k < vp.size(); ++k) {
            REQUIRE(dx[k] == Catch::Approx((vp[k] - vm[k]) / (2.0 * h)).margin(1e-6));
        }
        poly2d_basis(probe, x, y + h, &vp, nullptr, nullptr);
        poly2d_basis(probe, x, y - h, &vm, nullptr, nullptr);
        for (size_t k = 0; k < vp.size(); ++k) {
            REQUIRE(dy[k] == Catch::Approx((vp[k] - vm[k]) / (2.0 * h)).margin(1e-6));
        }
    }

    REQUIRE(poly2d_separable_y_factor(q).empty());
    Poly2D sep = make_poly2d(Poly2D::Basis::Monomial, 3);
    sep.coeffs[poly2d_index(2, 1)] = 5.0;
    sep.coeffs[poly2d_index(0, 1)] = -1.0;
    const std::vector<double> factor = poly2d_separable_y_factor(sep);
    REQUIRE(factor.size() == 3);
    REQUIRE(factor[0] == -1.0);
    REQUIRE(factor[1] == 0.0);
    REQUIRE(factor[2] == 5.0);
}
