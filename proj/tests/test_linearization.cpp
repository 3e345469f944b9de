#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "oracles.hpp"
#include "qrd/core.hpp"
#include "qrd/errors.hpp"
#include "qrd/linearization.hpp"

using namespace qrd;

TEST_CASE("linearized coefficients") {
    const LinearizedCoefficients a = linearize(0.75, 2);
    CHECK(a.q0 == doctest::Approx(-2.0 / 3.0).epsilon(1e-15));
    CHECK(a.q_m == doctest::Approx(1.0 / 3.0).epsilon(1e-15));

    const LinearizedCoefficients b = linearize(2.0, 1);
    CHECK(b.q0 == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(b.q_m == doctest::Approx(0.5).epsilon(1e-15));

    const LinearizedCoefficients c = linearize(6.0, 4);
    CHECK(c.q0 == doctest::Approx(-4.0 / 3.0).epsilon(1e-15));
    CHECK(c.q_m == doctest::Approx(2.0 / 3.0).epsilon(1e-15));

    // q0 = -2 q_m exactly, and q_m stays inside (0, 1) for every p
    for (double p = 1e-6; p < 1e3; p *= 3.7) {
        const LinearizedCoefficients lc = linearize(p, 3);
        CHECK(lc.q0 == -2.0 * lc.q_m);
        CHECK(lc.q_m > 0.0);
        CHECK(lc.q_m < 1.0);
    }
}

TEST_CASE("q_m identity from the local-stability proof") {
    // p/ybar^2 = (2p + 1 - sqrt(4p + 1)) / (2p); evaluated in the
    // rationalized form 2p / (2p + 1 + sqrt(4p + 1)) to dodge cancellation
    for (double p = 1e-6; p < 1e3; p *= 1.9) {
        const double lhs = linearize(p, 1).q_m;
        const double rhs = 2.0 * p / (2.0 * p + 1.0 + std::sqrt(4.0 * p + 1.0));
        CHECK(std::abs(lhs - rhs) <= 1e-12);
    }
}

TEST_CASE("characteristic polynomial layout") {
    const CharacteristicPolynomial a = characteristic_polynomial(linearize(2.0, 1));
    REQUIRE(a.coeffs.size() == 3);  // lambda^2 + lambda - 0.5, ascending
    CHECK(a.coeffs[0] == doctest::Approx(-0.5).epsilon(1e-15));
    CHECK(a.coeffs[1] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(a.coeffs[2] == 1.0);

    const CharacteristicPolynomial b = characteristic_polynomial(linearize(0.75, 2));
    REQUIRE(b.coeffs.size() == 4);  // lambda^3 + (2/3) lambda^2 - 1/3
    CHECK(b.coeffs[0] == doctest::Approx(-1.0 / 3.0).epsilon(1e-15));
    CHECK(b.coeffs[1] == 0.0);
    CHECK(b.coeffs[2] == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(b.coeffs[3] == 1.0);
}

TEST_CASE("characteristic roots generate geometric solutions of the linearized equation") {
    for (double p : {0.3, 0.75, 2.0}) {
        for (int m : {1, 2, 4}) {
            const LinearizedCoefficients lc = linearize(p, m);
            const RootSet roots = find_roots(characteristic_polynomial(lc));
            for (const auto& lam : roots.roots) {
                // z_n = lambda^n solves z_{n+1} = q0 z_n + q_m z_{n-m}
                const std::complex<double> lhs = std::pow(lam, m + 1);
                const std::complex<double> rhs = lc.q0 * std::pow(lam, m) + lc.q_m;
                CHECK(std::abs(lhs - rhs) <= 1e-9);
            }
        }
    }
}

TEST_CASE("find_roots on factorable polynomials") {
    SUBCASE("lambda^2 - 1") {
        const RootSet rs = find_roots(CharacteristicPolynomial{{-1.0, 0.0, 1.0}});
        REQUIRE(rs.roots.size() == 2);
        CHECK(std::abs(rs.roots[0] - std::complex<double>(1.0, 0.0)) <= 1e-12);
        CHECK(std::abs(rs.roots[1] - std::complex<double>(-1.0, 0.0)) <= 1e-12);
        CHECK(rs.spectral_radius == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("lambda^{m+1} - p has the evenly spaced root ring") {
        for (double p : {0.2, 0.7, 2.0}) {
            for (int m : {1, 2, 5}) {
                std::vector<double> coeffs(static_cast<std::size_t>(m) + 2, 0.0);
                coeffs[0] = -p;
                coeffs.back() = 1.0;
                const RootSet rs = find_roots(CharacteristicPolynomial{coeffs});
                const std::size_t k = static_cast<std::size_t>(m) + 1;
                REQUIRE(rs.roots.size() == k);
                const double r = std::pow(p, 1.0 / static_cast<double>(k));
                // match each expected ring point to its nearest computed root
                for (std::size_t j = 0; j < k; ++j) {
                    const std::complex<double> want =
                        std::polar(r, 2.0 * std::numbers::pi * static_cast<double>(j) /
                                          static_cast<double>(k));
                    double best = 1e100;
                    for (const auto& got : rs.roots) best = std::min(best, std::abs(got - want));
                    CHECK(best <= 1e-10);
                }
            }
        }
    }
}

TEST_CASE("find_roots matches the quadratic oracle for m = 1") {
    for (double p : {0.1, 0.3, 1.0, 6.0}) {
        const RootSet rs = find_roots(characteristic_polynomial(linearize(p, 1)));
        const oracles::QuadraticRoots q = oracles::quadratic_roots_m1(p);
        REQUIRE(rs.roots.size() == 2);
        // roots are sorted by modulus, descending; the negative root dominates
        CHECK(std::abs(rs.roots[0] - std::complex<double>(q.minus, 0.0)) <= 1e-10);
        CHECK(std::abs(rs.roots[1] - std::complex<double>(q.plus, 0.0)) <= 1e-10);
        CHECK(std::abs(rs.spectral_radius - q.spectral_radius) <= 1e-10);
    }
}

TEST_CASE("root residuals and Vieta reconstruction") {
    for (double p : {0.05, 0.4, 0.74, 3.0, 50.0}) {
        for (int m : {1, 3, 8}) {
            const CharacteristicPolynomial poly = characteristic_polynomial(linearize(p, m));
            const RootSet rs = find_roots(poly);
            for (double r : rs.residuals) CHECK(r <= 1e-10);
            const auto coeffs = oracles::vieta_coefficients(rs.roots);
            REQUIRE(coeffs.size() == poly.coeffs.size());
            for (std::size_t i = 0; i < coeffs.size(); ++i)
                CHECK(std::abs(coeffs[i] - poly.coeffs[i]) <= 1e-8);
        }
    }
}

TEST_CASE("find_roots input validation") {
    CHECK_THROWS_AS(find_roots(CharacteristicPolynomial{{1.0}}), std::invalid_argument);
    CHECK_THROWS_AS(find_roots(CharacteristicPolynomial{{-1.0, 0.0, 2.0}}), std::invalid_argument);
    // degree 1 short-circuits the iteration
    const RootSet rs = find_roots(CharacteristicPolynomial{{-0.25, 1.0}});
    CHECK(std::abs(rs.roots[0] - std::complex<double>(0.25, 0.0)) <= 1e-15);
}

TEST_CASE("clark condition") {
    const ClarkResult boundary = clark_condition(0.75);
    CHECK(std::abs(boundary.clark_sum - 1.0) <= 1e-12);
    CHECK_FALSE(boundary.holds);

    const ClarkResult above = clark_condition(2.0);
    CHECK(above.clark_sum == doctest::Approx(1.5).epsilon(1e-14));
    CHECK_FALSE(above.holds);

    // p = 0.3 with the bisection-verified equilibrium
    const double y = oracles::bisect_equilibrium(0.3);
    const ClarkResult below = clark_condition(0.3);
    CHECK(std::abs(below.clark_sum - 0.9 / (y * y)) <= 1e-10);
    CHECK(below.holds);

    // clark_holds is the predicate p < 3/4
    for (double p = 0.01; p < 2.0; p += 0.0317) CHECK(clark_condition(p).holds == (p < 0.75));
}

TEST_CASE("stability classification") {
    for (int m = 1; m <= 8; ++m) {
        const StabilityReport r = classify_stability(0.5, m);
        CHECK(r.classification == StabilityClass::LocallyStable);
        CHECK(r.clark_holds);
        CHECK(r.spectral_radius < 1.0);
    }

    const StabilityReport low = classify_stability(0.3, 1);
    CHECK(std::abs(low.spectral_radius - oracles::quadratic_roots_m1(0.3).spectral_radius) <= 1e-10);

    const StabilityReport high = classify_stability(6.0, 1);
    CHECK(high.classification == StabilityClass::Unstable);
    CHECK(std::abs(high.clark_sum - 2.0) <= 1e-12);
    CHECK(std::abs(high.spectral_radius - oracles::quadratic_roots_m1(6.0).spectral_radius) <= 1e-10);
}

TEST_CASE("clark implies spectral radius below one") {
    for (double p = 0.05; p < 0.75; p += 0.1) {
        for (int m = 1; m <= 8; ++m) {
            const RootSet rs = find_roots(characteristic_polynomial(linearize(p, m)));
            CHECK(rs.spectral_radius < 1.0);
        }
    }
}

TEST_CASE("companion matrix cross-check") {
    SUBCASE("known spectra") {
        CHECK(std::abs(companion_spectral_radius(CharacteristicPolynomial{{-1.0, 0.0, 1.0}}) - 1.0) <=
              1e-9);
        CHECK(std::abs(companion_spectral_radius(CharacteristicPolynomial{{-0.49, 0.0, 1.0}}) - 0.7) <=
              1e-9);
    }
    SUBCASE("agrees with Durand-Kerner across the family") {
        for (double p : {0.05, 0.3, 0.74, 2.0, 40.0}) {
            for (int m : {1, 2, 3, 6, 8}) {
                const CharacteristicPolynomial poly = characteristic_polynomial(linearize(p, m));
                const RootSet rs = find_roots(poly);
                CHECK(std::abs(companion_spectral_radius(poly) - rs.spectral_radius) <= 1e-6);
            }
        }
    }
}
