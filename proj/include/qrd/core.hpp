#pragma once

/**
 * @file core.hpp
 * @brief Parameters, normalization and closed-form equilibria for the
 *        quadratic-rational delay recurrence
 *
 *   x_{n+1} = A + B * x_{n-m} / x_n^2,     A, B > 0, delay m >= 1,
 *
 * which the substitution y_n = x_n / A turns into the one-parameter form
 *
 *   y_{n+1} = 1 + p * y_{n-m} / y_n^2,     p = B / A^2.
 *
 * The normalized equation has a unique positive equilibrium
 * ybar = (1 + sqrt(1 + 4p)) / 2, the positive root of y^2 - y - p = 0.
 * The linear comparison equation u_{n+1} = 1 + p * u_{n-m} has equilibrium
 * 1 / (1 - p), defined only for 0 < p < 1.
 */

#include <optional>

namespace qrd {

// Raw parameters (A, B, m) of the unnormalized equation.
struct Parameters {
    double A;
    double B;
    int m;

    Parameters(double A, double B, int m);
};

// (p, m) with p = B / A^2; the sole inputs of the normalized equation.
struct NormalizedParameters {
    double p;
    int m;

    NormalizedParameters(double p, int m);
};

// Positive equilibrium. x_bar is only known when A is.
struct Equilibrium {
    double y_bar;
    std::optional<double> x_bar;
};

NormalizedParameters normalize(const Parameters& params);

// ybar = (1 + sqrt(1 + 4p)) / 2; rejects p <= 0. Always > 1.
Equilibrium equilibrium(double p);

// Same, with x_bar = A * y_bar filled in.
Equilibrium equilibrium(const Parameters& params);

// Equilibrium 1 / (1 - p) of the comparison equation; rejects p outside (0, 1).
double comparison_equilibrium(double p);

}  // namespace qrd
