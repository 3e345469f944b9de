#pragma once

/**
 * @file linearization.hpp
 * @brief Linearization about the positive equilibrium and its characteristic
 *        roots.
 *
 * Writing f(u_0, ..., u_m) = 1 + p * u_m / u_0^2 and evaluating the partial
 * derivatives at ybar gives the linearized recurrence
 *
 *   z_{n+1} = q0 * z_n + qm * z_{n-m},   q0 = -2p/ybar^2,  qm = p/ybar^2,
 *
 * with characteristic polynomial
 *
 *   lambda^{m+1} + (2p/ybar^2) * lambda^m - p/ybar^2.
 *
 * Roots are found by simultaneous (Durand-Kerner) iteration; the dominant
 * modulus can be cross-checked against the companion matrix via normalized
 * matrix powers. Local stability is reported both ways the analysis
 * distinguishes them: the sufficient Clark sum 3p/ybar^2 < 1 (equivalent to
 * p < 3/4) and the computed spectral radius.
 */

#include <complex>
#include <cstddef>
#include <vector>

namespace qrd {

struct LinearizedCoefficients {
    double q0;   // -2p / ybar^2
    double q_m;  // p / ybar^2, in (0, 1) for every p > 0
    int m;       // coefficients for lags 1 .. m-1 are all zero
};

// Monic polynomial; coeffs[k] multiplies lambda^k (lowest degree first),
// coeffs.back() == 1.
struct CharacteristicPolynomial {
    std::vector<double> coeffs;

    std::size_t degree() const { return coeffs.size() - 1; }
    std::complex<double> eval(std::complex<double> lambda) const;
};

struct RootSet {
    std::vector<std::complex<double>> roots;  // sorted by modulus, descending
    std::vector<double> residuals;            // |P(root)| per root
    double spectral_radius;
};

enum class StabilityClass { LocallyStable, Marginal, Unstable };

struct StabilityReport {
    double clark_sum;  // 3p / ybar^2
    bool clark_holds;  // clark_sum < 1, algebraically p < 3/4
    double spectral_radius;
    StabilityClass classification;
};

struct RootFindingOptions {
    std::size_t max_iterations = 1000;
    double residual_tol = 1e-12;
};

LinearizedCoefficients linearize(double p, int m);

CharacteristicPolynomial characteristic_polynomial(const LinearizedCoefficients& coeffs);

// All complex roots by Durand-Kerner simultaneous iteration, deterministic
// given the fixed initialization. Throws NonConvergence when the residual
// target is not met within the iteration cap.
RootSet find_roots(const CharacteristicPolynomial& poly,
                   const RootFindingOptions& options = {});

struct ClarkResult {
    double clark_sum;
    bool holds;
};

ClarkResult clark_condition(double p);

// Classification uses a +-1e-9 band around spectral radius 1; the paper
// makes no claim at the boundary, so the band refuses to over-claim.
StabilityReport classify_stability(double p, int m,
                                   const RootFindingOptions& options = {});

// Independent spectral-radius estimate: dominant-modulus growth of companion
// matrix powers (normalized repeated squaring). Used to cross-check
// RootSet::spectral_radius.
double companion_spectral_radius(const CharacteristicPolynomial& poly);

}  // namespace qrd
