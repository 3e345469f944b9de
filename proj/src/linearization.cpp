#include "qrd/linearization.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qrd/core.hpp"
#include "qrd/errors.hpp"

namespace qrd {

std::complex<double> CharacteristicPolynomial::eval(std::complex<double> lambda) const {
    std::complex<double> acc{0.0, 0.0};
    for (std::size_t k = coeffs.size(); k-- > 0;) acc = acc * lambda + coeffs[k];
    return acc;
}

LinearizedCoefficients linearize(double p, int m) {
    if (m < 1) throw std::invalid_argument("linearize: delay m must be >= 1");
    const double y = equilibrium(p).y_bar;
    const double qm = p / (y * y);
    return LinearizedCoefficients{-2.0 * qm, qm, m};
}

CharacteristicPolynomial characteristic_polynomial(const LinearizedCoefficients& c) {
    // lambda^{m+1} + 2*qm * lambda^m - qm, stored lowest degree first
    std::vector<double> coeffs(static_cast<std::size_t>(c.m) + 2, 0.0);
    coeffs[0] = -c.q_m;
    coeffs[static_cast<std::size_t>(c.m)] = -c.q0;  // -q0 = +2p/ybar^2
    coeffs.back() = 1.0;
    return CharacteristicPolynomial{std::move(coeffs)};
}

RootSet find_roots(const CharacteristicPolynomial& poly, const RootFindingOptions& options) {
    const std::size_t d = poly.degree();
    if (d < 1) throw std::invalid_argument("find_roots: degree must be >= 1");
    if (poly.coeffs.back() != 1.0) throw std::invalid_argument("find_roots: polynomial must be monic");

    RootSet out;
    if (d == 1) {
        out.roots = {std::complex<double>(-poly.coeffs[0], 0.0)};
        out.residuals = {std::abs(poly.eval(out.roots[0]))};
        out.spectral_radius = std::abs(out.roots[0]);
        return out;
    }

    // Initial guesses on a circle of radius max(1, Cauchy bound), angles
    // offset by 0.4 rad so no guess sits on a symmetry axis of the root set.
    double max_coeff = 0.0;
    for (std::size_t k = 0; k < d; ++k) max_coeff = std::max(max_coeff, std::abs(poly.coeffs[k]));
    const double radius = std::max(1.0, 1.0 + max_coeff);

    std::vector<std::complex<double>> roots(d);
    for (std::size_t i = 0; i < d; ++i) {
        const double angle = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(d) + 0.4;
        roots[i] = std::polar(radius, angle);
    }

    bool converged = false;
    for (std::size_t iter = 0; iter < options.max_iterations; ++iter) {
        double max_resid = 0.0;
        double max_move = 0.0;
        for (std::size_t i = 0; i < d; ++i) {
            std::complex<double> denom{1.0, 0.0};
            for (std::size_t j = 0; j < d; ++j)
                if (j != i) denom *= roots[i] - roots[j];
            const std::complex<double> value = poly.eval(roots[i]);
            const std::complex<double> delta = value / denom;
            roots[i] -= delta;
            max_resid = std::max(max_resid, std::abs(value));
            max_move = std::max(max_move, std::abs(delta) / (1.0 + std::abs(roots[i])));
        }
        // stagnation at machine precision counts as converged; residual is
        // re-measured below
        if (max_resid <= options.residual_tol || max_move <= 1e-15) {
            converged = true;
            break;
        }
    }
    if (!converged)
        throw NonConvergence("find_roots: Durand-Kerner did not reach the residual target; "
                             "polynomial is likely ill-conditioned");

    std::sort(roots.begin(), roots.end(), [](const auto& a, const auto& b) {
        if (std::abs(a) != std::abs(b)) return std::abs(a) > std::abs(b);
        if (a.real() != b.real()) return a.real() > b.real();
        return a.imag() > b.imag();
    });

    out.roots = roots;
    out.residuals.reserve(d);
    out.spectral_radius = 0.0;
    for (const auto& r : roots) {
        out.residuals.push_back(std::abs(poly.eval(r)));
        out.spectral_radius = std::max(out.spectral_radius, std::abs(r));
    }
    return out;
}

ClarkResult clark_condition(double p) {
    const double y = equilibrium(p).y_bar;
    const double sum = 3.0 * p / (y * y);  // |q0| + |qm| = 3p/ybar^2
    return ClarkResult{sum, sum < 1.0};
}

StabilityReport classify_stability(double p, int m, const RootFindingOptions& options) {
    const ClarkResult clark = clark_condition(p);
    const RootSet roots = find_roots(characteristic_polynomial(linearize(p, m)), options);

    constexpr double band = 1e-9;
    StabilityClass cls = StabilityClass::Marginal;
    if (roots.spectral_radius < 1.0 - band)
        cls = StabilityClass::LocallyStable;
    else if (roots.spectral_radius > 1.0 + band)
        cls = StabilityClass::Unstable;

    return StabilityReport{clark.clark_sum, clark.holds, roots.spectral_radius, cls};
}

double companion_spectral_radius(const CharacteristicPolynomial& poly) {
    const std::size_t d = poly.degree();
    if (d < 1) throw std::invalid_argument("companion_spectral_radius: degree must be >= 1");
    if (poly.coeffs.back() != 1.0)
        throw std::invalid_argument("companion_spectral_radius: polynomial must be monic");

    // First-row companion matrix of the monic polynomial.
    std::vector<double> a(d * d, 0.0);
    for (std::size_t j = 0; j < d; ++j) a[j] = -poly.coeffs[d - 1 - j];
    for (std::size_t i = 1; i < d; ++i) a[i * d + (i - 1)] = 1.0;

    auto frobenius = [d](const std::vector<double>& mat) {
        double s = 0.0;
        for (std::size_t k = 0; k < d * d; ++k) s += mat[k] * mat[k];
        return std::sqrt(s);
    };

    // rho(A) = lim ||A^{2^k}||^{1/2^k}. Track the normalized square chain:
    // log_scale accumulates log(norm_k) / 2^k, so the polynomially bounded
    // prefactor in ||A^N|| vanishes from the estimate as N = 2^k grows.
    std::vector<double> cur = a, next(d * d);
    double log_scale = 0.0;
    double inv_pow = 1.0;  // 1 / 2^k
    for (int k = 0; k < 64; ++k) {
        const double norm = frobenius(cur);
        if (norm == 0.0) return 0.0;
        log_scale += std::log(norm) * inv_pow;
        inv_pow *= 0.5;
        for (double& v : cur) v /= norm;
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j) {
                double s = 0.0;
                for (std::size_t l = 0; l < d; ++l) s += cur[i * d + l] * cur[l * d + j];
                next[i * d + j] = s;
            }
        cur.swap(next);
    }
    return std::exp(log_scale + std::log(frobenius(cur)) * inv_pow);
}

}  // namespace qrd
