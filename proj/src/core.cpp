#include "qrd/core.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace qrd {

Parameters::Parameters(double A, double B, int m) : A(A), B(B), m(m) {
    if (!(A > 0.0)) throw std::invalid_argument("Parameters: A must be > 0");
    if (!(B > 0.0)) throw std::invalid_argument("Parameters: B must be > 0");
    if (m < 1) throw std::invalid_argument("Parameters: delay m must be >= 1");
}

NormalizedParameters::NormalizedParameters(double p, int m) : p(p), m(m) {
    if (!(p > 0.0)) throw std::invalid_argument("NormalizedParameters: p must be > 0");
    if (m < 1) throw std::invalid_argument("NormalizedParameters: delay m must be >= 1");
}

NormalizedParameters normalize(const Parameters& params) {
    return NormalizedParameters(params.B / (params.A * params.A), params.m);
}

Equilibrium equilibrium(double p) {
    if (!(p > 0.0)) throw std::invalid_argument("equilibrium: p must be > 0");
    return Equilibrium{(1.0 + std::sqrt(1.0 + 4.0 * p)) / 2.0, std::nullopt};
}

Equilibrium equilibrium(const Parameters& params) {
    Equilibrium eq = equilibrium(normalize(params).p);
    eq.x_bar = params.A * eq.y_bar;
    return eq;
}

double comparison_equilibrium(double p) {
    if (!(p > 0.0 && p < 1.0))
        throw std::invalid_argument(
            "comparison_equilibrium: defined only for 0 < p < 1, got p=" + std::to_string(p));
    return 1.0 / (1.0 - p);
}

}  // namespace qrd
