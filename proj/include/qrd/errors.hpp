#pragma once

#include <stdexcept>
#include <string>

namespace qrd {

// Root finder failed to meet its residual target within the iteration cap.
struct NonConvergence : std::runtime_error {
    explicit NonConvergence(const std::string& what) : std::runtime_error(what) {}
};

// Initial conditions do not satisfy the interleaved pattern required by the
// length-one alternation check.
struct PatternMismatch : std::invalid_argument {
    explicit PatternMismatch(const std::string& what) : std::invalid_argument(what) {}
};

// Trajectory too short for the requested period-detection window.
struct WindowTooShort : std::invalid_argument {
    explicit WindowTooShort(const std::string& what) : std::invalid_argument(what) {}
};

// Orbit coincides with the equilibrium; a decay rate is undefined.
struct EquilibriumOrbit : std::runtime_error {
    explicit EquilibriumOrbit(const std::string& what) : std::runtime_error(what) {}
};

// Orbit errors are not decaying over the examined tail.
struct NotConverging : std::runtime_error {
    explicit NotConverging(const std::string& what) : std::runtime_error(what) {}
};

// A linear solve inside an analysis was degenerate (internal error).
struct SingularSystem : std::runtime_error {
    explicit SingularSystem(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace qrd
