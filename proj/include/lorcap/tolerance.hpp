#pragma once

#include <algorithm>
#include <cmath>

namespace lorcap {

// Comparison policy shared by every floating-point check in the project.
struct Tolerance {
    static constexpr double relative = 1e-10;
    static constexpr double absolute = 1e-12;
};

inline bool approx_equal(long double a, long double b, double rel = Tolerance::relative,
                         double abs_tol = Tolerance::absolute) {
    if (a == b) return true;
    long double diff = std::fabs(a - b);
    long double scale = std::max(std::fabs(a), std::fabs(b));
    return diff <= abs_tol || diff <= rel * scale;
}

}  // namespace lorcap
