#pragma once

// Scalar minimisers shared by the estimators. Internal header.

#include <cstddef>
#include <functional>

namespace lnq::detail {

struct ScalarMinimum {
    double x = 0.0;
    double f = 0.0;
    std::size_t iterations = 0;
    bool converged = false;
};

inline constexpr std::size_t kIterationCap = 10'000;
inline constexpr double kParamTol = 1e-8;
inline constexpr double kRelObjectiveTol = 1e-10;

using ScalarFn = std::function<double(double)>;

/// Compass search on the real line: probe x +/- step, move on strict
/// improvement (doubling the step), otherwise halve it. Stops when the step
/// falls below `tol` (converged) or after `max_iter` probes.
ScalarMinimum pattern_search(const ScalarFn& f, double start, double step, double tol = 1e-12,
                             std::size_t max_iter = kIterationCap);

/// Golden-section search on [lo, hi]. Exact for convex (including piecewise
/// linear) functions up to floating resolution.
ScalarMinimum golden_section(const ScalarFn& f, double lo, double hi, std::size_t max_iter = 300);

/// Brent's method on [lo, hi] (boost.math), for smooth functions.
ScalarMinimum brent(const ScalarFn& f, double lo, double hi, std::size_t max_iter = kIterationCap);

} // namespace lnq::detail
