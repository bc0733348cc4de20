#include "optimize.hpp"

#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

namespace lnq::detail {

ScalarMinimum pattern_search(const ScalarFn& f, double start, double step, double tol, std::size_t max_iter) {
    ScalarMinimum best{start, f(start), 1, false};
    double h = step;
    while (best.iterations < max_iter) {
        if (h <= tol * std::max(1.0, std::abs(best.x))) {
            best.converged = true;
            break;
        }
        bool moved = false;
        for (double dir : {+1.0, -1.0}) {
            const double cand = best.x + dir * h;
            const double fc = f(cand);
            ++best.iterations;
            if (fc < best.f) {
                best.x = cand;
                best.f = fc;
                moved = true;
                break;
            }
        }
        h = moved ? 2.0 * h : 0.5 * h;
    }
    return best;
}

ScalarMinimum golden_section(const ScalarFn& f, double lo, double hi, std::size_t max_iter) {
    constexpr double inv_phi = 0.6180339887498949;
    double c = hi - inv_phi * (hi - lo);
    double d = lo + inv_phi * (hi - lo);
    double fc = f(c);
    double fd = f(d);
    ScalarMinimum out;
    out.iterations = 2;
    while (out.iterations < max_iter) {
        if (!(hi - lo > 4.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(lo), std::abs(hi)))) {
            out.converged = true;
            break;
        }
        if (fc <= fd) {
            hi = d;
            d = c;
            fd = fc;
            c = hi - inv_phi * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + inv_phi * (hi - lo);
            fd = f(d);
        }
        ++out.iterations;
    }
    if (fc <= fd) {
        out.x = c;
        out.f = fc;
    } else {
        out.x = d;
        out.f = fd;
    }
    return out;
}

ScalarMinimum brent(const ScalarFn& f, double lo, double hi, std::size_t max_iter) {
    std::uintmax_t iters = max_iter;
    const auto [x, fx] = boost::math::tools::brent_find_minima(f, lo, hi, std::numeric_limits<double>::digits / 2, iters);
    return ScalarMinimum{x, fx, static_cast<std::size_t>(iters), iters < max_iter};
}

} // namespace lnq::detail
