#include "lnq/estimators.hpp"

#include "optimize.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace lnq {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::size_t weighted_median_index(std::span<const double> values, std::span<const double> weights) {
    if (values.empty() || values.size() != weights.size()) {
        throw std::domain_error("weighted median needs equal-length, non-empty inputs");
    }
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) { return values[l] < values[r]; });
    double total = 0.0;
    for (double w : weights) {
        if (!(w > 0.0) || !std::isfinite(w)) throw std::domain_error("weighted median weights must be positive");
        total += w;
    }
    double cum = 0.0;
    for (std::size_t idx : order) {
        cum += weights[idx];
        if (2.0 * cum >= total) return idx;
    }
    return order.back();
}

std::vector<double> predictions_of(const ModelForm& model, std::span<const double> xs) {
    std::vector<double> out(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) out[i] = predict(model, xs[i]);
    return out;
}

double objective_of(FitCriterion criterion, std::span<const double> preds, std::span<const double> ys) {
    double sum = 0.0;
    for (std::size_t i = 0; i < ys.size(); ++i) {
        const double e = ys[i] - preds[i];
        switch (criterion) {
        case FitCriterion::MinMAPE: sum += std::abs(e) / ys[i]; break;
        case FitCriterion::OLS: sum += e * e; break;
        case FitCriterion::LAD: sum += std::abs(e); break;
        case FitCriterion::LeastSquaresLnQ: {
            if (!(preds[i] > 0.0)) {
                throw std::domain_error("log accuracy ratio undefined for non-positive prediction at index " +
                                        std::to_string(i));
            }
            const double r = std::log(preds[i]) - std::log(ys[i]);
            sum += r * r;
            break;
        }
        }
    }
    return sum;
}

Diagnostics diagnostics_of(std::span<const double> preds, std::span<const double> ys) {
    Diagnostics d;
    d.ln_q_residuals.resize(ys.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < ys.size(); ++i) {
        if (!(preds[i] > 0.0) || !std::isfinite(preds[i])) {
            throw std::domain_error("model prediction at index " + std::to_string(i) + " is not positive");
        }
        d.ln_q_residuals[i] = std::log(preds[i]) - std::log(ys[i]);
        sum += d.ln_q_residuals[i];
        if (preds[i] > ys[i]) ++d.n_over;
        if (preds[i] < ys[i]) ++d.n_under;
    }
    d.q_product = std::exp(sum);
    return d;
}

FitResult assemble(const ModelForm& model, FitCriterion criterion, std::span<const double> xs,
                   std::span<const double> ys, bool converged, std::size_t iterations) {
    const auto preds = predictions_of(model, xs);
    for (std::size_t i = 0; i < preds.size(); ++i) {
        if (!(preds[i] > 0.0) || !std::isfinite(preds[i])) {
            throw InfeasibleFitError("fitted " + describe(model) + " under " + std::string(to_string(criterion)) +
                                     " predicts a non-positive value at row " + std::to_string(i + 1) +
                                     " (x = " + std::to_string(xs[i]) + ")");
        }
    }
    auto diag = diagnostics_of(preds, ys);
    return FitResult{model,       criterion,    objective_of(criterion, preds, ys), std::move(diag.ln_q_residuals),
                     diag.q_product, diag.n_over, diag.n_under, converged, iterations};
}

void require_positive_ys(std::span<const double> ys) {
    for (std::size_t i = 0; i < ys.size(); ++i) {
        if (!(ys[i] > 0.0) || !std::isfinite(ys[i])) {
            throw std::domain_error("response at index " + std::to_string(i) + " is not positive");
        }
    }
}

double mean_of(std::span<const double> v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

void require_distinct_x(std::span<const double> xs) {
    const auto [lo, hi] = std::minmax_element(xs.begin(), xs.end());
    if (*lo == *hi) throw RankDeficientError("all x values are identical; slope is not identifiable");
}

// Multiplying every prediction by exp(-mean lnQ) is the exact minimiser of
// sum (lnQ)^2 along the scale direction and leaves sum lnQ = 0.
template <class M>
void rescale_to_unit_q_product(M& model, std::span<const double> xs, std::span<const double> ys) {
    double sum = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) sum += std::log(predict(model, xs[i])) - std::log(ys[i]);
    const double k = std::exp(-sum / static_cast<double>(xs.size()));
    model.a *= k;
    if constexpr (std::is_same_v<M, Linear>) model.b *= k;
}

// ---------------------------------------------------------------------------
// Weighted least absolute deviations line: minimise sum w_i |y_i - a - b x_i|.
//
// Profiling out the intercept (a weighted median of y - b x) leaves a convex
// piecewise-linear function of b whose kinks are the pairwise slopes, so a
// golden-section search locates the optimum slope, and pivoting on the
// weighted-median observation then snaps to the exact vertex: a line through
// two observations.

struct LineFit {
    Linear line{0.0, 0.0};
    bool converged = true;
    std::size_t iterations = 0;
};

LineFit weighted_lad_line(std::span<const double> xs, std::span<const double> ys, std::span<const double> w) {
    const std::size_t n = xs.size();
    LineFit out;

    std::vector<std::size_t> by_x(n);
    std::iota(by_x.begin(), by_x.end(), std::size_t{0});
    std::stable_sort(by_x.begin(), by_x.end(), [&](std::size_t l, std::size_t r) { return xs[l] < xs[r]; });

    // Extreme pairwise slopes occur between neighbouring distinct x groups.
    double b_lo = kInf;
    double b_hi = -kInf;
    {
        std::size_t g0 = 0;
        double prev_min = 0.0, prev_max = 0.0, prev_x = 0.0;
        bool have_prev = false;
        while (g0 < n) {
            std::size_t g1 = g0;
            double gmin = kInf, gmax = -kInf;
            const double gx = xs[by_x[g0]];
            while (g1 < n && xs[by_x[g1]] == gx) {
                gmin = std::min(gmin, ys[by_x[g1]]);
                gmax = std::max(gmax, ys[by_x[g1]]);
                ++g1;
            }
            if (have_prev) {
                const double dx = gx - prev_x;
                b_lo = std::min(b_lo, (gmin - prev_max) / dx);
                b_hi = std::max(b_hi, (gmax - prev_min) / dx);
            }
            prev_min = gmin;
            prev_max = gmax;
            prev_x = gx;
            have_prev = true;
            g0 = g1;
        }
    }

    std::vector<double> resid(n);
    auto intercept_at = [&](double b) {
        for (std::size_t i = 0; i < n; ++i) resid[i] = ys[i] - b * xs[i];
        return weighted_median_index(resid, w);
    };
    auto cost_of = [&](double a, double b) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += w[i] * std::abs(ys[i] - a - b * xs[i]);
        return s;
    };
    auto profile = [&](double b) {
        const std::size_t k = intercept_at(b);
        return cost_of(resid[k], b);
    };

    double b0 = b_lo;
    if (b_hi > b_lo) {
        const auto gs = detail::golden_section(profile, b_lo, b_hi);
        b0 = gs.x;
        out.iterations += gs.iterations;
        out.converged = gs.converged;
    }
    std::size_t pivot = intercept_at(b0);
    Linear best{resid[pivot], b0};
    double best_cost = cost_of(best.a, best.b);

    std::vector<double> slopes;
    std::vector<double> slope_w;
    std::vector<std::size_t> slope_idx;
    for (std::size_t step = 0; step <= n; ++step) {
        slopes.clear();
        slope_w.clear();
        slope_idx.clear();
        const double xk = xs[pivot];
        const double yk = ys[pivot];
        for (std::size_t j = 0; j < n; ++j) {
            const double dx = xs[j] - xk;
            if (dx == 0.0) continue;
            slopes.push_back((ys[j] - yk) / dx);
            slope_w.push_back(w[j] * std::abs(dx));
            slope_idx.push_back(j);
        }
        const std::size_t m = weighted_median_index(slopes, slope_w);
        const Linear cand{yk - slopes[m] * xk, slopes[m]};
        const double cand_cost = cost_of(cand.a, cand.b);
        ++out.iterations;
        // The first vertex replaces the golden-section point unless it is
        // worse beyond rounding; later pivots must strictly improve.
        const double slack = step == 0 ? 1e-12 * std::max(1.0, best_cost) : 0.0;
        if (cand_cost < best_cost + slack) {
            const bool improved = cand_cost < best_cost;
            best = cand;
            best_cost = cand_cost;
            pivot = slope_idx[m];
            if (step > 0 && !improved) break;
        } else {
            break;
        }
    }
    out.line = best;
    return out;
}

// ---------------------------------------------------------------------------
// Least squares on lnQ for a straight line, with every prediction kept
// positive. A line is positive on the data iff it is positive at x_min and
// x_max, so it is parameterised by the log of those two endpoint values.

struct EndpointLine {
    double x_min;
    double span;
    std::vector<double> z;  // (x - x_min) / span, in [0, 1]

    EndpointLine(std::span<const double> xs) {
        const auto [lo, hi] = std::minmax_element(xs.begin(), xs.end());
        x_min = *lo;
        span = *hi - *lo;
        z.resize(xs.size());
        for (std::size_t i = 0; i < xs.size(); ++i) z[i] = (xs[i] - x_min) / span;
    }

    [[nodiscard]] Linear to_linear(double p0, double p1) const {
        const double b = (p1 - p0) / span;
        return Linear{p0 - b * x_min, b};
    }
};

double lnq_line_cost(const EndpointLine& geo, std::span<const double> log_y, double lp0, double lp1) {
    const double p0 = std::exp(lp0);
    const double p1 = std::exp(lp1);
    double s = 0.0;
    for (std::size_t i = 0; i < log_y.size(); ++i) {
        const double r = std::log(p0 * (1.0 - geo.z[i]) + p1 * geo.z[i]) - log_y[i];
        s += r * r;
    }
    return s;
}

struct LmResult {
    double lp0;
    double lp1;
    double cost;
    bool converged;
    std::size_t iterations;
};

// Levenberg-Marquardt on (ln p0, ln p1). Residual r_i = ln(yhat_i) - ln(y_i)
// with Jacobian entries p0 (1 - z_i) / yhat_i and p1 z_i / yhat_i.
LmResult lnq_line_lm(const EndpointLine& geo, std::span<const double> log_y, double lp0, double lp1) {
    const std::size_t n = log_y.size();
    double cost = lnq_line_cost(geo, log_y, lp0, lp1);
    double lambda = 1e-3;
    LmResult out{lp0, lp1, cost, false, 0};
    while (out.iterations < detail::kIterationCap) {
        ++out.iterations;
        const double p0 = std::exp(out.lp0);
        const double p1 = std::exp(out.lp1);
        double h00 = 0, h01 = 0, h11 = 0, g0 = 0, g1 = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const double yhat = p0 * (1.0 - geo.z[i]) + p1 * geo.z[i];
            const double r = std::log(yhat) - log_y[i];
            const double j0 = p0 * (1.0 - geo.z[i]) / yhat;
            const double j1 = p1 * geo.z[i] / yhat;
            h00 += j0 * j0;
            h01 += j0 * j1;
            h11 += j1 * j1;
            g0 += j0 * r;
            g1 += j1 * r;
        }
        bool accepted = false;
        while (lambda < 1e16) {
            const double a00 = h00 * (1.0 + lambda);
            const double a11 = h11 * (1.0 + lambda);
            const double det = a00 * a11 - h01 * h01;
            if (!(det > 0.0)) {
                lambda *= 10.0;
                continue;
            }
            const double d0 = -(a11 * g0 - h01 * g1) / det;
            const double d1 = -(a00 * g1 - h01 * g0) / det;
            const double new_cost = lnq_line_cost(geo, log_y, out.lp0 + d0, out.lp1 + d1);
            if (new_cost <= out.cost) {
                const double drop = out.cost - new_cost;
                const double step = std::hypot(d0, d1);
                out.lp0 += d0;
                out.lp1 += d1;
                const double old_cost = out.cost;
                out.cost = new_cost;
                lambda = std::max(lambda / 10.0, 1e-12);
                accepted = true;
                if (drop <= detail::kRelObjectiveTol * old_cost || step < detail::kParamTol) {
                    out.converged = true;
                }
                break;
            }
            lambda *= 10.0;
        }
        // No descent step exists at any damping: already at the optimum to
        // working precision.
        if (!accepted || out.converged) {
            out.converged = true;
            break;
        }
    }
    return out;
}

LineFit lnq_line(std::span<const double> xs, std::span<const double> ys) {
    const EndpointLine geo(xs);
    std::vector<double> log_y(ys.size());
    for (std::size_t i = 0; i < ys.size(); ++i) log_y[i] = std::log(ys[i]);

    std::vector<std::array<double, 2>> starts;

    // Profile scan: for a fixed endpoint share theta = p1 / (p0 + p1) the
    // optimal overall scale is closed-form, so the cost is a function of theta
    // alone, scanned on a logistic grid and refined around each local minimum.
    auto profile_at = [&](double u, double* lp0, double* lp1) {
        const double theta = 1.0 / (1.0 + std::exp(-u));
        double m = 0.0;
        for (std::size_t i = 0; i < log_y.size(); ++i) {
            m += log_y[i] - std::log((1.0 - theta) * (1.0 - geo.z[i]) + theta * geo.z[i]);
        }
        m /= static_cast<double>(log_y.size());
        const double l0 = m + std::log(1.0 - theta);
        const double l1 = m + std::log(theta);
        if (lp0) *lp0 = l0;
        if (lp1) *lp1 = l1;
        return lnq_line_cost(geo, log_y, l0, l1);
    };
    constexpr double kUMax = 30.0;
    constexpr std::size_t kGrid = 1201;
    const double du = 2.0 * kUMax / static_cast<double>(kGrid - 1);
    std::vector<double> cost(kGrid);
    for (std::size_t k = 0; k < kGrid; ++k) cost[k] = profile_at(-kUMax + du * static_cast<double>(k), nullptr, nullptr);
    std::vector<std::size_t> minima;
    for (std::size_t k = 0; k < kGrid; ++k) {
        const bool left_ok = k == 0 || cost[k] <= cost[k - 1];
        const bool right_ok = k + 1 == kGrid || cost[k] <= cost[k + 1];
        if (left_ok && right_ok) minima.push_back(k);
    }
    std::stable_sort(minima.begin(), minima.end(), [&](std::size_t l, std::size_t r) { return cost[l] < cost[r]; });
    if (minima.size() > 5) minima.resize(5);
    std::size_t iterations = kGrid;
    for (std::size_t k : minima) {
        const double lo = -kUMax + du * static_cast<double>(k == 0 ? 0 : k - 1);
        const double hi = -kUMax + du * static_cast<double>(std::min(k + 1, kGrid - 1));
        const auto refined = detail::brent([&](double u) { return profile_at(u, nullptr, nullptr); }, lo, hi);
        iterations += refined.iterations;
        double l0 = 0, l1 = 0;
        profile_at(refined.x, &l0, &l1);
        starts.push_back({l0, l1});
    }

    // Ordinary least squares line, when it is positive at both ends.
    {
        const double mx = mean_of(xs);
        const double my = mean_of(ys);
        double sxy = 0, sxx = 0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            sxy += (xs[i] - mx) * (ys[i] - my);
            sxx += (xs[i] - mx) * (xs[i] - mx);
        }
        const double b = sxy / sxx;
        const double p0 = my + b * (geo.x_min - mx);
        const double p1 = my + b * (geo.x_min + geo.span - mx);
        if (p0 > 0.0 && p1 > 0.0) starts.push_back({std::log(p0), std::log(p1)});
    }

    // Log-log heuristic: chord of the geometric-mean power curve when x > 0,
    // otherwise the geometric-mean constant.
    {
        const double gm = std::exp(mean_of(log_y));
        if (geo.x_min > 0.0) {
            std::vector<double> lx(xs.size());
            for (std::size_t i = 0; i < xs.size(); ++i) lx[i] = std::log(xs[i]);
            const double mlx = mean_of(lx);
            const double mly = mean_of(log_y);
            double sxy = 0, sxx = 0;
            for (std::size_t i = 0; i < xs.size(); ++i) {
                sxy += (lx[i] - mlx) * (log_y[i] - mly);
                sxx += (lx[i] - mlx) * (lx[i] - mlx);
            }
            const double b = sxy / sxx;
            const double la = mly - b * mlx;
            starts.push_back({la + b * std::log(geo.x_min), la + b * std::log(geo.x_min + geo.span)});
        } else {
            starts.push_back({std::log(gm), std::log(gm)});
        }
    }

    LineFit out;
    out.converged = false;
    double best_cost = kInf;
    double best_lp0 = 0, best_lp1 = 0;
    for (const auto& s : starts) {
        const auto lm = lnq_line_lm(geo, log_y, s[0], s[1]);
        iterations += lm.iterations;
        if (lm.cost < best_cost) {
            best_cost = lm.cost;
            best_lp0 = lm.lp0;
            best_lp1 = lm.lp1;
            out.converged = lm.converged;
        }
    }
    out.line = geo.to_linear(std::exp(best_lp0), std::exp(best_lp1));
    out.iterations = iterations;
    return out;
}

struct PowerFit {
    Power model{1.0, 0.0};
    bool converged = true;
    std::size_t iterations = 0;
};

PowerFit log_log_power(std::span<const double> xs, std::span<const double> ys) {
    const std::size_t n = xs.size();
    std::vector<double> lx(n), ly(n);
    for (std::size_t i = 0; i < n; ++i) {
        lx[i] = std::log(xs[i]);
        ly[i] = std::log(ys[i]);
    }
    const double mlx = mean_of(lx);
    const double mly = mean_of(ly);
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxy += (lx[i] - mlx) * (ly[i] - mly);
        sxx += (lx[i] - mlx) * (lx[i] - mlx);
    }
    const double b = sxy / sxx;
    return PowerFit{Power{std::exp(mly - b * mlx), b}, true, 0};
}

// For a fixed exponent the best multiplier is closed-form under each of the
// remaining criteria, leaving a one-dimensional search over the exponent.
double best_multiplier(FitCriterion criterion, std::span<const double> xs, std::span<const double> ys, double b,
                       std::vector<double>& scratch_v, std::vector<double>& scratch_w) {
    const std::size_t n = xs.size();
    scratch_v.resize(n);
    scratch_w.resize(n);
    switch (criterion) {
    case FitCriterion::OLS: {
        double num = 0, den = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const double f = std::pow(xs[i], b);
            num += ys[i] * f;
            den += f * f;
        }
        return num / den;
    }
    case FitCriterion::LAD:
    case FitCriterion::MinMAPE: {
        // |y - a f| = f |y/f - a|, and MinMAPE divides the weight by y.
        for (std::size_t i = 0; i < n; ++i) {
            const double f = std::pow(xs[i], b);
            scratch_v[i] = ys[i] / f;
            scratch_w[i] = criterion == FitCriterion::LAD ? f : f / ys[i];
        }
        return scratch_v[weighted_median_index(scratch_v, scratch_w)];
    }
    case FitCriterion::LeastSquaresLnQ: break;
    }
    return kInf;
}

PowerFit profiled_power(FitCriterion criterion, std::span<const double> xs, std::span<const double> ys) {
    const Power start = log_log_power(xs, ys).model;
    std::vector<double> sv, sw, preds(xs.size());
    auto profile = [&](double b) {
        const double a = best_multiplier(criterion, xs, ys, b, sv, sw);
        if (!std::isfinite(a) || !(a > 0.0)) return kInf;
        for (std::size_t i = 0; i < xs.size(); ++i) preds[i] = a * std::pow(xs[i], b);
        const double c = objective_of(criterion, preds, ys);
        return std::isfinite(c) ? c : kInf;
    };

    constexpr double kPerturb = 0.1;
    constexpr std::array<double, 5> kOffsets{0.0, -1.0, 1.0, -2.0, 2.0};
    PowerFit out;
    double best_f = kInf;
    double best_b = start.b;
    for (double k : kOffsets) {
        const auto m = detail::pattern_search(profile, start.b + k * kPerturb, 0.5 * kPerturb);
        out.iterations += m.iterations;
        if (m.f < best_f) {
            best_f = m.f;
            best_b = m.x;
            out.converged = m.converged;
        }
    }
    out.model = Power{best_multiplier(criterion, xs, ys, best_b, sv, sw), best_b};
    return out;
}

} // namespace

// ---------------------------------------------------------------------------

XYDataset::XYDataset(std::vector<double> xs, std::vector<double> ys) : xs_(std::move(xs)), ys_(std::move(ys)) {
    if (xs_.size() != ys_.size()) {
        throw std::domain_error("x and y columns differ in length (" + std::to_string(xs_.size()) + " vs " +
                                std::to_string(ys_.size()) + ")");
    }
    if (xs_.size() < 2) throw std::domain_error("a regression dataset needs at least two observations");
    for (std::size_t i = 0; i < xs_.size(); ++i) {
        if (!std::isfinite(xs_[i])) throw std::domain_error("x at index " + std::to_string(i) + " is not finite");
        if (!(ys_[i] > 0.0) || !std::isfinite(ys_[i])) {
            throw std::domain_error("y at index " + std::to_string(i) + " is not positive");
        }
    }
}

std::string_view to_string(FitCriterion criterion) noexcept {
    switch (criterion) {
    case FitCriterion::MinMAPE: return "MinMAPE";
    case FitCriterion::LeastSquaresLnQ: return "LeastSquaresLnQ";
    case FitCriterion::OLS: return "OLS";
    case FitCriterion::LAD: return "LAD";
    }
    return "?";
}

std::string_view to_string(ModelFamily family) noexcept {
    switch (family) {
    case ModelFamily::Constant: return "constant";
    case ModelFamily::Linear: return "linear";
    case ModelFamily::Power: return "power";
    }
    return "?";
}

std::optional<FitCriterion> parse_criterion(std::string_view text) noexcept {
    if (text == "mape") return FitCriterion::MinMAPE;
    if (text == "lnq") return FitCriterion::LeastSquaresLnQ;
    if (text == "ols") return FitCriterion::OLS;
    if (text == "lad") return FitCriterion::LAD;
    return std::nullopt;
}

std::optional<ModelFamily> parse_family(std::string_view text) noexcept {
    if (text == "constant") return ModelFamily::Constant;
    if (text == "linear") return ModelFamily::Linear;
    if (text == "power") return ModelFamily::Power;
    return std::nullopt;
}

std::string describe(const ModelForm& model) {
    std::ostringstream os;
    os.precision(10);
    std::visit(
        [&](const auto& m) {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, Constant>) {
                os << "constant(c=" << m.c << ")";
            } else if constexpr (std::is_same_v<T, Linear>) {
                os << "linear(a=" << m.a << ", b=" << m.b << ")";
            } else {
                os << "power(a=" << m.a << ", b=" << m.b << ")";
            }
        },
        model);
    return os.str();
}

double predict(const ModelForm& model, double x) {
    return std::visit(
        [x](const auto& m) -> double {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, Constant>) {
                return m.c;
            } else if constexpr (std::is_same_v<T, Linear>) {
                return m.a + m.b * x;
            } else {
                if (!(x > 0.0)) throw std::domain_error("power model is undefined at x <= 0");
                return m.a * std::pow(x, m.b);
            }
        },
        model);
}

double weighted_median(std::span<const double> values, std::span<const double> weights) {
    return values[weighted_median_index(values, weights)];
}

Diagnostics diagnostics(const ModelForm& model, const XYDataset& data) {
    return diagnostics_of(predictions_of(model, data.xs()), data.ys());
}

double criterion_objective(FitCriterion criterion, const ModelForm& model, const XYDataset& data) {
    return objective_of(criterion, predictions_of(model, data.xs()), data.ys());
}

FitResult fit_constant(std::span<const double> ys, FitCriterion criterion) {
    if (ys.empty()) throw std::domain_error("cannot fit a constant to an empty sample");
    require_positive_ys(ys);
    double c = 0.0;
    switch (criterion) {
    case FitCriterion::LeastSquaresLnQ: {
        double s = 0.0;
        for (double y : ys) s += std::log(y);
        c = std::exp(s / static_cast<double>(ys.size()));
        break;
    }
    case FitCriterion::OLS: c = mean_of(ys); break;
    case FitCriterion::LAD: {
        // Unit-weight median; for even n the lower middle value.
        const std::vector<double> ones(ys.size(), 1.0);
        c = weighted_median(ys, ones);
        break;
    }
    case FitCriterion::MinMAPE: {
        std::vector<double> w(ys.size());
        for (std::size_t i = 0; i < ys.size(); ++i) w[i] = 1.0 / ys[i];
        c = weighted_median(ys, w);
        break;
    }
    }
    const std::vector<double> xs(ys.size(), 0.0);
    return assemble(Constant{c}, criterion, xs, ys, true, 0);
}

FitResult fit_linear(const XYDataset& data, FitCriterion criterion) {
    const auto xs = data.xs();
    const auto ys = data.ys();
    require_distinct_x(xs);
    LineFit lf;
    switch (criterion) {
    case FitCriterion::OLS: {
        const double mx = mean_of(xs);
        const double my = mean_of(ys);
        double sxy = 0, sxx = 0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            sxy += (xs[i] - mx) * (ys[i] - my);
            sxx += (xs[i] - mx) * (xs[i] - mx);
        }
        const double b = sxy / sxx;
        lf.line = Linear{my - b * mx, b};
        break;
    }
    case FitCriterion::LAD: {
        const std::vector<double> w(xs.size(), 1.0);
        lf = weighted_lad_line(xs, ys, w);
        break;
    }
    case FitCriterion::MinMAPE: {
        std::vector<double> w(xs.size());
        for (std::size_t i = 0; i < xs.size(); ++i) w[i] = 1.0 / ys[i];
        lf = weighted_lad_line(xs, ys, w);
        break;
    }
    case FitCriterion::LeastSquaresLnQ:
        lf = lnq_line(xs, ys);
        rescale_to_unit_q_product(lf.line, xs, ys);
        break;
    }
    return assemble(lf.line, criterion, xs, ys, lf.converged, lf.iterations);
}

FitResult fit_power(const XYDataset& data, FitCriterion criterion) {
    const auto xs = data.xs();
    const auto ys = data.ys();
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (!(xs[i] > 0.0)) {
            throw std::domain_error("power model needs x > 0; row " + std::to_string(i + 1) + " has x = " +
                                    std::to_string(xs[i]));
        }
    }
    require_distinct_x(xs);
    PowerFit pf = criterion == FitCriterion::LeastSquaresLnQ ? log_log_power(xs, ys) : profiled_power(criterion, xs, ys);
    if (criterion == FitCriterion::LeastSquaresLnQ) rescale_to_unit_q_product(pf.model, xs, ys);
    return assemble(pf.model, criterion, xs, ys, pf.converged, pf.iterations);
}

FitResult fit(const XYDataset& data, ModelFamily family, FitCriterion criterion) {
    switch (family) {
    case ModelFamily::Constant: return fit_constant(data.ys(), criterion);
    case ModelFamily::Linear: return fit_linear(data, criterion);
    case ModelFamily::Power: return fit_power(data, criterion);
    }
    throw std::logic_error("unknown model family");
}

} // namespace lnq
