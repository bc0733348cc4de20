#include "lnq/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace lnq {

namespace {

void require_positive(double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw std::domain_error(std::string(what) + " must be finite and > 0, got " + std::to_string(v));
    }
}

std::vector<double> ln_q_values(const PairedObservations& obs) {
    std::vector<double> out(obs.size());
    const auto a = obs.actuals();
    const auto p = obs.predictions();
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = std::log(p[i]) - std::log(a[i]);
    }
    return out;
}

} // namespace

PairedObservations::PairedObservations(std::vector<double> actuals, std::vector<double> predictions)
    : actuals_(std::move(actuals)), predictions_(std::move(predictions)) {
    if (actuals_.size() != predictions_.size()) {
        throw std::domain_error("actuals and predictions differ in length (" + std::to_string(actuals_.size()) +
                                " vs " + std::to_string(predictions_.size()) + ")");
    }
    if (actuals_.empty()) {
        throw std::domain_error("at least one observation is required");
    }
    for (std::size_t i = 0; i < actuals_.size(); ++i) {
        if (!(actuals_[i] > 0.0) || !std::isfinite(actuals_[i])) {
            throw std::domain_error("actual value at index " + std::to_string(i) + " is not positive");
        }
        if (!(predictions_[i] > 0.0) || !std::isfinite(predictions_[i])) {
            throw std::domain_error("prediction at index " + std::to_string(i) + " is not positive");
        }
    }
}

PairedObservations PairedObservations::swapped() const {
    return PairedObservations(predictions_, actuals_);
}

double accuracy_ratio(double prediction, double actual) {
    require_positive(prediction, "prediction");
    require_positive(actual, "actual");
    return prediction / actual;
}

double log_accuracy_ratio(double prediction, double actual) {
    require_positive(prediction, "prediction");
    require_positive(actual, "actual");
    return std::log(prediction) - std::log(actual);
}

double mape(const PairedObservations& obs) {
    const auto a = obs.actuals();
    const auto p = obs.predictions();
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sum += std::abs(a[i] - p[i]) / a[i];
    }
    return sum / static_cast<double>(a.size());
}

double mer(const PairedObservations& obs) {
    const auto a = obs.actuals();
    const auto p = obs.predictions();
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sum += std::abs(a[i] - p[i]) / p[i];
    }
    return sum / static_cast<double>(a.size());
}

double smape(const PairedObservations& obs) {
    const auto a = obs.actuals();
    const auto p = obs.predictions();
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        // a + p is commutative in IEEE arithmetic, so the swap symmetry is exact.
        sum += std::abs(a[i] - p[i]) / (0.5 * (a[i] + p[i]));
    }
    return sum / static_cast<double>(a.size());
}

double sum_sq_ln_q(const PairedObservations& obs) {
    double sum = 0.0;
    for (double r : ln_q_values(obs)) {
        sum += r * r;
    }
    return sum;
}

double lsd(const PairedObservations& obs) {
    const std::size_t n = obs.size();
    if (n < 2) {
        throw std::domain_error("LSD needs at least two observations");
    }
    const auto r = ln_q_values(obs);
    double mean = 0.0;
    for (double v : r) mean += v;
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (double v : r) ss += (v - mean) * (v - mean);
    const double s2 = ss / static_cast<double>(n - 1);

    double acc = 0.0;
    for (double v : r) {
        const double d = 0.5 * s2 - v;
        acc += d * d;
    }
    return std::sqrt(acc / static_cast<double>(n - 1));
}

double q_product(const PairedObservations& obs) {
    double sum = 0.0;
    for (double r : ln_q_values(obs)) sum += r;
    return std::exp(sum);
}

TornqvistMeasures tornqvist_measures(double observed, double predicted) {
    require_positive(observed, "observed value");
    require_positive(predicted, "predicted value");
    const double f = observed;
    const double g = predicted;
    const double d = f - g;
    return TornqvistMeasures{
        .rel_error = d / f,
        .mer_form = d / g,
        .smape_form = d / (0.5 * (f + g)),
        .log_change = std::log(g) - std::log(f),
        .geometric_form = d / std::sqrt(f * g),
        .balanced = d / std::min(f, g),
        .inverted_balanced = d / std::max(f, g),
    };
}

MetricReport evaluate_all(const PairedObservations& obs) {
    MetricReport rep;
    rep.mape = mape(obs);
    rep.smape = smape(obs);
    rep.mer = mer(obs);
    rep.sum_sq_ln_q = sum_sq_ln_q(obs);
    const auto r = ln_q_values(obs);
    double sum = 0.0;
    for (double v : r) sum += v;
    rep.mean_ln_q = sum / static_cast<double>(r.size());
    if (obs.size() >= 2) rep.lsd = lsd(obs);
    rep.q_product = q_product(obs);
    return rep;
}

} // namespace lnq
