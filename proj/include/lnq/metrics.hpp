#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace lnq {

/// Actual and predicted values of a strictly positive quantity, paired by
/// position. Construction validates; a live object always satisfies
/// equal lengths, n >= 1 and every value finite and > 0.
class PairedObservations {
public:
    PairedObservations(std::vector<double> actuals, std::vector<double> predictions);

    [[nodiscard]] std::span<const double> actuals() const noexcept { return actuals_; }
    [[nodiscard]] std::span<const double> predictions() const noexcept { return predictions_; }
    [[nodiscard]] std::size_t size() const noexcept { return actuals_.size(); }

    /// Same data with the roles of actuals and predictions exchanged.
    [[nodiscard]] PairedObservations swapped() const;

private:
    std::vector<double> actuals_;
    std::vector<double> predictions_;
};

/// prediction / actual. Throws std::domain_error unless both are > 0.
double accuracy_ratio(double prediction, double actual);

/// ln(prediction / actual), computed as ln(prediction) - ln(actual) so that
/// swapping the arguments negates the result exactly.
double log_accuracy_ratio(double prediction, double actual);

// Aggregate measures. All are dimensionless fractions, not percentages.
double mape(const PairedObservations& obs);
double mer(const PairedObservations& obs);
double smape(const PairedObservations& obs);
double sum_sq_ln_q(const PairedObservations& obs);

/// Logarithmic standard deviation:
///   sqrt( sum_i (s^2/2 - lnQ_i)^2 / (n - 1) )
/// where s^2 is the sample variance (divisor n - 1) of the lnQ_i.
/// Requires n >= 2.
double lsd(const PairedObservations& obs);

/// Product of the accuracy ratios, evaluated as exp(sum lnQ_i).
double q_product(const PairedObservations& obs);

/// Seven measures of relative change between an observed value f and a
/// predicted value g.
struct TornqvistMeasures {
    double rel_error;          // (f-g)/f
    double mer_form;           // (f-g)/g
    double smape_form;         // (f-g)/((f+g)/2)
    double log_change;         // ln(g/f)
    double geometric_form;     // (f-g)/sqrt(fg)
    double balanced;           // (f-g)/min(f,g)
    double inverted_balanced;  // (f-g)/max(f,g)

    static constexpr std::array<std::string_view, 7> labels{
        "rel_error", "mer_form", "smape_form", "log_change",
        "geometric_form", "balanced", "inverted_balanced"};

    [[nodiscard]] std::array<double, 7> values() const noexcept {
        return {rel_error, mer_form, smape_form, log_change,
                geometric_form, balanced, inverted_balanced};
    }
};

TornqvistMeasures tornqvist_measures(double observed, double predicted);

struct MetricReport {
    double mape = 0.0;
    double smape = 0.0;
    double mer = 0.0;
    double sum_sq_ln_q = 0.0;
    double mean_ln_q = 0.0;
    std::optional<double> lsd;  // absent when n == 1
    double q_product = 1.0;
};

MetricReport evaluate_all(const PairedObservations& obs);

} // namespace lnq
