#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace lnq {

/// Regression input: predictor values and strictly positive responses.
/// Invariants: equal lengths, n >= 2, all values finite, every y > 0.
class XYDataset {
public:
    XYDataset(std::vector<double> xs, std::vector<double> ys);

    [[nodiscard]] std::span<const double> xs() const noexcept { return xs_; }
    [[nodiscard]] std::span<const double> ys() const noexcept { return ys_; }
    [[nodiscard]] std::size_t size() const noexcept { return xs_.size(); }

private:
    std::vector<double> xs_;
    std::vector<double> ys_;
};

struct Constant {
    double c;
};
/// a + b*x
struct Linear {
    double a;
    double b;
};
/// a * x^b, a > 0
struct Power {
    double a;
    double b;
};

using ModelForm = std::variant<Constant, Linear, Power>;

enum class ModelFamily { Constant, Linear, Power };

enum class FitCriterion { MinMAPE, LeastSquaresLnQ, OLS, LAD };

std::string_view to_string(FitCriterion criterion) noexcept;
std::string_view to_string(ModelFamily family) noexcept;
/// Accepts the CLI spellings "mape", "lnq", "ols", "lad".
std::optional<FitCriterion> parse_criterion(std::string_view text) noexcept;
/// Accepts "constant", "linear", "power".
std::optional<ModelFamily> parse_family(std::string_view text) noexcept;

std::string describe(const ModelForm& model);

/// Thrown when every x is identical, so a slope is not identifiable.
class RankDeficientError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Thrown when a fitted model cannot produce positive predictions at
/// every data point, which the relative diagnostics require.
class InfeasibleFitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Throws std::domain_error for a power model at x <= 0.
double predict(const ModelForm& model, double x);

struct Diagnostics {
    std::vector<double> ln_q_residuals;  // ln(prediction_i / y_i)
    double q_product = 1.0;              // exp(sum of residuals)
    std::size_t n_over = 0;              // prediction_i > y_i
    std::size_t n_under = 0;             // prediction_i < y_i
};

struct FitResult {
    ModelForm model;
    FitCriterion criterion;
    /// Criterion value at the optimum, always in summed form:
    ///   MinMAPE          sum |y - yhat| / y
    ///   LeastSquaresLnQ  sum (ln yhat - ln y)^2
    ///   OLS              sum (y - yhat)^2
    ///   LAD              sum |y - yhat|
    double objective = 0.0;
    std::vector<double> ln_q_residuals;
    double q_product = 1.0;
    std::size_t n_over = 0;
    std::size_t n_under = 0;
    bool converged = true;
    std::size_t iterations = 0;
};

Diagnostics diagnostics(const ModelForm& model, const XYDataset& data);

/// Summed criterion value of `model` on `data`. MinMAPE, OLS and LAD accept
/// any finite prediction; LeastSquaresLnQ requires positive predictions.
double criterion_objective(FitCriterion criterion, const ModelForm& model, const XYDataset& data);

/// Minimiser of sum w_i |v_i - m|. Weights must be positive. When the
/// total weight splits evenly the lower of the two candidate values is
/// returned.
double weighted_median(std::span<const double> values, std::span<const double> weights);

FitResult fit_constant(std::span<const double> ys, FitCriterion criterion);
FitResult fit_linear(const XYDataset& data, FitCriterion criterion);
FitResult fit_power(const XYDataset& data, FitCriterion criterion);
FitResult fit(const XYDataset& data, ModelFamily family, FitCriterion criterion);

} // namespace lnq
