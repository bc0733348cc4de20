#pragma once

#include "lnq/dataio.hpp"
#include "lnq/estimators.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace lnq {

enum class SelectionMetric { MAPE, SumSqLnQ, LSD, SMAPE };

inline constexpr std::array<SelectionMetric, 4> kSelectionMetrics{
    SelectionMetric::MAPE, SelectionMetric::SumSqLnQ, SelectionMetric::LSD, SelectionMetric::SMAPE};

std::string_view to_string(SelectionMetric metric) noexcept;

/// y = e^alpha * x^beta * eps on a fixed x grid; candidates share alpha.
struct PowerMultiplicative {
    double alpha = 3.03;
    double beta_true = 0.943;
    std::vector<double> beta_candidates{0.92, 0.93, 0.943, 0.95, 0.96};
    std::vector<double> x_grid;  // empty means 50, 100, ..., 1500
};

/// y = c * eps, eps = exp(N(0, sigma)).
struct ConstantMultiplicative {
    double c = 10.0;
    std::vector<double> candidates{8.0, 9.0, 10.0, 11.0, 12.0};
};

/// y = c + e, e ~ N(0, sigma), redrawn while y <= 0.
struct ConstantAdditive {
    double c = 10.0;
    std::vector<double> candidates{8.0, 9.0, 10.0, 11.0, 12.0};
};

using ScenarioKind = std::variant<PowerMultiplicative, ConstantMultiplicative, ConstantAdditive>;

struct SimulationScenario {
    ScenarioKind kind;
    double sigma = 0.2;
    std::size_t replications = 10'000;
    std::uint64_t master_seed = 0;
};

/// Throws std::invalid_argument if sigma <= 0, replications == 0, or the
/// true parameter is not among the candidates exactly once.
void validate(const SimulationScenario& scenario);

/// The 30-point grid 50, 100, ..., 1500.
std::vector<double> default_power_grid();

std::vector<ModelForm> candidate_models(const SimulationScenario& scenario);
/// Position of the generating model within candidate_models().
std::size_t true_candidate_index(const SimulationScenario& scenario);

struct Replication {
    XYDataset data;
    std::size_t redraws = 0;  // additive draws rejected for y <= 0
};

/// Dataset for one replication. The random stream is a std::mt19937_64
/// seeded through std::seed_seq from (master_seed, replication_index), with
/// normals from std::normal_distribution, so the result depends only on
/// those two numbers (and the standard library in use).
Replication generate_replication(const SimulationScenario& scenario, std::size_t replication_index);

struct Selection {
    std::size_t index = 0;
    bool tie = false;  // another candidate reached the same minimum
};

/// Candidate minimising the metric over (actuals = data.ys, predictions);
/// ties go to the earliest candidate.
Selection select_best_model(const XYDataset& data, std::span<const ModelForm> candidates, SelectionMetric metric);

/// Metric value of every candidate, in candidate order.
std::vector<double> score_candidates(const XYDataset& data, std::span<const ModelForm> candidates,
                                     SelectionMetric metric);

struct MetricTally {
    std::size_t correct = 0;
    std::size_t under = 0;
    std::size_t over = 0;
    std::size_t ties = 0;

    friend bool operator==(const MetricTally&, const MetricTally&) = default;
};

struct SelectionTally {
    std::array<MetricTally, 4> per_metric{};
    std::size_t replications = 0;
    std::size_t redraws = 0;

    [[nodiscard]] const MetricTally& operator[](SelectionMetric m) const {
        return per_metric[static_cast<std::size_t>(m)];
    }
    [[nodiscard]] MetricTally& operator[](SelectionMetric m) { return per_metric[static_cast<std::size_t>(m)]; }

    /// Associative, commutative combination of disjoint replication sets.
    SelectionTally& merge(const SelectionTally& other);

    [[nodiscard]] double percent(std::size_t count) const {
        return replications == 0 ? 0.0 : 100.0 * static_cast<double>(count) / static_cast<double>(replications);
    }

    friend bool operator==(const SelectionTally&, const SelectionTally&) = default;
};

/// Runs every replication and tallies, per metric, whether the selected
/// candidate is the true one, predicts below it (smaller beta or c), or
/// above it. threads == 0 uses the hardware concurrency; the result is the
/// same for any thread count.
SelectionTally run_experiment(const SimulationScenario& scenario, unsigned threads = 0);

inline constexpr std::array<double, 4> kMultiplicativeSigmas{0.1, 0.2, 0.3, 0.4};
inline constexpr std::array<double, 4> kAdditiveSigmas{1.0, 1.5, 2.0, 2.5};
inline constexpr std::size_t kDefaultReplications = 10'000;
inline constexpr std::uint64_t kDefaultSeed = 20150601;

/// Tables 1-5 of the model-selection study. Tables 1, 2 and 4 hold percent
/// correct per metric; Tables 3 and 5 hold percent under/over selections.
/// All values are percents rounded to one decimal.
struct TableSuite {
    std::array<TableDocument, 5> tables;
    std::size_t replications = 0;
    std::size_t redraws = 0;
};

/// Seed of one table cell: scenario group (0 power, 1 constant
/// multiplicative, 2 constant additive) and sigma position.
std::uint64_t cell_seed(std::uint64_t master_seed, unsigned group, unsigned sigma_index) noexcept;

TableSuite run_table_suite(std::uint64_t master_seed, std::size_t replications = kDefaultReplications,
                           unsigned threads = 0);

/// Published cell values for table number 1..5, same layout as the suite.
const TableDocument& published_table(int number);

struct CellComparison {
    int table = 0;
    double sigma = 0.0;
    std::string column;
    double reproduced = 0.0;
    double published = 0.0;
    bool within = false;
};

std::vector<CellComparison> compare_with_published(const TableSuite& suite, double tolerance_points = 5.0);

} // namespace lnq
