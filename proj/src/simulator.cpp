#include "lnq/simulator.hpp"

#include "lnq/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <random>
#include <stdexcept>
#include <thread>

namespace lnq {

namespace {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Parameter that orders the candidates (beta or c) plus its true value.
struct Ordering {
    std::vector<double> params;
    double truth;
};

Ordering ordering_of(const SimulationScenario& s) {
    return std::visit(
        [](const auto& k) -> Ordering {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, PowerMultiplicative>) {
                return {k.beta_candidates, k.beta_true};
            } else {
                return {k.candidates, k.c};
            }
        },
        s.kind);
}

double metric_value(SelectionMetric metric, const PairedObservations& obs) {
    switch (metric) {
    case SelectionMetric::MAPE: return mape(obs);
    case SelectionMetric::SumSqLnQ: return sum_sq_ln_q(obs);
    case SelectionMetric::LSD: return lsd(obs);
    case SelectionMetric::SMAPE: return smape(obs);
    }
    throw std::logic_error("unknown selection metric");
}

double round1(double v) { return std::round(v * 10.0) / 10.0; }

TableDocument make_table(std::string title, std::vector<std::string> columns, std::vector<std::vector<double>> rows) {
    TableDocument doc{std::move(title), std::move(columns), std::move(rows)};
    doc.validate();
    return doc;
}

std::vector<std::string> correct_columns() { return {"sigma", "MAPE", "SumSqLnQ", "LSD", "SMAPE"}; }

std::vector<std::string> bias_columns() {
    std::vector<std::string> cols{"sigma"};
    for (SelectionMetric m : kSelectionMetrics) {
        cols.push_back(std::string(to_string(m)) + "_under");
        cols.push_back(std::string(to_string(m)) + "_over");
    }
    return cols;
}

} // namespace

std::string_view to_string(SelectionMetric metric) noexcept {
    switch (metric) {
    case SelectionMetric::MAPE: return "MAPE";
    case SelectionMetric::SumSqLnQ: return "SumSqLnQ";
    case SelectionMetric::LSD: return "LSD";
    case SelectionMetric::SMAPE: return "SMAPE";
    }
    return "?";
}

std::vector<double> default_power_grid() {
    std::vector<double> xs;
    for (int x = 50; x <= 1500; x += 50) xs.push_back(x);
    return xs;
}

void validate(const SimulationScenario& s) {
    if (!(s.sigma > 0.0) || !std::isfinite(s.sigma)) throw std::invalid_argument("sigma must be positive");
    if (s.replications == 0) throw std::invalid_argument("replications must be at least 1");
    const auto ord = ordering_of(s);
    if (std::count(ord.params.begin(), ord.params.end(), ord.truth) != 1) {
        throw std::invalid_argument("candidate list must contain the true model exactly once");
    }
    if (const auto* p = std::get_if<PowerMultiplicative>(&s.kind)) {
        const auto grid = p->x_grid.empty() ? default_power_grid() : p->x_grid;
        if (grid.size() < 2) throw std::invalid_argument("power scenario needs at least two grid points");
        for (double x : grid) {
            if (!(x > 0.0)) throw std::invalid_argument("power scenario grid must be positive");
        }
    } else {
        for (double c : ord.params) {
            if (!(c > 0.0)) throw std::invalid_argument("constant candidates must be positive");
        }
        if (!(ord.truth > 0.0)) throw std::invalid_argument("true constant must be positive");
    }
}

std::vector<ModelForm> candidate_models(const SimulationScenario& s) {
    return std::visit(
        [](const auto& k) {
            using T = std::decay_t<decltype(k)>;
            std::vector<ModelForm> out;
            if constexpr (std::is_same_v<T, PowerMultiplicative>) {
                for (double b : k.beta_candidates) out.emplace_back(Power{std::exp(k.alpha), b});
            } else {
                for (double c : k.candidates) out.emplace_back(Constant{c});
            }
            return out;
        },
        s.kind);
}

std::size_t true_candidate_index(const SimulationScenario& s) {
    const auto ord = ordering_of(s);
    const auto it = std::find(ord.params.begin(), ord.params.end(), ord.truth);
    if (it == ord.params.end()) throw std::invalid_argument("true model is not among the candidates");
    return static_cast<std::size_t>(it - ord.params.begin());
}

Replication generate_replication(const SimulationScenario& s, std::size_t index) {
    if (index >= s.replications) throw std::out_of_range("replication index out of range");
    const auto seed = s.master_seed;
    const auto idx = static_cast<std::uint64_t>(index);
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(idx), static_cast<std::uint32_t>(idx >> 32)};
    std::mt19937_64 rng(seq);
    std::normal_distribution<double> normal(0.0, s.sigma);

    std::vector<double> xs;
    std::vector<double> ys;
    std::size_t redraws = 0;
    std::visit(
        [&](const auto& k) {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, PowerMultiplicative>) {
                xs = k.x_grid.empty() ? default_power_grid() : k.x_grid;
                const double scale = std::exp(k.alpha);
                for (double x : xs) ys.push_back(scale * std::pow(x, k.beta_true) * std::exp(normal(rng)));
            } else {
                for (int i = 1; i <= 30; ++i) xs.push_back(i);
                for (std::size_t i = 0; i < xs.size(); ++i) {
                    if constexpr (std::is_same_v<T, ConstantMultiplicative>) {
                        ys.push_back(k.c * std::exp(normal(rng)));
                    } else {
                        double y = k.c + normal(rng);
                        while (!(y > 0.0)) {
                            ++redraws;
                            y = k.c + normal(rng);
                        }
                        ys.push_back(y);
                    }
                }
            }
        },
        s.kind);
    return Replication{XYDataset(std::move(xs), std::move(ys)), redraws};
}

std::vector<double> score_candidates(const XYDataset& data, std::span<const ModelForm> candidates,
                                     SelectionMetric metric) {
    std::vector<double> scores;
    scores.reserve(candidates.size());
    const std::vector<double> actuals(data.ys().begin(), data.ys().end());
    std::vector<double> preds(data.size());
    for (const auto& model : candidates) {
        for (std::size_t i = 0; i < data.size(); ++i) preds[i] = predict(model, data.xs()[i]);
        scores.push_back(metric_value(metric, PairedObservations(actuals, preds)));
    }
    return scores;
}

Selection select_best_model(const XYDataset& data, std::span<const ModelForm> candidates, SelectionMetric metric) {
    if (candidates.empty()) throw std::invalid_argument("no candidate models");
    const auto scores = score_candidates(data, candidates, metric);
    Selection sel;
    for (std::size_t i = 1; i < scores.size(); ++i) {
        if (scores[i] < scores[sel.index]) sel.index = i;
    }
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (i != sel.index && scores[i] == scores[sel.index]) sel.tie = true;
    }
    return sel;
}

SelectionTally& SelectionTally::merge(const SelectionTally& other) {
    for (std::size_t m = 0; m < per_metric.size(); ++m) {
        per_metric[m].correct += other.per_metric[m].correct;
        per_metric[m].under += other.per_metric[m].under;
        per_metric[m].over += other.per_metric[m].over;
        per_metric[m].ties += other.per_metric[m].ties;
    }
    replications += other.replications;
    redraws += other.redraws;
    return *this;
}

SelectionTally run_experiment(const SimulationScenario& scenario, unsigned threads) {
    validate(scenario);
    const auto candidates = candidate_models(scenario);
    const auto ord = ordering_of(scenario);
    const std::size_t n = scenario.replications;

    std::vector<std::array<Selection, 4>> picks(n);
    std::vector<std::size_t> redraws(n, 0);
    auto work = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            const auto rep = generate_replication(scenario, i);
            redraws[i] = rep.redraws;
            for (std::size_t m = 0; m < kSelectionMetrics.size(); ++m) {
                picks[i][m] = select_best_model(rep.data, candidates, kSelectionMetrics[m]);
            }
        }
    };

    unsigned workers = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, n));
    if (workers <= 1) {
        work(0, n);
    } else {
        std::vector<std::exception_ptr> errors(workers);
        std::vector<std::thread> pool;
        const std::size_t chunk = (n + workers - 1) / workers;
        for (unsigned t = 0; t < workers; ++t) {
            const std::size_t begin = std::min(n, t * chunk);
            const std::size_t end = std::min(n, begin + chunk);
            pool.emplace_back([&, t, begin, end] {
                try {
                    work(begin, end);
                } catch (...) {
                    errors[t] = std::current_exception();
                }
            });
        }
        for (auto& th : pool) th.join();
        for (const auto& e : errors) {
            if (e) std::rethrow_exception(e);
        }
    }

    // Tallied in replication order, so the thread layout cannot matter.
    SelectionTally tally;
    tally.replications = n;
    for (std::size_t i = 0; i < n; ++i) {
        tally.redraws += redraws[i];
        for (std::size_t m = 0; m < kSelectionMetrics.size(); ++m) {
            const Selection sel = picks[i][m];
            auto& cell = tally.per_metric[m];
            const double chosen = ord.params[sel.index];
            if (chosen == ord.truth) {
                ++cell.correct;
            } else if (chosen < ord.truth) {
                ++cell.under;
            } else {
                ++cell.over;
            }
            if (sel.tie) ++cell.ties;
        }
    }
    return tally;
}

std::uint64_t cell_seed(std::uint64_t master_seed, unsigned group, unsigned sigma_index) noexcept {
    return splitmix64(splitmix64(master_seed) ^ ((static_cast<std::uint64_t>(group) << 32) | sigma_index));
}

TableSuite run_table_suite(std::uint64_t master_seed, std::size_t replications, unsigned threads) {
    TableSuite suite;
    suite.replications = replications;

    std::vector<std::vector<double>> t1, t2, t3, t4, t5;
    auto run_group = [&](unsigned group, const auto& sigmas, auto make_kind, auto& correct_rows, auto* bias_rows) {
        for (unsigned si = 0; si < sigmas.size(); ++si) {
            const SimulationScenario sc{make_kind(), sigmas[si], replications, cell_seed(master_seed, group, si)};
            const auto tally = run_experiment(sc, threads);
            suite.redraws += tally.redraws;
            std::vector<double> row{sigmas[si]};
            std::vector<double> bias{sigmas[si]};
            for (SelectionMetric m : kSelectionMetrics) {
                row.push_back(round1(tally.percent(tally[m].correct)));
                bias.push_back(round1(tally.percent(tally[m].under)));
                bias.push_back(round1(tally.percent(tally[m].over)));
            }
            correct_rows.push_back(std::move(row));
            if (bias_rows) bias_rows->push_back(std::move(bias));
        }
    };
    run_group(0, kMultiplicativeSigmas, [] { return ScenarioKind{PowerMultiplicative{}}; }, t1,
              static_cast<std::vector<std::vector<double>>*>(nullptr));
    run_group(1, kMultiplicativeSigmas, [] { return ScenarioKind{ConstantMultiplicative{}}; }, t2, &t3);
    run_group(2, kAdditiveSigmas, [] { return ScenarioKind{ConstantAdditive{}}; }, t4, &t5);

    suite.tables[0] = make_table("Table1", correct_columns(), std::move(t1));
    suite.tables[1] = make_table("Table2", correct_columns(), std::move(t2));
    suite.tables[2] = make_table("Table3", bias_columns(), std::move(t3));
    suite.tables[3] = make_table("Table4", correct_columns(), std::move(t4));
    suite.tables[4] = make_table("Table5", bias_columns(), std::move(t5));
    return suite;
}

const TableDocument& published_table(int number) {
    static const std::array<TableDocument, 5> tables{
        make_table("Table1", correct_columns(),
                   {{0.1, 86, 88, 82, 82}, {0.2, 43, 59, 48, 52}, {0.3, 19, 43, 28, 35}, {0.4, 7, 34, 16, 27}}),
        make_table("Table2", correct_columns(),
                   {{0.1, 97, 100, 98, 98}, {0.2, 57, 81, 72, 75}, {0.3, 27, 62, 45, 54}, {0.4, 11, 52, 29, 39}}),
        make_table("Table3", bias_columns(),
                   {{0.1, 3, 0, 0, 0, 0, 2, 2, 0},
                    {0.2, 41, 2, 9, 10, 3, 25, 11, 14},
                    {0.3, 69, 4, 18, 20, 4, 51, 21, 25},
                    {0.4, 88, 1, 23, 25, 4, 67, 31, 30}}),
        make_table("Table4", correct_columns(),
                   {{1.0, 97, 100, 100, 98}, {1.5, 78, 90, 92, 87}, {2.0, 54, 76, 82, 74}, {2.5, 34, 60, 72, 64}}),
        make_table("Table5", bias_columns(),
                   {{1.0, 3, 0, 0, 0, 0, 0, 0, 2},
                    {1.5, 20, 2, 8, 2, 3, 5, 6, 7},
                    {2.0, 42, 0, 20, 4, 7, 11, 12, 14},
                    {2.5, 54, 1, 34, 15, 11, 17, 16, 20}}),
    };
    if (number < 1 || number > 5) throw std::out_of_range("published tables are numbered 1 to 5");
    return tables[static_cast<std::size_t>(number - 1)];
}

std::vector<CellComparison> compare_with_published(const TableSuite& suite, double tolerance_points) {
    std::vector<CellComparison> out;
    for (int t = 1; t <= 5; ++t) {
        const auto& mine = suite.tables[static_cast<std::size_t>(t - 1)];
        const auto& ref = published_table(t);
        for (std::size_t r = 0; r < ref.rows.size() && r < mine.rows.size(); ++r) {
            for (std::size_t c = 1; c < ref.columns.size(); ++c) {
                const double a = mine.rows[r][c];
                const double b = ref.rows[r][c];
                out.push_back({t, ref.rows[r][0], ref.columns[c], a, b, std::abs(a - b) <= tolerance_points});
            }
        }
    }
    return out;
}

} // namespace lnq
