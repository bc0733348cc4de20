#include "lnq/cli.hpp"

#include "lnq/dataio.hpp"
#include "lnq/estimators.hpp"
#include "lnq/metrics.hpp"
#include "lnq/simulator.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace lnq::cli {

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitNotConverged = 3;

std::string num(double v) { return format_number(v, NumberFormat::RoundTrip); }

std::string fixed6(double v) {
    std::ostringstream os;
    os.imbue(std::locale::classic());
    os << std::fixed << std::setprecision(6) << v;
    return os.str();
}

void row(std::ostream& out, const std::string& label, const std::string& value) {
    out << std::left << std::setw(12) << label << value << '\n';
}

struct MetricsOptions {
    std::string input, actual, pred, out;
};

struct FitOptions {
    std::string input, x, y, model, criterion, residuals, svg;
};

struct SimulateOptions {
    std::string scenario;
    std::vector<double> sigmas;
    std::size_t reps = kDefaultReplications;
    std::uint64_t seed = kDefaultSeed;
    unsigned threads = 0;
    std::string out;
};

struct TablesOptions {
    std::uint64_t seed = kDefaultSeed;
    std::size_t reps = kDefaultReplications;
    std::string out = "tables";
    unsigned threads = 0;
};

int cmd_metrics(const MetricsOptions& o, std::ostream& out) {
    const auto obs = load_paired_csv(o.input, o.actual, o.pred);
    const auto rep = evaluate_all(obs);
    row(out, "n", std::to_string(obs.size()));
    row(out, "MAPE", num(rep.mape));
    row(out, "SMAPE", num(rep.smape));
    row(out, "MER", num(rep.mer));
    row(out, "Σ(lnQ)²", num(rep.sum_sq_ln_q));
    row(out, "mean lnQ", num(rep.mean_ln_q));
    row(out, "LSD", rep.lsd ? num(*rep.lsd) : std::string("n/a (needs n >= 2)"));
    row(out, "ΠQ", num(rep.q_product));
    out << "(fractions; multiply by 100 for percent)\n";
    if (!o.out.empty()) {
        TableDocument doc{"metrics", {"n", "mape", "smape", "mer", "sum_sq_ln_q", "mean_ln_q"}, {}};
        std::vector<double> values{static_cast<double>(obs.size()), rep.mape, rep.smape, rep.mer, rep.sum_sq_ln_q,
                                   rep.mean_ln_q};
        if (rep.lsd) {
            doc.columns.push_back("lsd");
            values.push_back(*rep.lsd);
        }
        doc.columns.push_back("q_product");
        values.push_back(rep.q_product);
        doc.rows.push_back(std::move(values));
        write_table_csv(doc, o.out, NumberFormat::RoundTrip);
    }
    return 0;
}

struct Fitted {
    XYDataset data;
    FitResult result;
};

Fitted run_fit(const FitOptions& o) {
    auto data = load_xy_csv(o.input, o.x, o.y);
    auto result = fit(data, *parse_family(o.model), *parse_criterion(o.criterion));
    return Fitted{std::move(data), std::move(result)};
}

void print_fit(const FitResult& r, std::size_t n, std::ostream& out) {
    row(out, "model", describe(r.model));
    row(out, "criterion", std::string(to_string(r.criterion)));
    std::visit(
        [&](const auto& m) {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, Constant>) {
                row(out, "c", num(m.c));
            } else {
                row(out, "a", num(m.a));
                row(out, "b", num(m.b));
            }
        },
        r.model);
    row(out, "objective", num(r.objective));
    row(out, "n", std::to_string(n));
    row(out, "n_over", std::to_string(r.n_over));
    row(out, "n_under", std::to_string(r.n_under));
    double sum = 0.0;
    for (double v : r.ln_q_residuals) sum += v;
    row(out, "Σ lnQ", num(sum));
    row(out, "ΠQ", fixed6(r.q_product));
    row(out, "converged", r.converged ? "true" : "false");
    row(out, "iterations", std::to_string(r.iterations));
}

int report_convergence(const FitResult& r, std::ostream& err) {
    if (r.converged) return 0;
    err << "error: optimizer did not converge (converged=false, iterations=" << r.iterations
        << ", objective=" << num(r.objective) << ")\n";
    return kExitNotConverged;
}

int cmd_fit(const FitOptions& o, std::ostream& out, std::ostream& err) {
    const auto [data, r] = run_fit(o);
    print_fit(r, data.size(), out);
    TableDocument series{"ln_q_residuals", {"x", "ln_q"}, {}};
    for (std::size_t i = 0; i < data.size(); ++i) series.rows.push_back({data.xs()[i], r.ln_q_residuals[i]});
    write_table_csv(series, o.residuals, NumberFormat::RoundTrip);
    row(out, "residuals", o.residuals);
    return report_convergence(r, err);
}

int cmd_residuals(const FitOptions& o, std::ostream& out, std::ostream& err) {
    const auto [data, r] = run_fit(o);
    print_fit(r, data.size(), out);
    const auto csv = write_residual_svg(r.ln_q_residuals, data.xs(), o.svg);
    row(out, "svg", o.svg);
    row(out, "series", csv.string());
    return report_convergence(r, err);
}

std::vector<std::string> percent_columns() {
    std::vector<std::string> cols{"sigma"};
    for (SelectionMetric m : kSelectionMetrics) {
        const std::string name(to_string(m));
        cols.push_back(name + "_correct");
        cols.push_back(name + "_under");
        cols.push_back(name + "_over");
    }
    return cols;
}

int cmd_simulate(const SimulateOptions& o, std::ostream& out, std::ostream& err) {
    ScenarioKind kind;
    std::vector<double> sigmas = o.sigmas;
    if (o.scenario == "power-mult") {
        kind = PowerMultiplicative{};
    } else if (o.scenario == "const-mult") {
        kind = ConstantMultiplicative{};
    } else {
        kind = ConstantAdditive{};
    }
    if (sigmas.empty()) {
        const bool additive = o.scenario == "const-add";
        sigmas.assign(additive ? kAdditiveSigmas.begin() : kMultiplicativeSigmas.begin(),
                      additive ? kAdditiveSigmas.end() : kMultiplicativeSigmas.end());
    }
    TableDocument doc{o.scenario, percent_columns(), {}};
    std::size_t redraws = 0;
    for (std::size_t i = 0; i < sigmas.size(); ++i) {
        const SimulationScenario sc{kind, sigmas[i], o.reps, cell_seed(o.seed, 255, static_cast<unsigned>(i))};
        const auto tally = run_experiment(sc, o.threads);
        redraws += tally.redraws;
        std::vector<double> values{sigmas[i]};
        for (SelectionMetric m : kSelectionMetrics) {
            values.push_back(std::round(tally.percent(tally[m].correct) * 10.0) / 10.0);
            values.push_back(std::round(tally.percent(tally[m].under) * 10.0) / 10.0);
            values.push_back(std::round(tally.percent(tally[m].over) * 10.0) / 10.0);
        }
        doc.rows.push_back(std::move(values));
    }
    if (redraws > 0) err << "note: " << redraws << " additive draws with y <= 0 were redrawn\n";
    out << "# " << o.scenario << ", " << o.reps << " replications, seed " << o.seed << " (percent of replications)\n";
    for (std::size_t c = 0; c < doc.columns.size(); ++c) out << (c ? "," : "") << doc.columns[c];
    out << '\n';
    for (const auto& r : doc.rows) {
        for (std::size_t c = 0; c < r.size(); ++c) out << (c ? "," : "") << format_number(r[c]);
        out << '\n';
    }
    if (!o.out.empty()) write_table_csv(doc, o.out);
    return 0;
}

int cmd_tables(const TablesOptions& o, std::ostream& out, std::ostream& err) {
    const auto suite = run_table_suite(o.seed, o.reps, o.threads);
    std::filesystem::create_directories(o.out);
    for (const auto& t : suite.tables) {
        const auto path = std::filesystem::path(o.out) / (t.title + ".csv");
        write_table_csv(t, path);
        out << "wrote " << path.string() << '\n';
    }
    if (suite.redraws > 0) err << "note: " << suite.redraws << " additive draws with y <= 0 were redrawn\n";

    if (o.reps < kDefaultReplications) {
        out << "comparison with published cells: insufficient replications (" << o.reps << " < "
            << kDefaultReplications << ")\n";
        return 0;
    }
    const auto cmp = compare_with_published(suite);
    std::size_t ok = 0;
    for (const auto& c : cmp) {
        out << "Table" << c.table << " sigma=" << format_number(c.sigma) << ' ' << std::left << std::setw(15)
            << c.column << " reproduced " << std::setw(5) << format_number(c.reproduced) << " published "
            << std::setw(4) << format_number(c.published) << (c.within ? " PASS" : " FAIL") << '\n';
        ok += c.within ? 1 : 0;
    }
    out << ok << " of " << cmp.size() << " cells within ±5 points\n";
    return 0;
}

void add_fit_options(CLI::App* sub, FitOptions& o) {
    sub->add_option("--input", o.input, "CSV file with a header row")->required()->check(CLI::ExistingFile);
    sub->add_option("--x", o.x, "predictor column name")->required();
    sub->add_option("--y", o.y, "response column name")->required();
    sub->add_option("--model", o.model, "model family")
        ->required()
        ->check(CLI::IsMember({"constant", "linear", "power"}));
    sub->add_option("--criterion", o.criterion, "fitting criterion")
        ->required()
        ->check(CLI::IsMember({"mape", "lnq", "ols", "lad"}));
}

} // namespace

int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Relative prediction accuracy: lnQ, MAPE, SMAPE, MER, LSD"};
    app.name("lnq");
    app.require_subcommand(1);

    MetricsOptions mo;
    auto* metrics = app.add_subcommand("metrics", "evaluate accuracy measures on paired actual/predicted data");
    metrics->add_option("--input", mo.input, "CSV file with a header row")->required()->check(CLI::ExistingFile);
    metrics->add_option("--actual", mo.actual, "actual value column")->required();
    metrics->add_option("--pred", mo.pred, "predicted value column")->required();
    metrics->add_option("--out", mo.out, "also write the report as CSV");

    FitOptions fo;
    fo.residuals = "lnq_residuals.csv";
    auto* fitcmd = app.add_subcommand("fit", "fit a model and report lnQ residual diagnostics");
    add_fit_options(fitcmd, fo);
    fitcmd->add_option("--residuals", fo.residuals, "where to write the (x, ln_q) series")->capture_default_str();

    FitOptions ro;
    auto* residuals = app.add_subcommand("residuals", "fit a model and draw its lnQ residuals as an SVG bar chart");
    add_fit_options(residuals, ro);
    residuals->add_option("--svg", ro.svg, "SVG output path; the series goes next to it as .csv")->required();

    SimulateOptions so;
    auto* simulate = app.add_subcommand("simulate", "run one model-selection scenario over a list of noise levels");
    simulate->add_option("--scenario", so.scenario, "data-generating scenario")
        ->required()
        ->check(CLI::IsMember({"power-mult", "const-mult", "const-add"}));
    simulate->add_option("--sigma", so.sigmas, "comma-separated noise levels")
        ->delimiter(',')
        ->check(CLI::PositiveNumber);
    simulate->add_option("--reps", so.reps, "replications per noise level")->check(CLI::PositiveNumber);
    simulate->add_option("--seed", so.seed, "master seed");
    simulate->add_option("--threads", so.threads, "worker threads (0 = all cores)");
    simulate->add_option("--out", so.out, "also write the table as CSV");

    TablesOptions to;
    auto* tables = app.add_subcommand("tables", "reproduce the five model-selection tables");
    tables->add_option("--seed", to.seed, "master seed");
    tables->add_option("--reps", to.reps, "replications per cell")->check(CLI::PositiveNumber);
    tables->add_option("--out", to.out, "output directory");
    tables->add_option("--threads", to.threads, "worker threads (0 = all cores)");

    try {
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }

    try {
        if (*metrics) return cmd_metrics(mo, out);
        if (*fitcmd) return cmd_fit(fo, out, err);
        if (*residuals) return cmd_residuals(ro, out, err);
        if (*simulate) return cmd_simulate(so, out, err);
        if (*tables) return cmd_tables(to, out, err);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitFailure;
    }
    return kExitFailure;
}

} // namespace lnq::cli
