#pragma once

#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "creditlab/config.hpp"
#include "creditlab/dataset.hpp"
#include "creditlab/discriminant.hpp"
#include "creditlab/neural.hpp"
#include "creditlab/report.hpp"
#include "creditlab/stepwise.hpp"
#include "creditlab/synthetic.hpp"

namespace creditlab {

// Full experiment configuration. Sections: [data], [split], [stepwise],
// [lda], [nn], [search]; unknown keys are rejected.
struct PipelineConfig {
    // [data] — exactly one of `source` (CSV path) or synthetic generation
    std::string source;
    std::optional<SyntheticSpec> synthetic;
    std::vector<int> years;  // synthetic only: cyclic year assignment

    // [split]
    std::set<int> base_years;
    int test_year = 0;

    // [stepwise]
    std::vector<std::string> candidates;  // empty = every dataset variable
    double f_enter = 3.84;
    double f_remove = 2.71;

    // [lda]
    Priors priors = Priors::proportional;

    // [nn]
    TrainConfig train;
    ThresholdSample threshold_sample = ThresholdSample::test;

    // [search] — hidden layer sizes per configuration; input and output
    // layers are added once the selected variable count is known
    std::vector<std::vector<int>> hidden_layers;
};

namespace detail {

inline int parse_int_value(const std::string& s, const std::string& what) {
    try {
        std::size_t pos = 0;
        const int v = std::stoi(s, &pos);
        if (pos != s.size()) throw ConfigError("");
        return v;
    } catch (...) {
        throw ConfigError("invalid integer '" + s + "' for " + what);
    }
}

inline double parse_double_value(const std::string& s, const std::string& what) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw ConfigError("");
        return v;
    } catch (...) {
        throw ConfigError("invalid number '" + s + "' for " + what);
    }
}

inline std::vector<int> parse_int_list(const std::string& s, char sep, const std::string& what) {
    std::vector<int> out;
    for (const auto& item : split_list(s, sep)) out.push_back(parse_int_value(item, what));
    return out;
}

}  // namespace detail

inline PipelineConfig parse_pipeline_config(std::istream& in) {
    const ConfigFile cfg = ConfigFile::parse(in);
    cfg.validate({
        {"data", {"source", "synthetic", "n0", "n1", "dim", "separation", "planted", "seed", "years"}},
        {"split", {"base_years", "test_year"}},
        {"stepwise", {"candidates", "f_enter", "f_remove"}},
        {"lda", {"priors"}},
        {"nn", {"epochs", "seed", "eta_plus", "eta_minus", "delta_init", "delta_max", "delta_min",
                "threshold_on"}},
        {"search", {"hidden"}},
    });

    PipelineConfig p;

    const bool synthetic = cfg.get_or("data", "synthetic", "false") == "true";
    if (synthetic) {
        const long n0 = detail::parse_int_value(cfg.get("data", "n0"), "n0");
        const long n1 = detail::parse_int_value(cfg.get("data", "n1"), "n1");
        const int dim = detail::parse_int_value(cfg.get("data", "dim"), "dim");
        const double sep = detail::parse_double_value(cfg.get_or("data", "separation", "4"), "separation");
        const int planted = detail::parse_int_value(cfg.get_or("data", "planted", "1"), "planted");
        const auto seed = static_cast<std::uint64_t>(
            detail::parse_int_value(cfg.get_or("data", "seed", "1"), "seed"));
        if (planted < 1 || planted > dim)
            throw ConfigError("planted axis must lie in 1..dim");
        p.synthetic = planted_spec(n0, n1, dim, sep, planted - 1, seed);
        p.years = detail::parse_int_list(cfg.get("data", "years"), ',', "years");
        if (p.years.empty()) throw ConfigError("synthetic data needs at least one year");
    } else {
        p.source = cfg.get("data", "source");
        if (cfg.has("data", "years"))
            throw ConfigError("'years' applies to synthetic data only");
    }

    for (int y : detail::parse_int_list(cfg.get("split", "base_years"), ',', "base_years"))
        p.base_years.insert(y);
    if (p.base_years.empty()) throw ConfigError("base_years must name at least one year");
    p.test_year = detail::parse_int_value(cfg.get("split", "test_year"), "test_year");

    if (cfg.has("stepwise", "candidates"))
        p.candidates = detail::split_list(cfg.get("stepwise", "candidates"), ',');
    p.f_enter = detail::parse_double_value(cfg.get_or("stepwise", "f_enter", "3.84"), "f_enter");
    p.f_remove = detail::parse_double_value(cfg.get_or("stepwise", "f_remove", "2.71"), "f_remove");

    const std::string priors = cfg.get_or("lda", "priors", "proportional");
    if (priors == "proportional")
        p.priors = Priors::proportional;
    else if (priors == "equal")
        p.priors = Priors::equal;
    else
        throw ConfigError("priors must be 'proportional' or 'equal'");

    p.train.epochs = detail::parse_int_value(cfg.get_or("nn", "epochs", "500"), "epochs");
    p.train.seed = static_cast<std::uint64_t>(
        detail::parse_int_value(cfg.get_or("nn", "seed", "1"), "seed"));
    p.train.eta_plus = detail::parse_double_value(cfg.get_or("nn", "eta_plus", "1.2"), "eta_plus");
    p.train.eta_minus = detail::parse_double_value(cfg.get_or("nn", "eta_minus", "0.5"), "eta_minus");
    p.train.delta_init = detail::parse_double_value(cfg.get_or("nn", "delta_init", "0.07"), "delta_init");
    p.train.delta_max = detail::parse_double_value(cfg.get_or("nn", "delta_max", "50"), "delta_max");
    p.train.delta_min = detail::parse_double_value(cfg.get_or("nn", "delta_min", "1e-6"), "delta_min");
    const std::string thr = cfg.get_or("nn", "threshold_on", "test");
    if (thr == "test")
        p.threshold_sample = ThresholdSample::test;
    else if (thr == "train")
        p.threshold_sample = ThresholdSample::train;
    else
        throw ConfigError("threshold_on must be 'test' or 'train'");

    for (const auto& entry : detail::split_list(cfg.get("search", "hidden"), ';')) {
        if (entry == "none") {
            p.hidden_layers.emplace_back();
            continue;
        }
        std::vector<int> sizes;
        std::istringstream es(entry);
        std::string tok;
        while (es >> tok) sizes.push_back(detail::parse_int_value(tok, "hidden layer size"));
        if (sizes.empty()) throw ConfigError("empty hidden-layer entry");
        p.hidden_layers.push_back(std::move(sizes));
    }
    if (p.hidden_layers.empty()) throw ConfigError("search needs at least one hidden entry");

    return p;
}

// Everything one full comparison run produces; rates are fractions in [0,1].
struct ComparisonReport {
    long base_count = 0, test_count = 0;
    std::vector<std::string> selected_variables;
    StepwiseTrace trace;
    std::vector<GroupMeanTest> tests;  // selected variables, candidate order
    LdaModel lda;
    ConfusionTable lda_base_table, lda_test_table;
    double lda_rate = 0.0;  // base-sample rate (the study's headline figure)
    SearchResult search;
    std::vector<PerFirmRow> per_firm;  // test sample, best network
    double nn_threshold = 0.0;
    double nn_rate = 0.0;  // test-sample median-threshold rate
};

namespace detail {

template <typename F>
auto stage(const char* name, F&& f) {
    try {
        return f();
    } catch (const PipelineError&) {
        throw;
    } catch (const Error& e) {
        throw PipelineError(name, e.what());
    }
}

inline void write_report_txt(std::ostream& out, const ComparisonReport& r,
                             const PipelineConfig& cfg) {
    out << "credit model comparison\n=======================\n\n";
    out << "base sample: " << r.base_count << " records; test sample: " << r.test_count
        << " records (test year " << cfg.test_year << ")\n";
    out << "selected variables:";
    for (const auto& v : r.selected_variables) out << ' ' << v;
    out << "\n\nstepwise trace:\n";
    for (const auto& s : r.trace.steps)
        out << "  step " << s.step << ": " << (s.action == StepAction::enter ? "enter " : "remove ")
            << s.variable << "  (wilks " << fmt::lambda(s.wilks_after) << ", F "
            << fmt::fstat(s.f_change) << ")\n";

    out << "\ngroup mean equality tests\n" << table2_text(r.tests);
    out << "\ncanonical discriminant function\n" << table3_text(r.lda);
    if (r.lda.geometry) {
        const auto& g = *r.lda.geometry;
        out << "centroids: " << fmt::coefficient(g.centroid0) << " / "
            << fmt::coefficient(g.centroid1) << "; priors: " << fmt::coefficient(g.prior0)
            << " / " << fmt::coefficient(g.prior1) << "; cutoff: " << fmt::coefficient(g.cutoff)
            << '\n';
    }
    out << "\nclassification of the base sample\n" << table4_text(r.lda_base_table);
    out << "\nclassification of the test sample\n" << table4_text(r.lda_test_table);
    out << "\narchitecture search\n" << table5_text(r.search.results, r.search.best_index);
    out << "\nper-firm test classification, best network (threshold "
        << fmt::coefficient(r.nn_threshold) << ")\n"
        << table6_text(r.per_firm);
    out << "\ncomparison\n";
    out << "  discriminant analysis, base sample:          " << fmt::percentage(r.lda_rate)
        << "%\n";
    out << "  discriminant analysis, test sample:          "
        << fmt::percentage(r.lda_test_table.overall_rate()) << "%\n";
    out << "  neural network, test sample (median rule):   " << fmt::percentage(r.nn_rate)
        << "%\n";
}

}  // namespace detail

// Runs split -> stepwise -> LDA fit and tables -> architecture search ->
// median classification, persisting every intermediate table under `out_dir`
// (table2.csv .. table6.csv plus report.txt). Errors carry the stage name.
inline ComparisonReport run_pipeline(const Dataset& dataset, const PipelineConfig& cfg,
                                     const std::filesystem::path& out_dir) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);

    ComparisonReport report;

    auto [base, test] = detail::stage("split", [&] {
        return split_by_period(dataset, cfg.base_years, cfg.test_year);
    });
    report.base_count = static_cast<long>(base.records.size());
    report.test_count = static_cast<long>(test.records.size());

    const std::vector<std::string> candidates =
        cfg.candidates.empty() ? dataset.variable_names : cfg.candidates;

    report.trace = detail::stage("stepwise", [&] {
        return stepwise_select(base, candidates, cfg.f_enter, cfg.f_remove);
    });
    // report in candidate order, like the study's tables
    for (const auto& c : candidates)
        for (const auto& s : report.trace.selected)
            if (c == s) report.selected_variables.push_back(c);

    report.tests = detail::stage("group-mean-tests", [&] {
        std::vector<GroupMeanTest> tests;
        for (const auto& v : report.selected_variables) tests.push_back(group_mean_test(base, v));
        return tests;
    });

    detail::stage("lda", [&] {
        report.lda = fit_lda(base, report.selected_variables, cfg.priors);
        report.lda_base_table = classification_table(report.lda, base);
        report.lda_rate = report.lda_base_table.overall_rate();
        if (!test.records.empty())
            report.lda_test_table = classification_table(report.lda, test);
        return 0;
    });

    detail::stage("search", [&] {
        if (test.records.empty()) throw Error("architecture search requires a non-empty test sample");
        const auto cols_base = base.column_indices(report.selected_variables);
        const auto cols_test = test.column_indices(report.selected_variables);
        std::vector<std::vector<double>> train_x, test_x;
        std::vector<double> train_y, test_y;
        for (const auto& rec : base.records) {
            std::vector<double> x;
            for (auto c : cols_base) x.push_back(rec.values[c]);
            train_x.push_back(std::move(x));
            train_y.push_back(rec.label);
        }
        for (const auto& rec : test.records) {
            std::vector<double> x;
            for (auto c : cols_test) x.push_back(rec.values[c]);
            test_x.push_back(std::move(x));
            test_y.push_back(rec.label);
        }

        const int input_dim = static_cast<int>(report.selected_variables.size());
        std::vector<std::vector<int>> space;
        for (const auto& hidden : cfg.hidden_layers) {
            std::vector<int> arch = {input_dim};
            arch.insert(arch.end(), hidden.begin(), hidden.end());
            arch.push_back(1);
            space.push_back(std::move(arch));
        }

        report.search = architecture_search(train_x, train_y, test_x, test_y, space, cfg.train,
                                            cfg.threshold_sample);
        if (report.search.best_index < 0) throw Error("every architecture failed to train");

        const Network& best_net = report.search.best_network;
        const auto test_out = forward_batch(best_net, test_x);
        const double threshold = cfg.threshold_sample == ThresholdSample::test
                                     ? median(test_out)
                                     : median(forward_batch(best_net, train_x));
        const auto cls = threshold_classify(test_out, threshold);
        report.nn_threshold = threshold;
        long correct = 0;
        for (std::size_t i = 0; i < test_out.size(); ++i) {
            const int desired = test.records[i].label;
            report.per_firm.push_back(
                {static_cast<int>(i + 1), desired, test_out[i], cls.classes[i]});
            correct += (cls.classes[i] == desired) ? 1 : 0;
        }
        report.nn_rate = static_cast<double>(correct) / static_cast<double>(test_out.size());
        return 0;
    });

    detail::stage("report", [&] {
        auto open = [&](const char* name) {
            std::ofstream f(out_dir / name, std::ios::binary);
            if (!f) throw Error(std::string("cannot write ") + name);
            return f;
        };
        {
            auto f = open("table2.csv");
            table2_csv(f, report.tests);
        }
        {
            auto f = open("table3.csv");
            table3_csv(f, report.lda);
        }
        {
            auto f = open("table4.csv");
            table4_csv(f, report.lda_base_table);
        }
        {
            auto f = open("table5.csv");
            table5_csv(f, report.search.results);
        }
        {
            auto f = open("table6.csv");
            table6_csv(f, report.per_firm);
        }
        {
            auto f = open("report.txt");
            detail::write_report_txt(f, report, cfg);
        }
        return 0;
    });

    return report;
}

// Materializes the [data] section: loads the CSV or draws the synthetic
// sample with its cyclic year assignment. Records dropped for zero
// denominators are returned alongside so the caller can report them.
inline LoadResult load_pipeline_data(const PipelineConfig& cfg) {
    return detail::stage("load", [&] {
        if (cfg.synthetic) {
            LoadResult r;
            r.dataset = generate_synthetic(*cfg.synthetic);
            assign_years_cyclic(r.dataset, cfg.years);
            return r;
        }
        std::ifstream in(cfg.source, std::ios::binary);
        if (!in) throw Error("cannot open '" + cfg.source + "'");
        return load_dataset(in);
    });
}

}  // namespace creditlab
