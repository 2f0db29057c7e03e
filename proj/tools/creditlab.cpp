// creditlab — command-line front for the credit-risk model laboratory.
//
// Subcommands: ingest, ratios, select, lda, mlp, search, compare, synth.
// Exit codes: 0 success, 1 data/validation error, 2 usage error.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "creditlab/dataset.hpp"
#include "creditlab/discriminant.hpp"
#include "creditlab/neural.hpp"
#include "creditlab/pipeline.hpp"
#include "creditlab/report.hpp"
#include "creditlab/stepwise.hpp"
#include "creditlab/synthetic.hpp"

namespace cl = creditlab;
namespace fs = std::filesystem;

namespace {

cl::LoadResult load_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw cl::Error("cannot open '" + path + "'");
    return cl::load_dataset(in);
}

void report_dropped(const cl::LoadResult& loaded) {
    for (const auto& d : loaded.dropped)
        std::cerr << "warning: row " << d.line << " dropped (zero denominator for "
                  << d.ratio_code << ")\n";
}

std::vector<int> parse_arch(const std::string& s) {
    std::istringstream in(s);
    std::vector<int> arch;
    int v;
    while (in >> v) arch.push_back(v);
    if (!in.eof()) throw cl::Error("invalid architecture '" + s + "'");
    return arch;
}

std::ofstream open_out(const fs::path& path) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw cl::Error("cannot write '" + path.string() + "'");
    return out;
}

struct MlpData {
    std::vector<std::vector<double>> inputs;
    std::vector<double> targets;
};

MlpData extract(const cl::Dataset& ds, const std::vector<std::string>& vars) {
    const auto cols = ds.column_indices(vars);
    MlpData d;
    for (const auto& rec : ds.records) {
        std::vector<double> x;
        for (auto c : cols) x.push_back(rec.values[c]);
        d.inputs.push_back(std::move(x));
        d.targets.push_back(rec.label);
    }
    return d;
}

std::vector<std::string> comma_vars(const std::string& list, const cl::Dataset& ds) {
    if (list.empty()) return ds.variable_names;
    return cl::detail::split_list(list, ',');
}

int run_ingest(const std::string& data) {
    const auto loaded = load_file(data);
    report_dropped(loaded);
    const auto& ds = loaded.dataset;
    std::set<int> years;
    for (const auto& r : ds.records) years.insert(r.year);
    std::cout << "records: " << ds.records.size() << " (class 0: " << ds.count_label(0)
              << ", class 1: " << ds.count_label(1) << ")\n";
    std::cout << "variables:";
    for (const auto& v : ds.variable_names) std::cout << ' ' << v;
    std::cout << "\nyears:";
    for (int y : years) std::cout << ' ' << y;
    std::cout << '\n';
    return 0;
}

int run_ratios(const std::string& data, const std::string& out, bool strict) {
    const auto loaded = load_file(data);
    report_dropped(loaded);
    if (strict && !loaded.dropped.empty())
        throw cl::Error(std::to_string(loaded.dropped.size()) + " record(s) had zero denominators");
    if (out.empty()) {
        cl::save_dataset(std::cout, loaded.dataset);
    } else {
        auto f = open_out(out);
        cl::save_dataset(f, loaded.dataset);
    }
    return 0;
}

int run_select(const std::string& data, const std::string& vars, double f_enter, double f_remove,
               const std::string& out) {
    const auto loaded = load_file(data);
    report_dropped(loaded);
    const auto candidates = comma_vars(vars, loaded.dataset);
    const auto trace = cl::stepwise_select(loaded.dataset, candidates, f_enter, f_remove);
    for (const auto& s : trace.steps)
        std::cout << "step " << s.step << ": "
                  << (s.action == cl::StepAction::enter ? "enter " : "remove ") << s.variable
                  << "  (wilks " << cl::fmt::lambda(s.wilks_after) << ", F "
                  << cl::fmt::fstat(s.f_change) << ")\n";
    std::cout << "selected:";
    for (const auto& v : trace.selected) std::cout << ' ' << v;
    std::cout << '\n';
    if (!out.empty()) {
        auto f = open_out(out);
        cl::write_csv_row(f, {"step", "action", "variable", "wilks_after", "f_change"});
        for (const auto& s : trace.steps)
            cl::write_csv_row(f, {std::to_string(s.step),
                                  s.action == cl::StepAction::enter ? "enter" : "remove",
                                  s.variable, cl::fmt::lambda(s.wilks_after),
                                  cl::fmt::fstat(s.f_change)});
    }
    return 0;
}

int run_lda_score(const std::string& model_path, const std::string& score_path, bool do_classify) {
    std::ifstream min(model_path, std::ios::binary);
    if (!min) throw cl::Error("cannot open '" + model_path + "'");
    const auto model = cl::load_lda_model(min);

    std::ifstream sin(score_path, std::ios::binary);
    if (!sin) throw cl::Error("cannot open '" + score_path + "'");
    const auto table = cl::read_csv(sin);
    std::vector<std::size_t> cols;
    for (const auto& v : model.variables) {
        bool found = false;
        for (std::size_t c = 0; c < table.header.size(); ++c)
            if (table.header[c] == v) {
                cols.push_back(c);
                found = true;
                break;
            }
        if (!found) throw cl::MissingColumn(v);
    }
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        std::vector<double> x;
        for (auto c : cols)
            x.push_back(cl::detail::parse_double(table.rows[i][c], table.line_of(i),
                                                 table.header[c]));
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.6g", cl::score(model, x));
        std::cout << buf;
        if (do_classify) std::cout << ' ' << cl::classify(model, x);
        std::cout << '\n';
    }
    return 0;
}

int run_lda_fit(const std::string& data, const std::string& vars, const std::string& priors,
                const std::string& out, const std::string& tables) {
    const auto loaded = load_file(data);
    report_dropped(loaded);
    const auto& ds = loaded.dataset;
    const auto variables = comma_vars(vars, ds);
    const cl::Priors p = priors == "equal" ? cl::Priors::equal : cl::Priors::proportional;
    const auto model = cl::fit_lda(ds, variables, p);
    std::cout << cl::table3_text(model);
    const auto table = cl::classification_table(model, ds);
    std::cout << '\n' << cl::table4_text(table);
    if (!out.empty()) {
        auto f = open_out(out);
        cl::save_lda_model(f, model);
    }
    if (!tables.empty()) {
        fs::create_directories(tables);
        {
            auto f = open_out(fs::path(tables) / "table2.csv");
            std::vector<cl::GroupMeanTest> tests;
            for (const auto& v : variables) tests.push_back(cl::group_mean_test(ds, v));
            cl::table2_csv(f, tests);
        }
        {
            auto f = open_out(fs::path(tables) / "table3.csv");
            cl::table3_csv(f, model);
        }
        {
            auto f = open_out(fs::path(tables) / "table4.csv");
            cl::table4_csv(f, table);
        }
    }
    return 0;
}

int run_mlp(const std::string& data, const std::string& test, const std::string& vars,
            const std::string& arch_str, int epochs, std::uint64_t seed, const std::string& mse_conv,
            const std::string& out, const std::string& curve, bool verbose) {
    const auto loaded = load_file(data);
    report_dropped(loaded);
    const auto variables = comma_vars(vars, loaded.dataset);
    const auto train_data = extract(loaded.dataset, variables);

    auto arch = parse_arch(arch_str);
    if (arch.empty()) throw cl::Error("--arch is required, e.g. \"9 6 8 1\"");

    cl::TrainConfig cfg;
    cfg.epochs = epochs;
    cfg.seed = seed;
    auto result = cl::train_rprop(cl::init_network(arch, seed), train_data.inputs,
                                  train_data.targets, cfg);
    if (verbose)
        for (std::size_t e = 0; e < result.history.errors.size(); ++e)
            std::cerr << "epoch " << e + 1 << " error " << result.history.errors[e] << '\n';
    if (result.status != cl::TrainStatus::completed)
        throw cl::Error("training aborted: error or parameters became non-finite at epoch " +
                        std::to_string(result.epochs_run + 1));

    const auto convention =
        mse_conv == "half_sum" ? cl::MseConvention::half_sum : cl::MseConvention::mean;
    const auto train_out = cl::forward_batch(result.network, train_data.inputs);
    std::cout << "train MSE (" << mse_conv << "): "
              << cl::fmt::mse_value(cl::mse(train_out, train_data.targets, convention)) << '\n';

    if (!test.empty()) {
        const auto tloaded = load_file(test);
        const auto test_data = extract(tloaded.dataset, variables);
        const auto test_out = cl::forward_batch(result.network, test_data.inputs);
        std::cout << "test MSE (" << mse_conv << "): "
                  << cl::fmt::mse_value(cl::mse(test_out, test_data.targets, convention)) << '\n';
        const auto cls = cl::median_threshold_classify(test_out);
        long correct = 0;
        for (std::size_t i = 0; i < cls.classes.size(); ++i)
            correct += cls.classes[i] == static_cast<int>(test_data.targets[i]) ? 1 : 0;
        std::cout << "median threshold: " << cl::fmt::coefficient(cls.threshold)
                  << "; classification rate: "
                  << cl::fmt::percentage(static_cast<double>(correct) /
                                         static_cast<double>(cls.classes.size()))
                  << "%\n";
    }
    if (!out.empty()) {
        auto f = open_out(out);
        cl::save_network(f, result.network);
    }
    if (!curve.empty()) {
        auto f = open_out(curve);
        cl::write_csv_row(f, {"epoch", "half_sum_error"});
        for (std::size_t e = 0; e < result.history.errors.size(); ++e)
            cl::write_csv_row(f, {std::to_string(e + 1),
                                  cl::detail::format_double(result.history.errors[e])});
    }
    return 0;
}

int run_search(const std::string& data, const std::string& test, const std::string& vars,
               const std::vector<std::string>& archs, int epochs, std::uint64_t seed,
               const std::string& threshold_on, const std::string& out) {
    if (archs.empty()) throw cl::Error("give at least one --arch");
    const auto loaded = load_file(data);
    const auto tloaded = load_file(test);
    const auto variables = comma_vars(vars, loaded.dataset);
    const auto train_data = extract(loaded.dataset, variables);
    const auto test_data = extract(tloaded.dataset, variables);

    std::vector<std::vector<int>> space;
    for (const auto& a : archs) space.push_back(parse_arch(a));

    cl::TrainConfig cfg;
    cfg.epochs = epochs;
    cfg.seed = seed;
    const auto sample =
        threshold_on == "train" ? cl::ThresholdSample::train : cl::ThresholdSample::test;
    const auto result = cl::architecture_search(train_data.inputs, train_data.targets,
                                                test_data.inputs, test_data.targets, space, cfg,
                                                sample);
    std::cout << cl::table5_text(result.results, result.best_index);
    if (result.best_index >= 0) {
        const auto& best = result.results[static_cast<std::size_t>(result.best_index)];
        std::cout << "best: " << cl::architecture_string(best.architecture)
                  << "  classification rate "
                  << cl::fmt::percentage(best.classification_rate) << "%\n";
    }
    if (!out.empty()) {
        auto f = open_out(fs::path(out) / "table5.csv");
        cl::table5_csv(f, result.results);
    }
    return 0;
}

int run_compare(const std::string& config_path, const std::string& out_dir, bool verbose) {
    std::ifstream in(config_path, std::ios::binary);
    if (!in) throw cl::Error("cannot open '" + config_path + "'");
    const auto cfg = cl::parse_pipeline_config(in);
    const auto loaded = cl::load_pipeline_data(cfg);
    report_dropped(loaded);
    const auto report = cl::run_pipeline(loaded.dataset, cfg, out_dir);
    if (verbose) {
        std::ifstream rep(fs::path(out_dir) / "report.txt", std::ios::binary);
        std::cout << rep.rdbuf();
    } else {
        std::cout << "selected variables:";
        for (const auto& v : report.selected_variables) std::cout << ' ' << v;
        std::cout << '\n';
        std::cout << "discriminant analysis (base sample): "
                  << cl::fmt::percentage(report.lda_rate) << "%\n";
        std::cout << "neural network (test sample):        "
                  << cl::fmt::percentage(report.nn_rate) << "%\n";
        std::cout << "outputs written to " << out_dir << '\n';
    }
    return 0;
}

int run_synth(const std::string& out, long n0, long n1, int dim, double sep, int planted,
              std::uint64_t seed, const std::string& years_str) {
    if (planted < 1 || planted > dim) throw cl::Error("--planted must lie in 1..dim");
    auto spec = cl::planted_spec(n0, n1, dim, sep, planted - 1, seed);
    auto ds = cl::generate_synthetic(spec);
    std::vector<int> years;
    for (const auto& y : cl::detail::split_list(years_str, ','))
        years.push_back(cl::detail::parse_int_value(y, "years"));
    if (years.empty()) throw cl::Error("--years must name at least one year");
    cl::assign_years_cyclic(ds, years);
    if (out.empty()) {
        cl::save_dataset(std::cout, ds);
    } else {
        auto f = open_out(out);
        cl::save_dataset(f, ds);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"creditlab — discriminant analysis vs neural network credit-risk laboratory"};
    app.require_subcommand(1);

    std::string data, test, vars, out, tables, model_path, score_path, config_path, curve;
    std::string arch_str, priors = "proportional", mse_conv = "mean", threshold_on = "test";
    std::string years = "2005,2006,2007";
    std::vector<std::string> archs;
    double f_enter = 3.84, f_remove = 2.71, sep = 4.0;
    int epochs = 500, dim = 10, planted = 1;
    long n0 = 50, n1 = 50;
    std::uint64_t seed = 1;
    bool verbose = false, strict = false, do_classify = false;

    auto* ingest = app.add_subcommand("ingest", "validate a dataset CSV and print a summary");
    ingest->add_option("--data", data, "dataset CSV")->required();

    auto* ratios = app.add_subcommand("ratios", "compute Table 1 ratios from statement columns");
    ratios->add_option("--data", data, "statement CSV")->required();
    ratios->add_option("--out", out, "output ratio CSV (default: stdout)");
    ratios->add_flag("--strict", strict, "fail if any record has a zero denominator");

    auto* select = app.add_subcommand("select", "stepwise variable selection (Wilks' lambda)");
    select->add_option("--data", data, "dataset CSV")->required();
    select->add_option("--vars", vars, "candidate variables (comma separated; default: all)");
    select->add_option("--f-enter", f_enter, "F-to-enter threshold");
    select->add_option("--f-remove", f_remove, "F-to-remove threshold");
    select->add_option("--out", out, "write the trace as CSV");

    auto* lda = app.add_subcommand("lda", "fit a discriminant function, or score with --model");
    lda->add_option("--data", data, "dataset CSV (fit mode)");
    lda->add_option("--vars", vars, "variables (comma separated; default: all)");
    lda->add_option("--priors", priors, "proportional|equal")
        ->check(CLI::IsMember({"proportional", "equal"}));
    lda->add_option("--out", out, "write the fitted model");
    lda->add_option("--tables", tables, "directory for table2/3/4 CSVs");
    lda->add_option("--model", model_path, "model file (score mode)");
    lda->add_option("--score", score_path, "CSV of observations to score");
    lda->add_flag("--classify", do_classify, "also print the assigned class");

    auto* mlp = app.add_subcommand("mlp", "train one multilayer perceptron with Rprop");
    mlp->add_option("--data", data, "training dataset CSV")->required();
    mlp->add_option("--test", test, "test dataset CSV");
    mlp->add_option("--vars", vars, "input variables (default: all)");
    mlp->add_option("--arch", arch_str, "layer sizes, e.g. \"9 6 8 1\"")->required();
    mlp->add_option("--epochs", epochs, "training epochs");
    mlp->add_option("--seed", seed, "initialization seed");
    mlp->add_option("--mse", mse_conv, "reported convention: mean|half_sum")
        ->check(CLI::IsMember({"mean", "half_sum"}));
    mlp->add_option("--out", out, "write the trained network");
    mlp->add_option("--curve", curve, "write the learning curve as CSV");
    mlp->add_flag("--verbose", verbose, "print per-epoch training error");

    auto* search = app.add_subcommand("search", "architecture grid search");
    search->add_option("--data", data, "training dataset CSV")->required();
    search->add_option("--test", test, "test dataset CSV")->required();
    search->add_option("--vars", vars, "input variables (default: all)");
    search->add_option("--arch", archs, "one architecture per flag, e.g. --arch \"9 6 8 1\"");
    search->add_option("--epochs", epochs, "training epochs");
    search->add_option("--seed", seed, "search seed");
    search->add_option("--threshold-on", threshold_on, "median sample: test|train")
        ->check(CLI::IsMember({"test", "train"}));
    search->add_option("--out", out, "directory for table5.csv");

    auto* compare = app.add_subcommand("compare", "full pipeline from a config file");
    compare->add_option("--config", config_path, "pipeline config")->required();
    compare->add_option("--out", out, "output directory")->required();
    compare->add_flag("--verbose", verbose, "print the full report");

    auto* synth = app.add_subcommand("synth", "generate a two-Gaussian synthetic dataset");
    synth->add_option("--out", out, "output CSV (default: stdout)");
    synth->add_option("--n0", n0, "class-0 record count");
    synth->add_option("--n1", n1, "class-1 record count");
    synth->add_option("--dim", dim, "variable count");
    synth->add_option("--sep", sep, "mean separation along the planted axis, in pooled SDs");
    synth->add_option("--planted", planted, "planted informative axis (1-based)");
    synth->add_option("--seed", seed, "generator seed");
    synth->add_option("--years", years, "years assigned cyclically, comma separated");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n\n";
        const auto parsed = app.get_subcommands();
        std::cerr << (parsed.empty() ? app.help() : parsed.front()->help());
        return 2;
    }

    try {
        if (*ingest) return run_ingest(data);
        if (*ratios) return run_ratios(data, out, strict);
        if (*select) return run_select(data, vars, f_enter, f_remove, out);
        if (*lda) {
            if (!model_path.empty() || !score_path.empty()) {
                if (model_path.empty() || score_path.empty())
                    throw cl::Error("score mode needs both --model and --score");
                return run_lda_score(model_path, score_path, do_classify);
            }
            if (data.empty()) throw cl::Error("fit mode needs --data");
            return run_lda_fit(data, vars, priors, out, tables);
        }
        if (*mlp)
            return run_mlp(data, test, vars, arch_str, epochs, seed, mse_conv, out, curve, verbose);
        if (*search)
            return run_search(data, test, vars, archs, epochs, seed, threshold_on, out);
        if (*compare) return run_compare(config_path, out, verbose);
        if (*synth) return run_synth(out, n0, n1, dim, sep, planted, seed, years);
    } catch (const cl::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
