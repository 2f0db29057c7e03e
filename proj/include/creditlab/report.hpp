#pragma once

#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "creditlab/csv.hpp"
#include "creditlab/discriminant.hpp"
#include "creditlab/neural.hpp"

namespace creditlab {

// Display rounding used by every report emitter: Wilks' lambda 3 decimals,
// F 2, coefficients 3, percentages 3, MSE 5.
namespace fmt {

inline std::string fixed(double v, int decimals) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
    std::string s = buf;
    // values that round to zero print without a sign
    if (s.find_first_not_of("-0.") == std::string::npos && s[0] == '-') s.erase(0, 1);
    return s;
}

inline std::string lambda(double v) { return fixed(v, 3); }
inline std::string fstat(double v) { return fixed(v, 2); }
inline std::string coefficient(double v) { return fixed(v, 3); }
inline std::string percentage(double rate) { return fixed(100.0 * rate, 3); }
inline std::string mse_value(double v) { return fixed(v, 5); }

}  // namespace fmt

namespace detail {

// Left-aligned first column, right-aligned rest.
inline std::string align_table(const std::vector<std::vector<std::string>>& rows) {
    std::vector<std::size_t> widths;
    for (const auto& row : rows) {
        if (widths.size() < row.size()) widths.resize(row.size(), 0);
        for (std::size_t c = 0; c < row.size(); ++c)
            widths[c] = std::max(widths[c], row[c].size());
    }
    std::string out;
    for (const auto& row : rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) out += "  ";
            const std::string& cell = row[c];
            if (c == 0) {
                out += cell;
                out.append(widths[c] - cell.size(), ' ');
            } else {
                out.append(widths[c] - cell.size(), ' ');
                out += cell;
            }
        }
        // no trailing spaces
        while (!out.empty() && out.back() == ' ') out.pop_back();
        out += '\n';
    }
    return out;
}

}  // namespace detail

// --- table 2: group-mean equality tests ---

inline void table2_csv(std::ostream& out, const std::vector<GroupMeanTest>& tests) {
    write_csv_row(out, {"variable", "wilks_lambda", "f", "ddl1", "ddl2", "significance"});
    for (const auto& t : tests)
        write_csv_row(out, {t.variable, fmt::lambda(t.lambda), fmt::fstat(t.f_stat),
                            std::to_string(t.ddl1), std::to_string(t.ddl2),
                            fmt::lambda(t.p_value)});
}

inline std::string table2_text(const std::vector<GroupMeanTest>& tests) {
    std::vector<std::vector<std::string>> rows;
    rows.push_back({"variable", "wilks lambda", "F", "ddl1", "ddl2", "significance"});
    for (const auto& t : tests)
        rows.push_back({t.variable, fmt::lambda(t.lambda), fmt::fstat(t.f_stat),
                        std::to_string(t.ddl1), std::to_string(t.ddl2), fmt::lambda(t.p_value)});
    return detail::align_table(rows);
}

// --- table 3: canonical discriminant coefficients ---

inline void table3_csv(std::ostream& out, const LdaModel& model) {
    write_csv_row(out, {"variable", "coefficient"});
    for (std::size_t i = 0; i < model.variables.size(); ++i)
        write_csv_row(out, {model.variables[i], fmt::coefficient(model.beta[i])});
    write_csv_row(out, {"(constant)", fmt::coefficient(model.alpha)});
}

inline std::string table3_text(const LdaModel& model) {
    std::vector<std::vector<std::string>> rows;
    rows.push_back({"variable", "coefficient"});
    for (std::size_t i = 0; i < model.variables.size(); ++i)
        rows.push_back({model.variables[i], fmt::coefficient(model.beta[i])});
    rows.push_back({"(constant)", fmt::coefficient(model.alpha)});
    return detail::align_table(rows);
}

// --- table 4: classification results ---

inline void table4_csv(std::ostream& out, const ConfusionTable& t) {
    write_csv_row(out, {"actual", "predicted_0", "predicted_1", "total"});
    write_csv_row(out, {"0", std::to_string(t.n00), std::to_string(t.n01),
                        std::to_string(t.actual0())});
    write_csv_row(out, {"1", std::to_string(t.n10), std::to_string(t.n11),
                        std::to_string(t.actual1())});
    write_csv_row(out, {"pct_0", fmt::percentage(t.rate0()),
                        fmt::percentage(t.actual0() ? 1.0 - t.rate0() : 0.0), "100"});
    write_csv_row(out, {"pct_1", fmt::percentage(t.actual1() ? 1.0 - t.rate1() : 0.0),
                        fmt::percentage(t.rate1()), "100"});
    write_csv_row(out, {"overall_pct", fmt::percentage(t.overall_rate()), "", ""});
}

inline std::string table4_text(const ConfusionTable& t) {
    std::vector<std::vector<std::string>> rows;
    rows.push_back({"actual", "predicted 0", "predicted 1", "total"});
    rows.push_back({"0", std::to_string(t.n00), std::to_string(t.n01),
                    std::to_string(t.actual0())});
    rows.push_back({"1", std::to_string(t.n10), std::to_string(t.n11),
                    std::to_string(t.actual1())});
    rows.push_back({"% 0", fmt::percentage(t.rate0()),
                    fmt::percentage(t.actual0() ? 1.0 - t.rate0() : 0.0), "100"});
    rows.push_back({"% 1", fmt::percentage(t.actual1() ? 1.0 - t.rate1() : 0.0),
                    fmt::percentage(t.rate1()), "100"});
    std::string out = detail::align_table(rows);
    out += fmt::percentage(t.overall_rate()) + "% of observations correctly classified\n";
    return out;
}

// --- table 5: architecture search summary ---

inline std::string architecture_string(const std::vector<int>& arch) {
    std::string s = "[";
    for (std::size_t i = 0; i < arch.size(); ++i) {
        if (i) s += ' ';
        s += std::to_string(arch[i]);
    }
    s += ']';
    return s;
}

inline void table5_csv(std::ostream& out, const std::vector<EvalResult>& results) {
    write_csv_row(out, {"architecture", "total_layers", "hidden_layers", "train_mse", "test_mse"});
    for (const auto& r : results) {
        const auto layers = r.architecture.size();
        write_csv_row(out, {architecture_string(r.architecture), std::to_string(layers),
                            std::to_string(layers - 2),
                            r.status == TrainStatus::completed ? fmt::mse_value(r.train_mse) : "failed",
                            r.status == TrainStatus::completed ? fmt::mse_value(r.test_mse) : "failed"});
    }
}

inline std::string table5_text(const std::vector<EvalResult>& results, int best_index) {
    std::vector<std::vector<std::string>> rows;
    rows.push_back({"architecture", "total layers", "hidden layers", "train MSE", "test MSE", ""});
    for (std::size_t i = 0; i < results.size(); ++i) {
        const auto& r = results[i];
        const auto layers = r.architecture.size();
        rows.push_back({architecture_string(r.architecture), std::to_string(layers),
                        std::to_string(layers - 2),
                        r.status == TrainStatus::completed ? fmt::mse_value(r.train_mse) : "failed",
                        r.status == TrainStatus::completed ? fmt::mse_value(r.test_mse) : "failed",
                        static_cast<int>(i) == best_index ? "<- best" : ""});
    }
    return detail::align_table(rows);
}

// --- table 6: per-firm classification of the best network ---

struct PerFirmRow {
    int index = 0;  // 1-based position in the evaluated sample
    int desired = 0;
    double output = 0.0;
    int assigned = 0;
};

inline void table6_csv(std::ostream& out, const std::vector<PerFirmRow>& rows) {
    write_csv_row(out, {"index", "desired", "output", "assigned"});
    for (const auto& r : rows)
        write_csv_row(out, {std::to_string(r.index), std::to_string(r.desired),
                            fmt::coefficient(r.output), std::to_string(r.assigned)});
}

inline std::string table6_text(const std::vector<PerFirmRow>& rows) {
    std::vector<std::vector<std::string>> t;
    t.push_back({"index", "desired", "output", "assigned", ""});
    for (const auto& r : rows)
        t.push_back({std::to_string(r.index), std::to_string(r.desired), fmt::coefficient(r.output),
                     std::to_string(r.assigned), r.desired == r.assigned ? "" : "misclassified"});
    return detail::align_table(t);
}

}  // namespace creditlab
