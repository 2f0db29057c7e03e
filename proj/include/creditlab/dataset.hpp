#pragma once

#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "creditlab/csv.hpp"
#include "creditlab/errors.hpp"

namespace creditlab {

// Raw accounting line items. All amounts share one currency unit; losses and
// negative working capital are legal values.
struct FinancialStatement {
    double chiffre_affaires = 0;
    double valeur_ajoutee = 0;
    double excedent_brut_exploitation = 0;
    double resultat_exploitation = 0;
    double charges_financieres = 0;
    double resultat_net = 0;
    double fonds_propres_nets = 0;
    double total_bilan = 0;
    double dettes_lmt = 0;
    double capitaux_permanents = 0;
    double cash_flow_net = 0;
    double cash_flow = 0;
    double actifs_immobilises = 0;
    double capitaux_propres = 0;
    double fonds_de_roulement = 0;
    double immobilisations_nettes = 0;
};

inline constexpr std::array<const char*, 16> kStatementFields = {
    "chiffre_affaires", "valeur_ajoutee",      "excedent_brut_exploitation",
    "resultat_exploitation", "charges_financieres", "resultat_net",
    "fonds_propres_nets", "total_bilan",       "dettes_lmt",
    "capitaux_permanents", "cash_flow_net",    "cash_flow",
    "actifs_immobilises", "capitaux_propres",  "fonds_de_roulement",
    "immobilisations_nettes"};

inline constexpr std::array<const char*, 15> kRatioCodes = {
    "R01", "R02", "R03", "R04", "R05", "R06", "R07", "R08",
    "R09", "R10", "R11", "R12", "R13", "R14", "R15"};

// The 15 ratios of the study, indexed 0..14 for codes R01..R15.
struct RatioVector {
    std::array<double, 15> values{};

    double operator[](std::size_t i) const { return values[i]; }
    double& operator[](std::size_t i) { return values[i]; }
};

struct FirmRecord {
    std::string firm_id;
    int year = 0;
    int label = 0;  // 1 = performante, 0 = non performante
    std::vector<double> values;  // aligned with Dataset::variable_names
};

struct Dataset {
    std::vector<std::string> variable_names;
    std::vector<FirmRecord> records;

    std::size_t column_index(const std::string& name) const {
        for (std::size_t i = 0; i < variable_names.size(); ++i)
            if (variable_names[i] == name) return i;
        throw MissingColumn(name);
    }

    std::vector<std::size_t> column_indices(const std::vector<std::string>& names) const {
        std::vector<std::size_t> idx;
        idx.reserve(names.size());
        for (const auto& n : names) idx.push_back(column_index(n));
        return idx;
    }

    long count_label(int label) const {
        long n = 0;
        for (const auto& r : records) n += (r.label == label) ? 1 : 0;
        return n;
    }
};

// Each entry is one Table 1 quotient. Denominators that are exactly zero raise
// DivisionByZero with the ratio code; the caller decides whether to drop the
// record or abort.
inline RatioVector compute_ratios(const FinancialStatement& s) {
    auto quot = [](double num, double den, const char* code) {
        if (den == 0.0) throw DivisionByZero(code);
        return num / den;
    };
    RatioVector r;
    r[0] = quot(s.valeur_ajoutee, s.chiffre_affaires, "R01");
    r[1] = quot(s.excedent_brut_exploitation, s.chiffre_affaires, "R02");
    r[2] = quot(s.resultat_exploitation, s.chiffre_affaires, "R03");
    r[3] = quot(s.charges_financieres, s.chiffre_affaires, "R04");
    r[4] = quot(s.resultat_net, s.chiffre_affaires, "R05");
    r[5] = quot(s.resultat_net, s.fonds_propres_nets, "R06");
    r[6] = quot(s.fonds_propres_nets, s.total_bilan, "R07");
    r[7] = quot(s.dettes_lmt, s.capitaux_permanents, "R08");
    r[8] = quot(s.dettes_lmt, s.cash_flow_net, "R09");
    r[9] = quot(s.resultat_net, s.total_bilan, "R10");
    r[10] = quot(s.actifs_immobilises, s.total_bilan, "R11");
    r[11] = quot(s.capitaux_propres, s.capitaux_permanents, "R12");
    r[12] = quot(s.cash_flow, s.chiffre_affaires, "R13");
    r[13] = quot(s.fonds_de_roulement, s.chiffre_affaires, "R14");
    r[14] = quot(s.capitaux_permanents, s.immobilisations_nettes, "R15");
    return r;
}

namespace detail {

inline double parse_double(const std::string& field, std::size_t line, const std::string& col) {
    double v = 0;
    const char* begin = field.data();
    const char* end = begin + field.size();
    auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc{} || ptr != end || !std::isfinite(v)) throw ParseError(line, col);
    return v;
}

inline long parse_long(const std::string& field, std::size_t line, const std::string& col) {
    long v = 0;
    const char* begin = field.data();
    const char* end = begin + field.size();
    auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc{} || ptr != end) throw ParseError(line, col);
    return v;
}

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline bool is_statement_field(const std::string& name) {
    for (const char* f : kStatementFields)
        if (name == f) return true;
    return false;
}

inline bool is_ratio_code(const std::string& name) {
    for (const char* c : kRatioCodes)
        if (name == c) return true;
    return false;
}

}  // namespace detail

struct LoadResult {
    Dataset dataset;
    // Records excluded because a Table 1 denominator was zero, by physical
    // line number and offending ratio code.
    struct DroppedRow {
        std::size_t line;
        std::string ratio_code;
    };
    std::vector<DroppedRow> dropped;
};

// Loads a firm dataset from CSV. Reserved columns: firm_id (optional), year,
// label. The remaining columns must be either the complete set of statement
// fields (ratios are then computed) or a subset of the ratio codes R01..R15
// (values taken verbatim). Mixing the two kinds is rejected.
inline LoadResult load_dataset(std::istream& in) {
    const CsvTable table = read_csv(in);

    int firm_col = -1, year_col = -1, label_col = -1;
    std::vector<std::pair<std::string, std::size_t>> value_cols;  // name -> column
    bool has_statement = false, has_ratio = false;
    for (std::size_t c = 0; c < table.header.size(); ++c) {
        const std::string& name = table.header[c];
        if (name == "firm_id") {
            firm_col = static_cast<int>(c);
        } else if (name == "year") {
            year_col = static_cast<int>(c);
        } else if (name == "label") {
            label_col = static_cast<int>(c);
        } else if (detail::is_statement_field(name)) {
            has_statement = true;
            value_cols.emplace_back(name, c);
        } else if (detail::is_ratio_code(name)) {
            has_ratio = true;
            value_cols.emplace_back(name, c);
        } else {
            throw InvalidSchema("unknown column '" + name + "'");
        }
    }
    if (year_col < 0) throw MissingColumn("year");
    if (label_col < 0) throw MissingColumn("label");
    if (has_statement && has_ratio)
        throw InvalidSchema("dataset mixes statement columns and ratio columns");
    if (value_cols.empty()) throw InvalidSchema("no statement or ratio columns present");
    if (has_statement && value_cols.size() != kStatementFields.size()) {
        for (const char* f : kStatementFields) {
            bool found = false;
            for (const auto& [name, c] : value_cols) found |= (name == f);
            if (!found) throw MissingColumn(f);
        }
    }

    LoadResult result;
    if (has_statement) {
        result.dataset.variable_names.assign(kRatioCodes.begin(), kRatioCodes.end());
    } else {
        for (const auto& [name, c] : value_cols) result.dataset.variable_names.push_back(name);
    }

    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const auto& row = table.rows[i];
        const std::size_t line = table.line_of(i);
        FirmRecord rec;
        rec.firm_id = firm_col >= 0 ? row[static_cast<std::size_t>(firm_col)]
                                    : "row" + std::to_string(line);
        rec.year = static_cast<int>(
            detail::parse_long(row[static_cast<std::size_t>(year_col)], line, "year"));
        const long label = detail::parse_long(row[static_cast<std::size_t>(label_col)], line, "label");
        if (label != 0 && label != 1) throw InvalidLabel(line);
        rec.label = static_cast<int>(label);

        if (has_statement) {
            FinancialStatement s;
            const std::array<double*, 16> slots = {
                &s.chiffre_affaires, &s.valeur_ajoutee, &s.excedent_brut_exploitation,
                &s.resultat_exploitation, &s.charges_financieres, &s.resultat_net,
                &s.fonds_propres_nets, &s.total_bilan, &s.dettes_lmt,
                &s.capitaux_permanents, &s.cash_flow_net, &s.cash_flow,
                &s.actifs_immobilises, &s.capitaux_propres, &s.fonds_de_roulement,
                &s.immobilisations_nettes};
            for (const auto& [name, c] : value_cols) {
                for (std::size_t f = 0; f < kStatementFields.size(); ++f)
                    if (name == kStatementFields[f])
                        *slots[f] = detail::parse_double(row[c], line, name);
            }
            try {
                const RatioVector r = compute_ratios(s);
                rec.values.assign(r.values.begin(), r.values.end());
            } catch (const DivisionByZero& e) {
                result.dropped.push_back({line, e.ratio_code});
                continue;
            }
        } else {
            for (const auto& [name, c] : value_cols)
                rec.values.push_back(detail::parse_double(row[c], line, name));
        }
        result.dataset.records.push_back(std::move(rec));
    }
    return result;
}

// Writes a dataset back out; 17 significant digits so reloading reproduces
// every value bit for bit.
inline void save_dataset(std::ostream& out, const Dataset& ds) {
    std::vector<std::string> header = {"firm_id", "year", "label"};
    header.insert(header.end(), ds.variable_names.begin(), ds.variable_names.end());
    write_csv_row(out, header);
    for (const auto& rec : ds.records) {
        std::vector<std::string> row = {rec.firm_id, std::to_string(rec.year),
                                        std::to_string(rec.label)};
        for (double v : rec.values) row.push_back(detail::format_double(v));
        write_csv_row(out, row);
    }
}

// Partitions records into (base, test) by year. Every record must fall in
// base_years or be the test year; nothing is lost or duplicated.
inline std::pair<Dataset, Dataset> split_by_period(const Dataset& ds,
                                                   const std::set<int>& base_years,
                                                   int test_year) {
    Dataset base, test;
    base.variable_names = ds.variable_names;
    test.variable_names = ds.variable_names;
    for (const auto& rec : ds.records) {
        if (base_years.count(rec.year)) {
            base.records.push_back(rec);
        } else if (rec.year == test_year) {
            test.records.push_back(rec);
        } else {
            throw YearOutsideSplit(rec.firm_id, rec.year);
        }
    }
    return {std::move(base), std::move(test)};
}

}  // namespace creditlab
