#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "creditlab/dataset.hpp"
#include "creditlab/errors.hpp"
#include "creditlab/stats.hpp"

namespace creditlab {

namespace detail {

// Group moments and scatter matrices over a chosen variable subset.
struct GroupScatter {
    Eigen::VectorXd mean0, mean1, grand_mean;
    Eigen::MatrixXd within;   // pooled within-group SSCP
    Eigen::MatrixXd between;  // between-group SSCP
    long n0 = 0, n1 = 0;
    long n() const { return n0 + n1; }
};

inline GroupScatter group_scatter(const Dataset& ds, const std::vector<std::size_t>& cols) {
    const auto k = static_cast<Eigen::Index>(cols.size());
    GroupScatter s;
    s.mean0 = Eigen::VectorXd::Zero(k);
    s.mean1 = Eigen::VectorXd::Zero(k);
    for (const auto& rec : ds.records) {
        Eigen::VectorXd x(k);
        for (Eigen::Index j = 0; j < k; ++j) x[j] = rec.values[cols[static_cast<std::size_t>(j)]];
        if (rec.label == 1) {
            s.mean1 += x;
            ++s.n1;
        } else {
            s.mean0 += x;
            ++s.n0;
        }
    }
    if (s.n0 == 0) throw MissingClass(0);
    if (s.n1 == 0) throw MissingClass(1);
    s.mean0 /= static_cast<double>(s.n0);
    s.mean1 /= static_cast<double>(s.n1);
    s.grand_mean = (static_cast<double>(s.n0) * s.mean0 + static_cast<double>(s.n1) * s.mean1) /
                   static_cast<double>(s.n());

    s.within = Eigen::MatrixXd::Zero(k, k);
    for (const auto& rec : ds.records) {
        Eigen::VectorXd x(k);
        for (Eigen::Index j = 0; j < k; ++j) x[j] = rec.values[cols[static_cast<std::size_t>(j)]];
        const Eigen::VectorXd d = x - (rec.label == 1 ? s.mean1 : s.mean0);
        s.within.noalias() += d * d.transpose();
    }
    const Eigen::VectorXd d0 = s.mean0 - s.grand_mean;
    const Eigen::VectorXd d1 = s.mean1 - s.grand_mean;
    s.between = static_cast<double>(s.n0) * d0 * d0.transpose() +
                static_cast<double>(s.n1) * d1 * d1.transpose();
    return s;
}

}  // namespace detail

// One-variable test of equal group means (one row of the table2 report).
struct GroupMeanTest {
    std::string variable;
    double lambda = 1.0;  // Wilks' lambda, in (0, 1]
    double f_stat = 0.0;
    int ddl1 = 1;
    int ddl2 = 0;
    double p_value = 1.0;
};

// One-way ANOVA of `variable` across the two classes: F = SSB / (SSW/(N-2)),
// lambda = SSW/(SSW+SSB), p from the upper F(1, N-2) tail.
inline GroupMeanTest group_mean_test(const Dataset& ds, const std::string& variable) {
    const std::vector<std::size_t> cols = {ds.column_index(variable)};
    const auto s = detail::group_scatter(ds, cols);
    const double ssw = s.within(0, 0);
    const double ssb = s.between(0, 0);
    if (ssw == 0.0) throw DegenerateVariable(variable);

    GroupMeanTest t;
    t.variable = variable;
    t.ddl1 = 1;
    t.ddl2 = static_cast<int>(s.n() - 2);
    t.f_stat = ssb / (ssw / static_cast<double>(t.ddl2));
    t.lambda = ssw / (ssw + ssb);
    t.p_value = f_upper_tail(t.f_stat, t.ddl1, t.ddl2);
    return t;
}

enum class Priors { proportional, equal };

// Classification geometry on top of the scoring function. Kept separate so a
// published coefficient table can be used for scoring even when the source
// never reported centroids or priors.
struct LdaGeometry {
    double centroid0 = 0, centroid1 = 0;  // mean score per class, centroid1 > centroid0
    double prior0 = 0.5, prior1 = 0.5;
    double cutoff = 0;
};

// Two-group canonical discriminant function Z = alpha + sum_i beta_i x_i.
struct LdaModel {
    std::vector<std::string> variables;
    double alpha = 0;
    std::vector<double> beta;
    std::optional<LdaGeometry> geometry;
};

// Fits the canonical discriminant: direction proportional to W^-1 (mu1 - mu0)
// with W the pooled within-group covariance, scaled to unit pooled
// within-group score variance, constant fixed by a zero weighted grand mean,
// sign fixed by centroid1 > centroid0.
inline LdaModel fit_lda(const Dataset& ds, const std::vector<std::string>& variables,
                        Priors priors = Priors::proportional) {
    const auto cols = ds.column_indices(variables);
    const auto s = detail::group_scatter(ds, cols);
    const long n = s.n();
    if (n <= 2) throw Error("need more than two records to fit a discriminant");

    const Eigen::MatrixXd w_cov = s.within / static_cast<double>(n - 2);
    const Eigen::VectorXd diff = s.mean1 - s.mean0;
    if (diff.isZero(0.0)) throw NoSeparation();

    Eigen::LLT<Eigen::MatrixXd> llt(w_cov);
    if (llt.info() != Eigen::Success) throw SingularWithinCovariance();
    const Eigen::VectorXd direction = llt.solve(diff);
    const double score_var = direction.dot(w_cov * direction);  // = diff' W^-1 diff
    if (!(score_var > 0.0) || !std::isfinite(score_var)) throw SingularWithinCovariance();

    const Eigen::VectorXd beta = direction / std::sqrt(score_var);

    LdaModel m;
    m.variables = variables;
    m.beta.assign(beta.data(), beta.data() + beta.size());
    m.alpha = -beta.dot(s.grand_mean);

    LdaGeometry g;
    g.centroid0 = m.alpha + beta.dot(s.mean0);
    g.centroid1 = m.alpha + beta.dot(s.mean1);
    if (priors == Priors::proportional) {
        g.prior0 = static_cast<double>(s.n0) / static_cast<double>(n);
        g.prior1 = static_cast<double>(s.n1) / static_cast<double>(n);
    }
    g.cutoff = 0.5 * (g.centroid0 + g.centroid1) -
               std::log(g.prior1 / g.prior0) / (g.centroid1 - g.centroid0);
    m.geometry = g;
    return m;
}

inline double score(const LdaModel& m, std::span<const double> x) {
    if (x.size() != m.beta.size()) throw DimensionMismatch(m.beta.size(), x.size());
    double z = m.alpha;
    for (std::size_t i = 0; i < x.size(); ++i) z += m.beta[i] * x[i];
    return z;
}

// Class 1 iff the score reaches the cutoff; a score exactly at the cutoff is
// class 1.
inline int classify(const LdaModel& m, std::span<const double> x) {
    if (!m.geometry) throw Error("model has no classification geometry (scoring-only model)");
    return score(m, x) >= m.geometry->cutoff ? 1 : 0;
}

// Actual-by-predicted counts; f0/f1 in n01 read "actual 0, predicted 1".
struct ConfusionTable {
    long n00 = 0, n01 = 0, n10 = 0, n11 = 0;

    long total() const { return n00 + n01 + n10 + n11; }
    long actual0() const { return n00 + n01; }
    long actual1() const { return n10 + n11; }
    double rate0() const { return actual0() ? static_cast<double>(n00) / actual0() : 0.0; }
    double rate1() const { return actual1() ? static_cast<double>(n11) / actual1() : 0.0; }
    double overall_rate() const {
        return total() ? static_cast<double>(n00 + n11) / total() : 0.0;
    }
};

inline ConfusionTable classification_table(const LdaModel& m, const Dataset& ds) {
    const auto cols = ds.column_indices(m.variables);
    ConfusionTable t;
    std::vector<double> x(cols.size());
    for (const auto& rec : ds.records) {
        for (std::size_t j = 0; j < cols.size(); ++j) x[j] = rec.values[cols[j]];
        const int predicted = classify(m, x);
        if (rec.label == 0)
            ++(predicted == 0 ? t.n00 : t.n01);
        else
            ++(predicted == 0 ? t.n10 : t.n11);
    }
    return t;
}

// --- model serialization (versioned plain text) ---

inline void save_lda_model(std::ostream& out, const LdaModel& m) {
    out << "ldamodel v1\n";
    out << "variables";
    for (const auto& v : m.variables) out << ' ' << v;
    out << "\nalpha " << detail::format_double(m.alpha) << "\nbeta";
    for (double b : m.beta) out << ' ' << detail::format_double(b);
    out << '\n';
    if (m.geometry) {
        const auto& g = *m.geometry;
        out << "centroids " << detail::format_double(g.centroid0) << ' '
            << detail::format_double(g.centroid1) << '\n';
        out << "priors " << detail::format_double(g.prior0) << ' '
            << detail::format_double(g.prior1) << '\n';
        out << "cutoff " << detail::format_double(g.cutoff) << '\n';
    }
}

inline LdaModel load_lda_model(std::istream& in) {
    std::string magic, version;
    in >> magic >> version;
    if (!in || magic != "ldamodel" || version != "v1")
        throw ParseError(1, "expected 'ldamodel v1' header");

    LdaModel m;
    LdaGeometry g;
    bool saw_alpha = false, saw_beta = false, saw_geometry = false;
    std::string key;
    while (in >> key) {
        if (key == "variables") {
            std::string rest;
            std::getline(in, rest);
            std::istringstream vs(rest);
            std::string v;
            while (vs >> v) m.variables.push_back(v);
        } else if (key == "alpha") {
            if (!(in >> m.alpha)) throw ParseError(0, "alpha");
            saw_alpha = true;
        } else if (key == "beta") {
            std::string rest;
            std::getline(in, rest);
            std::istringstream vs(rest);
            double b;
            while (vs >> b) m.beta.push_back(b);
            saw_beta = true;
        } else if (key == "centroids") {
            if (!(in >> g.centroid0 >> g.centroid1)) throw ParseError(0, "centroids");
            saw_geometry = true;
        } else if (key == "priors") {
            if (!(in >> g.prior0 >> g.prior1)) throw ParseError(0, "priors");
            saw_geometry = true;
        } else if (key == "cutoff") {
            if (!(in >> g.cutoff)) throw ParseError(0, "cutoff");
            saw_geometry = true;
        } else {
            throw ParseError(0, "unknown key '" + key + "'");
        }
    }
    if (m.variables.empty() || !saw_alpha || !saw_beta)
        throw ParseError(0, "model requires variables, alpha and beta");
    if (m.beta.size() != m.variables.size())
        throw ParseError(0, "beta length does not match variable count");
    if (saw_geometry) {
        if (!(g.centroid1 > g.centroid0)) throw ParseError(0, "centroids must satisfy c1 > c0");
        m.geometry = g;
    }
    return m;
}

}  // namespace creditlab
