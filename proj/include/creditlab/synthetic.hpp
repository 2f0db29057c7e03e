#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "creditlab/dataset.hpp"
#include "creditlab/errors.hpp"
#include "creditlab/rng.hpp"

namespace creditlab {

// Two Gaussian components with a shared covariance; the test-data oracle for
// the whole pipeline.
struct SyntheticSpec {
    long n0 = 0, n1 = 0;
    int dimension = 0;
    std::vector<double> mean0, mean1;
    std::vector<std::vector<double>> covariance;  // symmetric positive definite
    std::uint64_t seed = 0;
};

// Convenience constructor: identity covariance, class means separated by
// `separation` pooled standard deviations along one planted axis (0-based).
inline SyntheticSpec planted_spec(long n0, long n1, int dimension, double separation,
                                  int planted_axis, std::uint64_t seed) {
    SyntheticSpec spec;
    spec.n0 = n0;
    spec.n1 = n1;
    spec.dimension = dimension;
    spec.seed = seed;
    spec.mean0.assign(static_cast<std::size_t>(dimension), 0.0);
    spec.mean1.assign(static_cast<std::size_t>(dimension), 0.0);
    spec.mean1[static_cast<std::size_t>(planted_axis)] = separation;
    spec.covariance.assign(static_cast<std::size_t>(dimension),
                           std::vector<double>(static_cast<std::size_t>(dimension), 0.0));
    for (int i = 0; i < dimension; ++i)
        spec.covariance[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = 1.0;
    return spec;
}

inline std::string synthetic_variable_name(int axis) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "R%02d", axis + 1);
    return buf;
}

// Draws n0 class-0 then n1 class-1 records; deterministic per seed. Years are
// all zero; use assign_years_cyclic to spread them for a period split.
inline Dataset generate_synthetic(const SyntheticSpec& spec) {
    if (spec.n0 < 2 || spec.n1 < 2) throw Error("synthetic spec requires n0, n1 >= 2");
    if (spec.dimension < 1) throw Error("synthetic spec requires dimension >= 1");
    const auto k = static_cast<Eigen::Index>(spec.dimension);
    if (spec.mean0.size() != static_cast<std::size_t>(k) ||
        spec.mean1.size() != static_cast<std::size_t>(k) ||
        spec.covariance.size() != static_cast<std::size_t>(k))
        throw Error("synthetic spec dimensions are inconsistent");

    Eigen::MatrixXd cov(k, k);
    for (Eigen::Index i = 0; i < k; ++i) {
        const auto& row = spec.covariance[static_cast<std::size_t>(i)];
        if (row.size() != static_cast<std::size_t>(k))
            throw Error("synthetic spec dimensions are inconsistent");
        for (Eigen::Index j = 0; j < k; ++j) cov(i, j) = row[static_cast<std::size_t>(j)];
    }
    if (!cov.isApprox(cov.transpose(), 1e-12)) throw NotPositiveDefinite();
    Eigen::LLT<Eigen::MatrixXd> llt(cov);
    if (llt.info() != Eigen::Success) throw NotPositiveDefinite();
    const Eigen::MatrixXd chol = llt.matrixL();

    Dataset ds;
    for (int a = 0; a < spec.dimension; ++a)
        ds.variable_names.push_back(synthetic_variable_name(a));

    SplitMix64 rng(spec.seed);
    auto draw = [&](int label, long count, const std::vector<double>& mean, const char* prefix) {
        for (long i = 0; i < count; ++i) {
            Eigen::VectorXd z(k);
            for (Eigen::Index j = 0; j < k; ++j) z[j] = rng.gaussian();
            const Eigen::VectorXd x = chol * z;
            FirmRecord rec;
            char buf[32];
            std::snprintf(buf, sizeof(buf), "%s%04ld", prefix, i + 1);
            rec.firm_id = buf;
            rec.label = label;
            rec.values.resize(static_cast<std::size_t>(k));
            for (Eigen::Index j = 0; j < k; ++j)
                rec.values[static_cast<std::size_t>(j)] = mean[static_cast<std::size_t>(j)] + x[j];
            ds.records.push_back(std::move(rec));
        }
    };
    draw(0, spec.n0, spec.mean0, "N");
    draw(1, spec.n1, spec.mean1, "P");
    return ds;
}

// Assigns years cyclically within each class block so every (class, year)
// cell gets an even share of records.
inline void assign_years_cyclic(Dataset& ds, const std::vector<int>& years) {
    if (years.empty()) throw Error("assign_years_cyclic requires at least one year");
    std::size_t i0 = 0, i1 = 0;
    for (auto& rec : ds.records) {
        std::size_t& i = rec.label == 0 ? i0 : i1;
        rec.year = years[i % years.size()];
        ++i;
    }
}

}  // namespace creditlab
