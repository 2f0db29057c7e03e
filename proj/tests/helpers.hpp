#pragma once

#include <atomic>
#include <filesystem>
#include <fstream>
#include <string>
#include <unistd.h>
#include <vector>

#include "creditlab/dataset.hpp"

namespace testutil {

inline creditlab::FirmRecord record(std::string id, int year, int label,
                                    std::vector<double> values) {
    creditlab::FirmRecord r;
    r.firm_id = std::move(id);
    r.year = year;
    r.label = label;
    r.values = std::move(values);
    return r;
}

// 1-D dataset from two per-class value lists.
inline creditlab::Dataset dataset_1d(const std::vector<double>& class0,
                                     const std::vector<double>& class1,
                                     const std::string& var = "X") {
    creditlab::Dataset ds;
    ds.variable_names = {var};
    int i = 0;
    for (double v : class0) ds.records.push_back(record("a" + std::to_string(i++), 0, 0, {v}));
    for (double v : class1) ds.records.push_back(record("b" + std::to_string(i++), 0, 1, {v}));
    return ds;
}

// Solves A x = b by Gauss-Jordan elimination with partial pivoting. Serves as
// the independent route against the library's Cholesky-based solve.
inline std::vector<double> gauss_jordan_solve(std::vector<std::vector<double>> a,
                                              std::vector<double> b) {
    const std::size_t n = b.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
        std::swap(a[col], a[pivot]);
        std::swap(b[col], b[pivot]);
        const double p = a[col][col];
        for (std::size_t c = 0; c < n; ++c) a[col][c] /= p;
        b[col] /= p;
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col) continue;
            const double factor = a[r][col];
            if (factor == 0.0) continue;
            for (std::size_t c = 0; c < n; ++c) a[r][c] -= factor * a[col][c];
            b[r] -= factor * b[col];
        }
    }
    return b;
}

// Unique scratch directory under the system temp dir, removed on destruction.
class TempDir {
  public:
    explicit TempDir(const std::string& tag) {
        static std::atomic<int> counter{0};
        path_ = std::filesystem::temp_directory_path() /
                ("creditlab-" + tag + "-" + std::to_string(::getpid()) + "-" +
                 std::to_string(counter++));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path file(const std::string& name) const { return path_ / name; }

  private:
    std::filesystem::path path_;
};

// The published per-firm outputs of the study's best network (the replay
// fixture shipped under data/).
struct FixtureOutputs {
    std::vector<int> desired;
    std::vector<double> outputs;
};

inline FixtureOutputs load_fixture_outputs(const std::filesystem::path& data_dir) {
    std::ifstream in(data_dir / "best_network_outputs.csv", std::ios::binary);
    if (!in) throw creditlab::Error("fixture best_network_outputs.csv not found");
    const auto table = creditlab::read_csv(in);
    FixtureOutputs f;
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        f.desired.push_back(static_cast<int>(
            creditlab::detail::parse_long(table.rows[i][1], table.line_of(i), "desired")));
        f.outputs.push_back(
            creditlab::detail::parse_double(table.rows[i][2], table.line_of(i), "output"));
    }
    return f;
}

inline void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace testutil
