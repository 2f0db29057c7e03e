#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "creditlab/discriminant.hpp"

namespace creditlab {

enum class StepAction { enter, remove };

struct StepwiseStep {
    int step = 0;  // 1-based action index
    StepAction action = StepAction::enter;
    std::string variable;
    double wilks_after = 1.0;
    double f_change = 0.0;  // partial F-to-enter or F-to-remove at action time
};

struct StepwiseTrace {
    std::vector<StepwiseStep> steps;
    std::vector<std::string> selected;  // in entry order, removals applied
};

namespace detail {

// Wilks' lambda of a variable subset: det(W_S) / det(T_S); lambda of the
// empty set is 1.
class WilksEvaluator {
  public:
    WilksEvaluator(Eigen::MatrixXd within, Eigen::MatrixXd total)
        : within_(std::move(within)), total_(std::move(total)) {}

    double lambda(const std::vector<int>& subset) const {
        if (subset.empty()) return 1.0;
        const double dw = sub_det(within_, subset);
        const double dt = sub_det(total_, subset);
        if (!(dt > 0.0)) return std::numeric_limits<double>::quiet_NaN();
        if (dw <= 0.0) return 0.0;
        return dw / dt;
    }

    // Fraction of the candidate's within-group variance unexplained by the
    // already-selected set; near-zero means the candidate is (numerically)
    // linearly dependent on it.
    double tolerance(const std::vector<int>& selected, int candidate) const {
        const double wvv = within_(candidate, candidate);
        if (wvv <= 0.0) return 0.0;
        if (selected.empty()) return 1.0;
        std::vector<int> joint = selected;
        joint.push_back(candidate);
        const double d_joint = sub_det(within_, joint);
        const double d_sel = sub_det(within_, selected);
        if (!(d_sel > 0.0)) return 0.0;
        return d_joint / (d_sel * wvv);
    }

  private:
    static double sub_det(const Eigen::MatrixXd& m, const std::vector<int>& idx) {
        const auto k = static_cast<Eigen::Index>(idx.size());
        Eigen::MatrixXd sub(k, k);
        for (Eigen::Index i = 0; i < k; ++i)
            for (Eigen::Index j = 0; j < k; ++j)
                sub(i, j) = m(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
        return sub.determinant();
    }

    Eigen::MatrixXd within_, total_;
};

}  // namespace detail

// Forward stepwise discriminant selection minimizing Wilks' lambda, with
// backward removal. At each step the candidate with the largest partial
// F-to-enter joins if it exceeds f_enter; afterwards any included variable
// whose partial F-to-remove falls below f_remove leaves. Ties go to the
// earlier candidate in the input order.
inline StepwiseTrace stepwise_select(const Dataset& ds, const std::vector<std::string>& candidates,
                                     double f_enter = 3.84, double f_remove = 2.71) {
    if (candidates.empty()) throw Error("stepwise_select requires at least one candidate");
    if (!(f_enter > f_remove) || !(f_remove > 0.0))
        throw Error("stepwise_select requires f_enter > f_remove > 0");

    const auto cols = ds.column_indices(candidates);
    const auto scatter = detail::group_scatter(ds, cols);
    const long n = scatter.n();
    for (std::size_t v = 0; v < candidates.size(); ++v)
        if (scatter.within(static_cast<Eigen::Index>(v), static_cast<Eigen::Index>(v)) == 0.0)
            throw DegenerateVariable(candidates[v]);

    const detail::WilksEvaluator wilks(scatter.within, scatter.within + scatter.between);
    constexpr double kToleranceMin = 1e-9;
    const double inf = std::numeric_limits<double>::infinity();

    std::vector<int> selected;
    std::vector<char> in_model(candidates.size(), 0);
    double lambda_cur = 1.0;
    StepwiseTrace trace;
    int step = 0;

    // Partial F for moving between a p-variable model (lambda_small) and the
    // (p+1)-variable model including v (lambda_big); p excludes v.
    auto partial_f = [&](double lambda_small, double lambda_big, long p) {
        if (lambda_big <= 0.0) return inf;
        return static_cast<double>(n - 2 - p) * (lambda_small / lambda_big - 1.0);
    };

    // Guards against threshold configurations that cycle.
    const int max_actions = static_cast<int>(4 * candidates.size() * candidates.size() + 8);

    while (step < max_actions) {
        // entry phase
        int best = -1;
        double best_f = -1.0, best_lambda = 1.0;
        for (std::size_t v = 0; v < candidates.size(); ++v) {
            if (in_model[v]) continue;
            if (wilks.tolerance(selected, static_cast<int>(v)) < kToleranceMin) continue;
            std::vector<int> joint = selected;
            joint.push_back(static_cast<int>(v));
            const double lambda_new = wilks.lambda(joint);
            if (std::isnan(lambda_new)) continue;
            const double f = partial_f(lambda_cur, lambda_new, static_cast<long>(selected.size()));
            if (f > best_f) {
                best_f = f;
                best = static_cast<int>(v);
                best_lambda = lambda_new;
            }
        }
        if (best < 0 || !(best_f > f_enter)) break;

        selected.push_back(best);
        in_model[static_cast<std::size_t>(best)] = 1;
        lambda_cur = best_lambda;
        trace.steps.push_back(
            {++step, StepAction::enter, candidates[static_cast<std::size_t>(best)], lambda_cur, best_f});

        // removal phase
        while (selected.size() > 1 && step < max_actions) {
            int worst_pos = -1;
            double worst_f = inf, worst_lambda = 1.0;
            for (std::size_t pos = 0; pos < selected.size(); ++pos) {
                std::vector<int> reduced;
                for (std::size_t q = 0; q < selected.size(); ++q)
                    if (q != pos) reduced.push_back(selected[q]);
                const double lambda_minus = wilks.lambda(reduced);
                if (std::isnan(lambda_minus)) continue;
                const double f =
                    partial_f(lambda_minus, lambda_cur, static_cast<long>(reduced.size()));
                if (f < worst_f) {
                    worst_f = f;
                    worst_pos = static_cast<int>(pos);
                    worst_lambda = lambda_minus;
                }
            }
            if (worst_pos < 0 || !(worst_f < f_remove)) break;

            const int var = selected[static_cast<std::size_t>(worst_pos)];
            selected.erase(selected.begin() + worst_pos);
            in_model[static_cast<std::size_t>(var)] = 0;
            lambda_cur = worst_lambda;
            trace.steps.push_back({++step, StepAction::remove,
                                   candidates[static_cast<std::size_t>(var)], lambda_cur, worst_f});
        }
    }

    if (selected.empty()) throw NoVariableSelected();
    for (int v : selected) trace.selected.push_back(candidates[static_cast<std::size_t>(v)]);
    return trace;
}

}  // namespace creditlab
