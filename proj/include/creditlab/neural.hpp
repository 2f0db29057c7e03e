#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <limits>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "creditlab/dataset.hpp"
#include "creditlab/errors.hpp"
#include "creditlab/rng.hpp"

namespace creditlab {

inline double sigmoid(double n) { return 1.0 / (1.0 + std::exp(-n)); }

// Feedforward perceptron: logistic sigmoid on hidden layers, identity on the
// single output unit. weights[l] has layer_sizes[l+1] rows of layer_sizes[l]
// entries (row-major); biases[l] has layer_sizes[l+1] entries.
struct Network {
    std::vector<int> layer_sizes;
    std::vector<std::vector<double>> weights;
    std::vector<std::vector<double>> biases;

    int input_size() const { return layer_sizes.front(); }
    std::size_t layer_count() const { return layer_sizes.size(); }

    std::size_t parameter_count() const {
        std::size_t n = 0;
        for (std::size_t l = 0; l < weights.size(); ++l) n += weights[l].size() + biases[l].size();
        return n;
    }

    bool all_finite() const {
        for (const auto& layer : weights)
            for (double w : layer)
                if (!std::isfinite(w)) return false;
        for (const auto& layer : biases)
            for (double b : layer)
                if (!std::isfinite(b)) return false;
        return true;
    }
};

// Weights drawn uniformly from [-1/sqrt(fan_in), +1/sqrt(fan_in)] per layer,
// biases zero. Identical (layer_sizes, seed) gives a bit-identical network.
inline Network init_network(const std::vector<int>& layer_sizes, std::uint64_t seed) {
    if (layer_sizes.size() < 2)
        throw InvalidArchitecture("a network needs at least input and output layers");
    for (int s : layer_sizes)
        if (s < 1) throw InvalidArchitecture("every layer needs at least one unit");
    if (layer_sizes.back() != 1)
        throw InvalidArchitecture("the output layer must have exactly one unit");

    Network net;
    net.layer_sizes = layer_sizes;
    SplitMix64 rng(seed);
    for (std::size_t l = 0; l + 1 < layer_sizes.size(); ++l) {
        const int fan_in = layer_sizes[l];
        const int fan_out = layer_sizes[l + 1];
        const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
        std::vector<double> w(static_cast<std::size_t>(fan_in) * fan_out);
        for (double& x : w) x = rng.symmetric(bound);
        net.weights.push_back(std::move(w));
        net.biases.emplace_back(static_cast<std::size_t>(fan_out), 0.0);
    }
    return net;
}

namespace detail {

// Activations per layer for one sample; index 0 is the input itself.
inline std::vector<std::vector<double>> forward_activations(const Network& net,
                                                            std::span<const double> x) {
    if (x.size() != static_cast<std::size_t>(net.input_size()))
        throw DimensionMismatch(static_cast<std::size_t>(net.input_size()), x.size());
    std::vector<std::vector<double>> acts;
    acts.reserve(net.layer_count());
    acts.emplace_back(x.begin(), x.end());
    for (std::size_t l = 0; l < net.weights.size(); ++l) {
        const auto& prev = acts.back();
        const int n_out = net.layer_sizes[l + 1];
        const int n_in = net.layer_sizes[l];
        std::vector<double> out(static_cast<std::size_t>(n_out));
        const bool is_output = (l + 1 == net.weights.size());
        for (int j = 0; j < n_out; ++j) {
            double n = net.biases[l][static_cast<std::size_t>(j)];
            const double* row = net.weights[l].data() + static_cast<std::size_t>(j) * n_in;
            for (int i = 0; i < n_in; ++i) n += row[i] * prev[static_cast<std::size_t>(i)];
            out[static_cast<std::size_t>(j)] = is_output ? n : sigmoid(n);
        }
        acts.push_back(std::move(out));
    }
    return acts;
}

}  // namespace detail

inline double forward(const Network& net, std::span<const double> x) {
    return detail::forward_activations(net, x).back()[0];
}

inline std::vector<double> forward_batch(const Network& net,
                                         const std::vector<std::vector<double>>& inputs) {
    std::vector<double> out;
    out.reserve(inputs.size());
    for (const auto& x : inputs) out.push_back(forward(net, x));
    return out;
}

// The study labels its error "MSE" but displays the half-sum formula
// E = 1/2 sum (d_i - y_i)^2; both conventions are exposed. Reporting defaults
// to mean, gradients use half_sum.
enum class MseConvention { mean, half_sum };

inline double mse(std::span<const double> outputs, std::span<const double> targets,
                  MseConvention convention = MseConvention::mean) {
    if (outputs.empty()) throw EmptyInput();
    if (outputs.size() != targets.size()) throw LengthMismatch(outputs.size(), targets.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < outputs.size(); ++i) {
        const double e = targets[i] - outputs[i];
        sum += e * e;
    }
    return convention == MseConvention::half_sum ? 0.5 * sum
                                                 : sum / static_cast<double>(outputs.size());
}

// Parameter-shaped buffer (same layout as Network weights/biases).
struct Gradient {
    std::vector<std::vector<double>> weights;
    std::vector<std::vector<double>> biases;

    static Gradient zeros_like(const Network& net) {
        Gradient g;
        for (const auto& w : net.weights) g.weights.emplace_back(w.size(), 0.0);
        for (const auto& b : net.biases) g.biases.emplace_back(b.size(), 0.0);
        return g;
    }
};

// Exact reverse-accumulation gradient of the half-sum error over the full
// batch. sigma'(n) = a(1-a) on hidden units, derivative 1 at the linear
// output.
inline Gradient gradient(const Network& net, const std::vector<std::vector<double>>& inputs,
                         std::span<const double> targets) {
    if (inputs.empty()) throw EmptyInput();
    if (inputs.size() != targets.size()) throw LengthMismatch(inputs.size(), targets.size());

    Gradient g = Gradient::zeros_like(net);
    const std::size_t n_layers = net.weights.size();
    for (std::size_t s = 0; s < inputs.size(); ++s) {
        const auto acts = detail::forward_activations(net, inputs[s]);
        // delta[l] = dE/d(pre-activation of layer l+1)
        std::vector<std::vector<double>> delta(n_layers);
        delta[n_layers - 1] = {acts.back()[0] - targets[s]};
        for (std::size_t l = n_layers - 1; l-- > 0;) {
            const int n_units = net.layer_sizes[l + 1];
            const int n_next = net.layer_sizes[l + 2];
            std::vector<double> d(static_cast<std::size_t>(n_units));
            for (int i = 0; i < n_units; ++i) {
                double back = 0.0;
                for (int j = 0; j < n_next; ++j)
                    back += net.weights[l + 1][static_cast<std::size_t>(j) * n_units + i] *
                            delta[l + 1][static_cast<std::size_t>(j)];
                const double a = acts[l + 1][static_cast<std::size_t>(i)];
                d[static_cast<std::size_t>(i)] = a * (1.0 - a) * back;
            }
            delta[l] = std::move(d);
        }
        for (std::size_t l = 0; l < n_layers; ++l) {
            const int n_out = net.layer_sizes[l + 1];
            const int n_in = net.layer_sizes[l];
            for (int j = 0; j < n_out; ++j) {
                const double dj = delta[l][static_cast<std::size_t>(j)];
                double* grow = g.weights[l].data() + static_cast<std::size_t>(j) * n_in;
                for (int i = 0; i < n_in; ++i) grow[i] += dj * acts[l][static_cast<std::size_t>(i)];
                g.biases[l][static_cast<std::size_t>(j)] += dj;
            }
        }
    }
    return g;
}

struct TrainConfig {
    int epochs = 500;
    double eta_plus = 1.2;
    double eta_minus = 0.5;
    double delta_init = 0.07;
    double delta_max = 50.0;
    double delta_min = 1e-6;
    std::uint64_t seed = 0;

    void validate() const {
        if (!(eta_minus > 0.0 && eta_minus < 1.0 && eta_plus > 1.0))
            throw Error("train config requires 0 < eta_minus < 1 < eta_plus");
        if (!(delta_min > 0.0 && delta_min <= delta_init && delta_init <= delta_max))
            throw Error("train config requires 0 < delta_min <= delta_init <= delta_max");
        if (epochs < 0) throw Error("train config requires epochs >= 0");
    }
};

struct TrainHistory {
    std::vector<double> errors;  // half-sum training error, one entry per epoch

    std::vector<double> best_so_far() const {
        std::vector<double> best;
        best.reserve(errors.size());
        double b = std::numeric_limits<double>::infinity();
        for (double e : errors) {
            b = std::min(b, e);
            best.push_back(b);
        }
        return best;
    }
};

enum class TrainStatus { completed, non_finite_error };

// Training never throws on numeric blow-up; the state at abort is returned
// with the status flag so callers (the architecture search in particular) can
// report the failing configuration and move on.
struct TrainResult {
    Network network;
    TrainHistory history;
    TrainStatus status = TrainStatus::completed;
    int epochs_run = 0;
};

namespace detail {

// One Rprop step for a single parameter. Sign agreement grows the step and
// moves against the gradient; a sign flip undoes the previous move, shrinks
// the step, and clears the stored gradient so the next epoch is treated as
// sign-neutral; a zero product moves with the unchanged step.
inline void rprop_step(double& param, double grad, double& step_size, double& prev_grad,
                       double& prev_step, const TrainConfig& cfg) {
    const double product = prev_grad * grad;
    if (product > 0.0) {
        step_size = std::min(step_size * cfg.eta_plus, cfg.delta_max);
        const double dw = grad > 0.0 ? -step_size : step_size;
        param += dw;
        prev_grad = grad;
        prev_step = dw;
    } else if (product < 0.0) {
        param -= prev_step;
        step_size = std::max(step_size * cfg.eta_minus, cfg.delta_min);
        prev_grad = 0.0;
        prev_step = 0.0;
    } else {
        const double dw = grad > 0.0 ? -step_size : (grad < 0.0 ? step_size : 0.0);
        param += dw;
        prev_grad = grad;
        prev_step = dw;
    }
}

}  // namespace detail

// Full-batch resilient backpropagation (classic Rprop with weight
// backtracking). Runs exactly cfg.epochs epochs; history records the half-sum
// training error at the start of each epoch.
inline TrainResult train_rprop(Network net, const std::vector<std::vector<double>>& inputs,
                               std::span<const double> targets, const TrainConfig& cfg) {
    cfg.validate();
    if (inputs.empty()) throw EmptyInput();
    if (inputs.size() != targets.size()) throw LengthMismatch(inputs.size(), targets.size());

    Gradient step_size = Gradient::zeros_like(net);
    for (auto& layer : step_size.weights) std::fill(layer.begin(), layer.end(), cfg.delta_init);
    for (auto& layer : step_size.biases) std::fill(layer.begin(), layer.end(), cfg.delta_init);
    Gradient prev_grad = Gradient::zeros_like(net);
    Gradient prev_step = Gradient::zeros_like(net);

    TrainResult result;
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        const auto outputs = forward_batch(net, inputs);
        const double err = mse(outputs, targets, MseConvention::half_sum);
        if (!std::isfinite(err)) {
            result.status = TrainStatus::non_finite_error;
            break;
        }
        result.history.errors.push_back(err);

        const Gradient g = gradient(net, inputs, targets);
        for (std::size_t l = 0; l < net.weights.size(); ++l) {
            for (std::size_t i = 0; i < net.weights[l].size(); ++i)
                detail::rprop_step(net.weights[l][i], g.weights[l][i], step_size.weights[l][i],
                                   prev_grad.weights[l][i], prev_step.weights[l][i], cfg);
            for (std::size_t i = 0; i < net.biases[l].size(); ++i)
                detail::rprop_step(net.biases[l][i], g.biases[l][i], step_size.biases[l][i],
                                   prev_grad.biases[l][i], prev_step.biases[l][i], cfg);
        }
        if (!net.all_finite()) {
            result.status = TrainStatus::non_finite_error;
            break;
        }
        ++result.epochs_run;
    }
    result.network = std::move(net);
    return result;
}

// Median as the mean of the two middle order statistics for even n.
inline double median(std::vector<double> values) {
    if (values.empty()) throw EmptyInput();
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    if (n % 2 == 1) return values[n / 2];
    return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

struct ThresholdClassification {
    double threshold = 0.0;
    std::vector<int> classes;  // class 1 iff output >= threshold
};

inline ThresholdClassification threshold_classify(std::span<const double> outputs,
                                                  double threshold) {
    if (outputs.empty()) throw EmptyInput();
    ThresholdClassification r;
    r.threshold = threshold;
    r.classes.reserve(outputs.size());
    // a value exactly at the threshold is class 1
    for (double y : outputs) r.classes.push_back(y >= threshold ? 1 : 0);
    return r;
}

inline ThresholdClassification median_threshold_classify(const std::vector<double>& outputs) {
    return threshold_classify(outputs, median(outputs));
}

// Which sample the classification threshold (the output median) comes from.
enum class ThresholdSample { test, train };

struct EvalResult {
    std::vector<int> architecture;
    double train_mse = 0.0;
    double test_mse = 0.0;
    double threshold = 0.0;
    long correct_count = 0;
    long total_count = 0;
    double classification_rate = 0.0;
    TrainStatus status = TrainStatus::completed;
};

struct SearchResult {
    std::vector<EvalResult> results;  // in input order
    int best_index = -1;              // minimum test MSE among completed runs
    Network best_network;             // trained weights of the best entry
};

// Trains one network per configuration from a per-config seeded
// initialization and evaluates train/test MSE (mean convention) plus the
// median-threshold classification rate on the test sample. Best is the
// minimum test MSE; ties break to fewer parameters, then input order. A
// configuration whose training blows up is reported, not fatal.
inline SearchResult architecture_search(const std::vector<std::vector<double>>& train_inputs,
                                        std::span<const double> train_targets,
                                        const std::vector<std::vector<double>>& test_inputs,
                                        std::span<const double> test_targets,
                                        const std::vector<std::vector<int>>& space,
                                        const TrainConfig& cfg,
                                        ThresholdSample threshold_sample = ThresholdSample::test) {
    if (space.empty()) throw Error("architecture space is empty");
    if (train_inputs.empty() || test_inputs.empty()) throw EmptyInput();
    const int input_dim = static_cast<int>(train_inputs.front().size());

    SearchResult search;
    std::size_t best_params = 0;
    for (std::size_t c = 0; c < space.size(); ++c) {
        const auto& arch = space[c];
        if (arch.size() < 2 || arch.front() != input_dim || arch.back() != 1)
            throw InvalidArchitecture("architecture [" + std::to_string(arch.empty() ? 0 : arch.front()) +
                                      " ...] must start with the input dimension and end with 1");

        TrainConfig local = cfg;
        local.seed = derive_seed(cfg.seed, c);
        Network net = init_network(arch, local.seed);
        TrainResult trained = train_rprop(std::move(net), train_inputs, train_targets, local);

        EvalResult eval;
        eval.architecture = arch;
        eval.status = trained.status;
        if (trained.status == TrainStatus::completed) {
            const auto train_out = forward_batch(trained.network, train_inputs);
            const auto test_out = forward_batch(trained.network, test_inputs);
            eval.train_mse = mse(train_out, train_targets, MseConvention::mean);
            eval.test_mse = mse(test_out, test_targets, MseConvention::mean);
            const double thr = threshold_sample == ThresholdSample::test
                                   ? median(test_out)
                                   : median(train_out);
            const auto cls = threshold_classify(test_out, thr);
            eval.threshold = thr;
            eval.total_count = static_cast<long>(test_out.size());
            for (std::size_t i = 0; i < cls.classes.size(); ++i)
                if (cls.classes[i] == static_cast<int>(test_targets[i])) ++eval.correct_count;
            eval.classification_rate =
                static_cast<double>(eval.correct_count) / static_cast<double>(eval.total_count);

            const std::size_t params = trained.network.parameter_count();
            const bool better =
                search.best_index < 0 || eval.test_mse < search.results[static_cast<std::size_t>(search.best_index)].test_mse ||
                (eval.test_mse == search.results[static_cast<std::size_t>(search.best_index)].test_mse &&
                 params < best_params);
            if (better) {
                search.best_index = static_cast<int>(c);
                search.best_network = trained.network;
                best_params = params;
            }
        } else {
            eval.train_mse = std::numeric_limits<double>::quiet_NaN();
            eval.test_mse = std::numeric_limits<double>::quiet_NaN();
            eval.threshold = std::numeric_limits<double>::quiet_NaN();
        }
        search.results.push_back(std::move(eval));
    }
    return search;
}

// --- network serialization (versioned plain text, 17 significant digits) ---

inline void save_network(std::ostream& out, const Network& net) {
    out << "mlpnet v1\nlayers";
    for (int s : net.layer_sizes) out << ' ' << s;
    out << '\n';
    for (std::size_t l = 0; l < net.weights.size(); ++l) {
        const int n_out = net.layer_sizes[l + 1];
        const int n_in = net.layer_sizes[l];
        for (int j = 0; j < n_out; ++j) {
            for (int i = 0; i < n_in; ++i) {
                if (i) out << ' ';
                out << detail::format_double(net.weights[l][static_cast<std::size_t>(j) * n_in + i]);
            }
            out << '\n';
        }
        for (int j = 0; j < n_out; ++j) {
            if (j) out << ' ';
            out << detail::format_double(net.biases[l][static_cast<std::size_t>(j)]);
        }
        out << '\n';
    }
}

inline Network load_network(std::istream& in) {
    std::string magic, version, key;
    in >> magic >> version >> key;
    if (!in || magic != "mlpnet" || version != "v1" || key != "layers")
        throw ParseError(1, "expected 'mlpnet v1' header with a layers line");
    std::string rest;
    std::getline(in, rest);
    std::istringstream ls(rest);
    std::vector<int> sizes;
    int s;
    while (ls >> s) sizes.push_back(s);
    if (sizes.size() < 2) throw ParseError(2, "layers");

    Network net;
    net.layer_sizes = sizes;
    for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
        const auto n_in = static_cast<std::size_t>(sizes[l]);
        const auto n_out = static_cast<std::size_t>(sizes[l + 1]);
        std::vector<double> w(n_in * n_out), b(n_out);
        for (double& x : w)
            if (!(in >> x)) throw ParseError(0, "weights of layer " + std::to_string(l));
        for (double& x : b)
            if (!(in >> x)) throw ParseError(0, "biases of layer " + std::to_string(l));
        net.weights.push_back(std::move(w));
        net.biases.push_back(std::move(b));
    }
    return net;
}

}  // namespace creditlab
