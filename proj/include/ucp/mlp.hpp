#pragma once

// Single-hidden-layer perceptron mapping a use-case/actor histogram to UUCP.
//
// Layout: 13 inputs -> H hidden units (tanh or logistic) -> 1 linear output.
// Inputs are divided by per-feature training maxima and the target by the
// training maximum, so the network works on values in [0, 1].
//
// Flattened parameter order, used by the Jacobian and by gradient checks:
//   hidden_weights row-major (unit j, input i), hidden_biases, output_weights, output_bias.

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "ucp/errors.hpp"
#include "ucp/json_io.hpp"
#include "ucp/karner.hpp"
#include "ucp/model.hpp"

namespace ucp::mlp {

inline constexpr std::size_t kUseCaseLevels = kMaxTransactionLevel;
inline constexpr std::size_t kActorClasses = 3;
inline constexpr std::size_t kInputs = kUseCaseLevels + kActorClasses;
inline constexpr std::size_t kDefaultHidden = 20;
inline constexpr std::size_t kMinHidden = 14;
inline constexpr std::size_t kMaxHidden = 25;

using Input = std::array<double, kInputs>;

/// Use-case histogram over effective transaction levels plus actor class counts.
struct FeatureVector {
    std::array<int, kUseCaseLevels> use_cases{};  // [x-1] = use cases with x transactions
    std::array<int, kActorClasses> actors{};      // simple, average, complex

    Input values() const {
        Input v{};
        for (std::size_t i = 0; i < kUseCaseLevels; ++i) v[i] = use_cases[i];
        for (std::size_t i = 0; i < kActorClasses; ++i) v[kUseCaseLevels + i] = actors[i];
        return v;
    }

    friend bool operator==(const FeatureVector&, const FeatureVector&) = default;
};

inline FeatureVector featurize(const ProjectSpec& project, TransactionPolicy policy, const WarningSink& warn = {}) {
    require_valid(project);
    FeatureVector f;
    for (const auto& uc : project.use_cases) {
        const int level = effective_transactions(uc, policy, warn).level;
        ++f.use_cases[static_cast<std::size_t>(level - 1)];
    }
    for (const auto& a : project.actors) ++f.actors[static_cast<std::size_t>(a.kind)];
    return f;
}

// ---------------------------------------------------------------------------
// Network

enum class Activation { tanh, logistic };

inline std::string_view to_string(Activation a) { return a == Activation::tanh ? "tanh" : "logistic"; }

inline double activate(Activation a, double z) {
    return a == Activation::tanh ? std::tanh(z) : 1.0 / (1.0 + std::exp(-z));
}

/// Derivative expressed through the activation output.
inline double activate_derivative(Activation a, double out) {
    return a == Activation::tanh ? 1.0 - out * out : out * (1.0 - out);
}

struct Normalization {
    Input input_scale;  // divisor per feature, > 0
    double target_scale = 1.0;

    Normalization() { input_scale.fill(1.0); }

    Input normalize(const Input& x) const {
        Input out{};
        for (std::size_t i = 0; i < kInputs; ++i) out[i] = x[i] / input_scale[i];
        return out;
    }
    double normalize_target(double t) const { return t / target_scale; }
    double denormalize_target(double y) const { return y * target_scale; }

    friend bool operator==(const Normalization&, const Normalization&) = default;
};

enum class TrainAlgorithm { levenberg_marquardt, gradient_backprop };

inline std::string_view to_string(TrainAlgorithm a) {
    return a == TrainAlgorithm::levenberg_marquardt ? "levenberg_marquardt" : "gradient_backprop";
}

struct TrainingMetadata {
    TrainAlgorithm algorithm = TrainAlgorithm::levenberg_marquardt;
    std::size_t epochs = 0;
    std::size_t samples = 0;
    double final_sse = 0.0;

    friend bool operator==(const TrainingMetadata&, const TrainingMetadata&) = default;
};

struct Network {
    Eigen::MatrixXd hidden_weights;  // hidden x inputs
    Eigen::VectorXd hidden_biases;
    Eigen::VectorXd output_weights;
    double output_bias = 0.0;
    Activation hidden_activation = Activation::tanh;
    Normalization normalization;
    std::uint64_t rng_seed = 0;
    TrainingMetadata training;

    static Network zeros(std::size_t hidden = kDefaultHidden) {
        Network n;
        const auto h = static_cast<Eigen::Index>(hidden);
        n.hidden_weights = Eigen::MatrixXd::Zero(h, static_cast<Eigen::Index>(kInputs));
        n.hidden_biases = Eigen::VectorXd::Zero(h);
        n.output_weights = Eigen::VectorXd::Zero(h);
        return n;
    }

    /// Every parameter uniform in [-0.5, 0.5], drawn in flattened-parameter order.
    static Network random(std::size_t hidden, std::uint64_t seed) {
        Network n = zeros(hidden);
        n.rng_seed = seed;
        std::mt19937_64 gen(seed);
        Eigen::VectorXd p(n.parameter_count());
        for (Eigen::Index i = 0; i < p.size(); ++i)
            p[i] = static_cast<double>(gen() >> 11) * 0x1.0p-53 - 0.5;
        n.set_parameters(p);
        return n;
    }

    std::size_t hidden_size() const { return static_cast<std::size_t>(hidden_biases.size()); }

    Eigen::Index parameter_count() const {
        const auto h = hidden_biases.size();
        return h * static_cast<Eigen::Index>(kInputs) + h + h + 1;
    }

    Eigen::VectorXd parameters() const {
        const auto h = hidden_biases.size();
        const auto in = static_cast<Eigen::Index>(kInputs);
        Eigen::VectorXd p(parameter_count());
        Eigen::Index k = 0;
        for (Eigen::Index j = 0; j < h; ++j)
            for (Eigen::Index i = 0; i < in; ++i) p[k++] = hidden_weights(j, i);
        p.segment(k, h) = hidden_biases;
        k += h;
        p.segment(k, h) = output_weights;
        k += h;
        p[k] = output_bias;
        return p;
    }

    void set_parameters(const Eigen::VectorXd& p) {
        const auto h = hidden_biases.size();
        const auto in = static_cast<Eigen::Index>(kInputs);
        if (p.size() != parameter_count()) throw NumericError("parameter vector has the wrong length");
        Eigen::Index k = 0;
        for (Eigen::Index j = 0; j < h; ++j)
            for (Eigen::Index i = 0; i < in; ++i) hidden_weights(j, i) = p[k++];
        hidden_biases = p.segment(k, h);
        k += h;
        output_weights = p.segment(k, h);
        k += h;
        output_bias = p[k];
    }

    bool finite() const {
        return hidden_weights.allFinite() && hidden_biases.allFinite() && output_weights.allFinite() &&
               std::isfinite(output_bias);
    }
};

/// Output for an already normalized input.
inline double forward(const Network& net, const Input& x) {
    double y = net.output_bias;
    for (Eigen::Index j = 0; j < net.hidden_biases.size(); ++j) {
        double z = net.hidden_biases[j];
        for (std::size_t i = 0; i < kInputs; ++i) z += net.hidden_weights(j, static_cast<Eigen::Index>(i)) * x[i];
        y += net.output_weights[j] * activate(net.hidden_activation, z);
    }
    if (!std::isfinite(y)) throw NumericError("network output is not finite");
    return y;
}

/// Predicted UUCP for a raw feature vector.
inline double predict(const Network& net, const FeatureVector& f) {
    return net.normalization.denormalize_target(forward(net, net.normalization.normalize(f.values())));
}

inline SizeEstimate estimate_mlp(const Network& net, const ProjectSpec& project, TransactionPolicy policy,
                                 std::optional<EffortRate> fixed_rate = std::nullopt,
                                 RiskOverride override = RiskOverride::refuse, const WarningSink& warn = {}) {
    const double size = predict(net, featurize(project, policy, warn));
    if (!(size > 0.0)) throw NumericError("network predicted a non-positive size for '" + project.id + "'");
    return complete_estimate(ModelTag::mlp, size, project.factors, fixed_rate, override);
}

// ---------------------------------------------------------------------------
// Error, gradient and Jacobian on normalized samples

struct Sample {
    Input x{};
    double target = 0.0;
};

/// Derivative of the network output with respect to every parameter at `x`.
inline Eigen::VectorXd output_jacobian(const Network& net, const Input& x) {
    const auto h = net.hidden_biases.size();
    const auto in = static_cast<Eigen::Index>(kInputs);
    Eigen::VectorXd d(net.parameter_count());
    for (Eigen::Index j = 0; j < h; ++j) {
        double z = net.hidden_biases[j];
        for (Eigen::Index i = 0; i < in; ++i) z += net.hidden_weights(j, i) * x[static_cast<std::size_t>(i)];
        const double a = activate(net.hidden_activation, z);
        const double back = net.output_weights[j] * activate_derivative(net.hidden_activation, a);
        for (Eigen::Index i = 0; i < in; ++i) d[j * in + i] = back * x[static_cast<std::size_t>(i)];
        d[h * in + j] = back;
        d[h * in + h + j] = a;
    }
    d[h * in + 2 * h] = 1.0;
    return d;
}

inline double sse(const Network& net, std::span<const Sample> data) {
    double s = 0.0;
    for (const auto& smp : data) {
        const double r = forward(net, smp.x) - smp.target;
        s += r * r;
    }
    return s;
}

/// Analytic gradient of the sum of squared errors.
inline Eigen::VectorXd sse_gradient(const Network& net, std::span<const Sample> data) {
    Eigen::VectorXd g = Eigen::VectorXd::Zero(net.parameter_count());
    for (const auto& smp : data) {
        const double r = forward(net, smp.x) - smp.target;
        g += 2.0 * r * output_jacobian(net, smp.x);
    }
    return g;
}

struct GradientCheckOptions {
    double step = 1e-5;
    double absolute_floor = 1e-8;  // both gradients below this count as agreeing
    double relative_floor = 1e-6;  // lower bound on the relative-error denominator
};

/// Largest relative discrepancy between `analytic(net, data)` and central
/// finite differences of the SSE.
template <class GradientFn>
double gradient_check(const Network& net, std::span<const Sample> data, GradientFn&& analytic,
                      const GradientCheckOptions& opt = {}) {
    const Eigen::VectorXd g = analytic(net, data);
    const Eigen::VectorXd p = net.parameters();
    Network probe = net;
    double worst = 0.0;
    for (Eigen::Index k = 0; k < p.size(); ++k) {
        Eigen::VectorXd q = p;
        q[k] = p[k] + opt.step;
        probe.set_parameters(q);
        const double up = sse(probe, data);
        q[k] = p[k] - opt.step;
        probe.set_parameters(q);
        const double down = sse(probe, data);
        const double numeric = (up - down) / (2.0 * opt.step);
        const double scale = std::max(std::abs(numeric), std::abs(g[k]));
        if (scale < opt.absolute_floor) continue;
        worst = std::max(worst, std::abs(numeric - g[k]) / std::max(scale, opt.relative_floor));
    }
    return worst;
}

inline double gradient_check(const Network& net, std::span<const Sample> data, const GradientCheckOptions& opt = {}) {
    return gradient_check(
        net, data, [](const Network& n, std::span<const Sample> d) { return sse_gradient(n, d); }, opt);
}

// ---------------------------------------------------------------------------
// Training

struct TrainConfig {
    TrainAlgorithm algorithm = TrainAlgorithm::levenberg_marquardt;
    std::size_t hidden = kDefaultHidden;
    Activation activation = Activation::tanh;
    std::size_t max_epochs = 1000;
    double target_sse = 1e-12;
    double lm_damping_init = 1e-3;
    double lm_damping_factor = 10.0;
    double lm_damping_max = 1e10;
    double min_gradient = 1e-14;
    double learning_rate = 0.01;
    std::uint64_t rng_seed = 1;
    std::optional<Normalization> normalization;  // derived from the data when empty

    std::vector<Issue> validate() const {
        std::vector<Issue> issues;
        const std::string s = "train config";
        if (hidden < kMinHidden || hidden > kMaxHidden)
            issues.push_back({s, "hidden", "must be in 14..25, got " + std::to_string(hidden)});
        if (max_epochs == 0) issues.push_back({s, "max_epochs", "must be positive"});
        if (!(target_sse >= 0.0)) issues.push_back({s, "target_sse", "must be non-negative"});
        if (!(lm_damping_init > 0.0)) issues.push_back({s, "lm_damping_init", "must be positive"});
        if (!(lm_damping_factor > 1.0)) issues.push_back({s, "lm_damping_factor", "must exceed 1"});
        if (!(lm_damping_max > lm_damping_init)) issues.push_back({s, "lm_damping_max", "must exceed lm_damping_init"});
        if (!(learning_rate > 0.0)) issues.push_back({s, "learning_rate", "must be positive"});
        return issues;
    }
};

struct EpochRecord {
    std::size_t epoch = 0;
    double sse = 0.0;
    double damping = 0.0;  // LM only
};

enum class StopReason { target_reached, min_gradient, max_epochs };

struct TrainResult {
    Network network;
    std::vector<EpochRecord> history;
    StopReason reason = StopReason::max_epochs;
};

/// LM damping ran past its ceiling. The best network found so far is kept.
class ConvergenceError : public NumericError {
public:
    ConvergenceError(const std::string& what, Network best, std::vector<EpochRecord> history)
        : NumericError(what), best_(std::move(best)), history_(std::move(history)) {}

    const Network& best() const { return best_; }
    const std::vector<EpochRecord>& history() const { return history_; }

private:
    Network best_;
    std::vector<EpochRecord> history_;
};

/// Per-feature maxima of the inputs and the maximum target; zero maxima map to 1.
inline Normalization fit_normalization(std::span<const std::pair<FeatureVector, double>> data) {
    Normalization n;
    n.input_scale.fill(0.0);
    n.target_scale = 0.0;
    for (const auto& [f, t] : data) {
        const auto v = f.values();
        for (std::size_t i = 0; i < kInputs; ++i) n.input_scale[i] = std::max(n.input_scale[i], v[i]);
        n.target_scale = std::max(n.target_scale, t);
    }
    for (auto& s : n.input_scale)
        if (s <= 0.0) s = 1.0;
    if (n.target_scale <= 0.0) n.target_scale = 1.0;
    return n;
}

namespace detail {

inline void check_finite(const Network& net) {
    if (!net.finite()) throw NumericError("network parameters became non-finite");
}

/// Solves (J^T J + mu I) delta = -J^T r, through the N x N system when there
/// are fewer samples than parameters.
inline Eigen::VectorXd lm_step(const Eigen::MatrixXd& jac, const Eigen::VectorXd& r, double mu) {
    if (jac.rows() < jac.cols()) {
        Eigen::MatrixXd k = jac * jac.transpose();
        k.diagonal().array() += mu;
        return -(jac.transpose() * k.ldlt().solve(r));
    }
    Eigen::MatrixXd a = jac.transpose() * jac;
    a.diagonal().array() += mu;
    return -a.ldlt().solve(jac.transpose() * r);
}

inline TrainResult train_lm(Network net, std::span<const Sample> data, const TrainConfig& cfg) {
    TrainResult result;
    const auto n = static_cast<Eigen::Index>(data.size());
    double mu = cfg.lm_damping_init;
    double current = sse(net, data);
    result.history.push_back({0, current, mu});
    Eigen::MatrixXd jac(n, net.parameter_count());
    Eigen::VectorXd r(n);
    for (std::size_t epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
        if (current <= cfg.target_sse) {
            result.reason = StopReason::target_reached;
            break;
        }
        for (Eigen::Index s = 0; s < n; ++s) {
            const auto& smp = data[static_cast<std::size_t>(s)];
            r[s] = forward(net, smp.x) - smp.target;
            jac.row(s) = output_jacobian(net, smp.x).transpose();
        }
        if ((jac.transpose() * r).lpNorm<Eigen::Infinity>() < cfg.min_gradient) {
            result.reason = StopReason::min_gradient;
            break;
        }
        const Eigen::VectorXd params = net.parameters();
        for (;;) {
            Network trial = net;
            trial.set_parameters(params + lm_step(jac, r, mu));
            double candidate = std::numeric_limits<double>::infinity();
            if (trial.finite()) {
                try {
                    candidate = sse(trial, data);
                } catch (const NumericError&) {
                }
            }
            if (candidate < current) {
                net = std::move(trial);
                current = candidate;
                mu = std::max(mu / cfg.lm_damping_factor, 1e-20);
                break;
            }
            mu *= cfg.lm_damping_factor;
            if (mu > cfg.lm_damping_max) {
                net.training = {TrainAlgorithm::levenberg_marquardt, epoch - 1, data.size(), current};
                throw ConvergenceError("Levenberg-Marquardt damping exceeded " + std::to_string(cfg.lm_damping_max),
                                       std::move(net), std::move(result.history));
            }
        }
        result.history.push_back({epoch, current, mu});
        if (epoch == cfg.max_epochs) result.reason = StopReason::max_epochs;
    }
    net.training = {TrainAlgorithm::levenberg_marquardt, result.history.size() - 1, data.size(), current};
    result.network = std::move(net);
    return result;
}

inline TrainResult train_backprop(Network net, std::span<const Sample> data, const TrainConfig& cfg) {
    TrainResult result;
    double current = sse(net, data);
    result.history.push_back({0, current, 0.0});
    for (std::size_t epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
        if (current <= cfg.target_sse) {
            result.reason = StopReason::target_reached;
            break;
        }
        const Eigen::VectorXd g = sse_gradient(net, data);
        if (g.lpNorm<Eigen::Infinity>() < cfg.min_gradient) {
            result.reason = StopReason::min_gradient;
            break;
        }
        net.set_parameters(net.parameters() - cfg.learning_rate * g);
        check_finite(net);
        current = sse(net, data);
        result.history.push_back({epoch, current, 0.0});
        if (epoch == cfg.max_epochs) result.reason = StopReason::max_epochs;
    }
    net.training = {TrainAlgorithm::gradient_backprop, result.history.size() - 1, data.size(), current};
    result.network = std::move(net);
    return result;
}

}  // namespace detail

/// Trains on already normalized samples, starting from `init`.
inline TrainResult train_normalized(Network init, std::span<const Sample> data, const TrainConfig& cfg) {
    if (data.empty()) throw ValidationError("training data", "", "no samples");
    detail::check_finite(init);
    return cfg.algorithm == TrainAlgorithm::levenberg_marquardt ? detail::train_lm(std::move(init), data, cfg)
                                                                : detail::train_backprop(std::move(init), data, cfg);
}

/// Fits a fresh network to (features, UUCP) pairs. Deterministic for a given config.
inline TrainResult train(std::span<const std::pair<FeatureVector, double>> data, const TrainConfig& cfg) {
    if (auto issues = cfg.validate(); !issues.empty()) throw ValidationError(std::move(issues));
    if (data.size() < 2) throw ValidationError("training data", "", "at least two samples are required");
    for (const auto& [f, t] : data)
        if (!(t > 0.0) || !std::isfinite(t)) throw ValidationError("training data", "target", "targets must be positive");

    Network net = Network::random(cfg.hidden, cfg.rng_seed);
    net.hidden_activation = cfg.activation;
    net.normalization = cfg.normalization ? *cfg.normalization : fit_normalization(data);
    std::vector<Sample> samples;
    samples.reserve(data.size());
    for (const auto& [f, t] : data)
        samples.push_back({net.normalization.normalize(f.values()), net.normalization.normalize_target(t)});
    return train_normalized(std::move(net), samples, cfg);
}

// ---------------------------------------------------------------------------
// Model file

inline nlohmann::ordered_json to_json(const Network& net) {
    using J = nlohmann::ordered_json;
    J j;
    j["format_version"] = 1;
    j["topology"] = {{"inputs", kInputs}, {"hidden", net.hidden_size()}, {"outputs", 1}};
    j["hidden_activation"] = to_string(net.hidden_activation);
    j["output_activation"] = "identity";
    j["normalization"] = {{"input_scale", net.normalization.input_scale},
                          {"target_scale", net.normalization.target_scale}};
    J rows = J::array();
    for (Eigen::Index r = 0; r < net.hidden_weights.rows(); ++r) {
        J row = J::array();
        for (Eigen::Index c = 0; c < net.hidden_weights.cols(); ++c) row.push_back(net.hidden_weights(r, c));
        rows.push_back(row);
    }
    J params;
    params["hidden_weights"] = rows;
    params["hidden_biases"] = std::vector<double>(net.hidden_biases.begin(), net.hidden_biases.end());
    params["output_weights"] = std::vector<double>(net.output_weights.begin(), net.output_weights.end());
    params["output_bias"] = net.output_bias;
    j["parameters"] = params;
    j["rng_seed"] = net.rng_seed;
    j["training"] = {{"algorithm", to_string(net.training.algorithm)},
                     {"epochs", net.training.epochs},
                     {"samples", net.training.samples},
                     {"final_sse", net.training.final_sse}};
    return j;
}

inline Network network_from_json(const nlohmann::json& j) {
    const std::string subject = "model file";
    try {
        if (j.at("format_version").get<int>() != 1) throw ValidationError(subject, "format_version", "unsupported");
        const auto& topo = j.at("topology");
        if (topo.at("inputs").get<std::size_t>() != kInputs || topo.at("outputs").get<std::size_t>() != 1)
            throw ValidationError(subject, "topology", "expected 13 inputs and 1 output");
        const auto hidden = topo.at("hidden").get<std::size_t>();
        if (hidden == 0) throw ValidationError(subject, "topology.hidden", "must be positive");
        Network net = Network::zeros(hidden);
        const auto act = j.at("hidden_activation").get<std::string>();
        if (act == "tanh") net.hidden_activation = Activation::tanh;
        else if (act == "logistic") net.hidden_activation = Activation::logistic;
        else throw ValidationError(subject, "hidden_activation", "unknown activation '" + act + "'");
        if (j.at("output_activation").get<std::string>() != "identity")
            throw ValidationError(subject, "output_activation", "only 'identity' is supported");
        net.normalization.input_scale = j.at("normalization").at("input_scale").get<Input>();
        net.normalization.target_scale = j.at("normalization").at("target_scale").get<double>();
        const auto& p = j.at("parameters");
        const auto& rows = p.at("hidden_weights");
        if (rows.size() != hidden) throw ValidationError(subject, "parameters.hidden_weights", "wrong row count");
        for (std::size_t r = 0; r < hidden; ++r) {
            const auto row = rows[r].get<std::vector<double>>();
            if (row.size() != kInputs) throw ValidationError(subject, "parameters.hidden_weights", "wrong row width");
            for (std::size_t c = 0; c < kInputs; ++c)
                net.hidden_weights(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = row[c];
        }
        auto vec = [&](const char* name) {
            const auto v = p.at(name).get<std::vector<double>>();
            if (v.size() != hidden) throw ValidationError(subject, std::string("parameters.") + name, "wrong length");
            return Eigen::VectorXd(Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size())));
        };
        net.hidden_biases = vec("hidden_biases");
        net.output_weights = vec("output_weights");
        net.output_bias = p.at("output_bias").get<double>();
        net.rng_seed = j.at("rng_seed").get<std::uint64_t>();
        const auto& t = j.at("training");
        const auto alg = t.at("algorithm").get<std::string>();
        net.training.algorithm =
            alg == "gradient_backprop" ? TrainAlgorithm::gradient_backprop : TrainAlgorithm::levenberg_marquardt;
        net.training.epochs = t.at("epochs").get<std::size_t>();
        net.training.samples = t.at("samples").get<std::size_t>();
        net.training.final_sse = t.at("final_sse").get<double>();
        if (!net.finite()) throw ValidationError(subject, "parameters", "non-finite value");
        for (double s : net.normalization.input_scale)
            if (!(s > 0.0)) throw ValidationError(subject, "normalization.input_scale", "must be positive");
        if (!(net.normalization.target_scale > 0.0))
            throw ValidationError(subject, "normalization.target_scale", "must be positive");
        return net;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(subject, "", e.what());
    }
}

inline std::string serialize(const Network& net) { return io::dump(to_json(net)); }

inline void save_network(const Network& net, const std::string& path) { io::write_text(path, serialize(net)); }

inline Network load_network(const std::string& path) { return network_from_json(io::read_json(path)); }

}  // namespace ucp::mlp
