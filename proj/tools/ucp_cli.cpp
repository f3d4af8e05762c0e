// Command-line front end: estimate, fuzzy-table, train, predict, evaluate,
// corpus-summary.
//
// Exit codes: 0 success, 1 validation, 2 I/O, 3 numeric or convergence failure.

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ucp/ucp.hpp"

namespace {

enum ExitCode { kOk = 0, kValidation = 1, kIo = 2, kNumeric = 3 };

struct Options {
    std::string corpus;
    std::string observations;
    std::vector<std::string> models;
    std::string mlp_model;
    std::optional<double> extension_weight;
    std::string policy;
    std::string format = "table";
    std::string rate = "schneider";
    bool force_rate = false;
    std::string fuzzy_config;
    std::string output;
    bool by_stage = false;

    // train
    std::string model_out;
    std::uint64_t seed = 1;
    std::string algorithm = "lm";
    std::size_t epochs = 1000;
    std::size_t hidden = ucp::mlp::kDefaultHidden;
    double learning_rate = 0.01;
    std::vector<std::string> train_ids;
    std::optional<double> train_fraction;
};

void print_warning(const std::string& w) { std::cerr << "warning: " << w << "\n"; }

ucp::report::Format output_format(const Options& o) {
    return o.format == "csv" ? ucp::report::Format::csv : ucp::report::Format::table;
}

void emit(const Options& o, const std::string& text) {
    if (o.output.empty()) std::cout << text;
    else ucp::io::write_text(o.output, text);
}

ucp::TransactionPolicy policy_of(const Options& o) {
    ucp::TransactionPolicy p = o.policy == "discounted" ? ucp::TransactionPolicy::discounted()
                                                        : ucp::TransactionPolicy::full();
    if (o.extension_weight) p.extension_weight = *o.extension_weight;
    ucp::require_valid(p);
    return p;
}

std::vector<ucp::ModelTag> models_of(const Options& o, std::vector<std::string> fallback) {
    const auto& names = o.models.empty() ? fallback : o.models;
    std::vector<ucp::ModelTag> out;
    for (const auto& n : names) {
        auto tag = ucp::parse_model_tag(n);
        if (!tag) throw ucp::ValidationError("--models", n, "unknown model (expected karner, fuzzy or mlp)");
        if (std::find(out.begin(), out.end(), *tag) == out.end()) out.push_back(*tag);
    }
    if (std::find(out.begin(), out.end(), ucp::ModelTag::mlp) != out.end() && o.mlp_model.empty())
        throw ucp::ValidationError("--models", "mlp", "requires --mlp-model");
    return out;
}

/// Holds the objects EstimationOptions points into.
struct Engines {
    std::optional<ucp::AdjustedWeightTable> fuzzy;
    std::optional<ucp::mlp::Network> network;
    ucp::EstimationOptions options;
};

Engines make_engines(const Options& o) {
    Engines e;
    e.options.policy = policy_of(o);
    if (!o.fuzzy_config.empty()) e.fuzzy.emplace(ucp::FuzzyInference(ucp::load_fuzzy_config(o.fuzzy_config)));
    if (!o.mlp_model.empty()) e.network = ucp::mlp::load_network(o.mlp_model);
    if (o.rate == "karner") e.options.fixed_rate = ucp::EffortRate::standard;
    e.options.risk = o.force_rate ? ucp::RiskOverride::force : ucp::RiskOverride::refuse;
    return e;
}

void bind(Engines& e) {
    e.options.fuzzy_table = e.fuzzy ? &*e.fuzzy : nullptr;
    e.options.network = e.network ? &*e.network : nullptr;
}

int run_estimate(const Options& o, std::vector<std::string> default_models) {
    const auto models = models_of(o, std::move(default_models));
    Engines e = make_engines(o);
    bind(e);
    const auto corpus = ucp::load_corpus(o.corpus);
    std::vector<ucp::report::ProjectEstimate> items;
    for (const auto& p : corpus.projects) {
        const auto warn = [&](const std::string& w) { print_warning("project '" + p.id + "': " + w); };
        for (auto m : models) {
            // Every model sees the same use cases; warn about them once.
            auto est = ucp::estimate_project(p, m, e.options, m == models.front() ? warn : ucp::WarningSink{});
            if (m == models.front() && !est.rate)
                warn("Schneider count " + std::to_string(est.schneider_count) +
                     " >= 5, team restructure recommended; effort omitted (use --force-rate to apply 28 ph/UCP)");
            items.push_back({p.id, est});
        }
    }
    emit(o, ucp::report::estimates_table(items).render(output_format(o)));
    return kOk;
}

int run_fuzzy_table(const Options& o) {
    std::optional<ucp::AdjustedWeightTable> custom;
    if (!o.fuzzy_config.empty()) custom.emplace(ucp::FuzzyInference(ucp::load_fuzzy_config(o.fuzzy_config)));
    const auto& table = custom ? *custom : ucp::default_weight_table();
    emit(o, ucp::report::fuzzy_weight_table(table).render(output_format(o)));
    return kOk;
}

int run_train(const Options& o) {
    const auto policy = policy_of(o);
    auto corpus = ucp::load_corpus(o.corpus);
    const auto risk = o.force_rate ? ucp::RiskOverride::force : ucp::RiskOverride::refuse;
    if (!o.train_ids.empty()) corpus = ucp::split(corpus, o.train_ids).train;
    else if (o.train_fraction) corpus = ucp::split(corpus, *o.train_fraction, o.seed).train;

    std::vector<std::pair<ucp::mlp::FeatureVector, double>> data;
    std::vector<ucp::Issue> issues;
    for (const auto& p : corpus.projects) {
        try {
            data.emplace_back(ucp::mlp::featurize(p, policy), ucp::actual_uucp(p, risk).uucp);
        } catch (const ucp::ValidationError& err) {
            issues.insert(issues.end(), err.issues().begin(), err.issues().end());
        } catch (const ucp::TeamRiskError& err) {
            issues.push_back({"project '" + p.id + "'", "actual_effort_ph", err.what()});
        }
    }
    if (!issues.empty()) throw ucp::ValidationError(std::move(issues));

    ucp::mlp::TrainConfig cfg;
    cfg.algorithm = o.algorithm == "backprop" ? ucp::mlp::TrainAlgorithm::gradient_backprop
                                              : ucp::mlp::TrainAlgorithm::levenberg_marquardt;
    cfg.max_epochs = o.epochs;
    cfg.hidden = o.hidden;
    cfg.learning_rate = o.learning_rate;
    cfg.rng_seed = o.seed;
    const auto result = ucp::mlp::train(data, cfg);
    ucp::mlp::save_network(result.network, o.model_out);

    std::vector<ucp::ObservationPair> pairs;
    for (std::size_t i = 0; i < data.size(); ++i)
        pairs.push_back({corpus.projects[i].id, data[i].second, ucp::mlp::predict(result.network, data[i].first)});
    std::string ids;
    for (const auto& p : corpus.projects) ids += (ids.empty() ? "" : ",") + p.id;
    std::string text = "trained on " + std::to_string(data.size()) + " projects: " + ids + "\n";
    text += "epochs: " + std::to_string(result.network.training.epochs) + "\n";
    text += "final normalized SSE: " + std::to_string(result.network.training.final_sse) + "\n";
    bool positive = true;
    for (const auto& p : pairs) positive = positive && p.predicted > 0.0;
    if (positive) text += "training MMRE: " + ucp::report::fixed(ucp::summarize(pairs).mmre, 4) + "\n";
    text += "model written to " + o.model_out + "\n";
    emit(o, text);
    return kOk;
}

int run_evaluate(const Options& o) {
    const auto models = models_of(o, {"karner", "fuzzy"});
    Engines e = make_engines(o);
    bind(e);
    std::vector<ucp::EvaluationRow> rows;
    if (!o.observations.empty()) {
        rows = ucp::load_observations(o.observations);
    } else {
        const auto corpus = ucp::load_corpus(o.corpus);
        rows = ucp::rows_from_corpus(corpus, models, e.options,
                                     [](const std::string& w) { print_warning(w); });
    }
    const auto report = ucp::evaluate(rows, models, o.by_stage);
    emit(o, ucp::report::evaluation_table(report).render(output_format(o)));
    return kOk;
}

int run_corpus_summary(const Options& o) {
    const auto corpus = ucp::load_corpus(o.corpus);
    emit(o, ucp::report::project_summary_table(corpus).render(output_format(o)));
    return kOk;
}

void add_policy_options(CLI::App* cmd, Options& o) {
    auto* w = cmd->add_option("--extension-weight", o.extension_weight,
                              "Weight of each extension-part transaction, in [0, 1] (default 1.0)");
    auto* p = cmd->add_option("--policy", o.policy, "Named extension policy: full (1.0) or discounted (0.3)")
                  ->check(CLI::IsMember({"full", "discounted"}));
    w->excludes(p);
}

void add_format_options(CLI::App* cmd, Options& o) {
    cmd->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"table", "csv"}));
    cmd->add_option("-o,--output", o.output, "Write the report to a file instead of stdout");
}

}  // namespace

int main(int argc, char** argv) {
    Options o;
    CLI::App app{"Use case points sizing: Karner, fuzzy-graded and neural-network estimators"};
    app.require_subcommand(1, 1);

    auto* estimate = app.add_subcommand("estimate", "Estimate size and effort for every project in a corpus");
    estimate->add_option("--corpus", o.corpus, "Corpus file")->required();
    estimate->add_option("--models", o.models, "Models to run: karner, fuzzy, mlp (default karner,fuzzy)")
        ->delimiter(',');
    estimate->add_option("--mlp-model", o.mlp_model, "Trained network file (enables the mlp model)");
    estimate->add_option("--rate", o.rate, "Effort rate: schneider (20/28 ph/UCP by rule) or karner (flat 20)")
        ->check(CLI::IsMember({"schneider", "karner"}));
    estimate->add_flag("--force-rate", o.force_rate, "Apply 28 ph/UCP to at-risk teams instead of omitting effort");
    estimate->add_option("--fuzzy-config", o.fuzzy_config, "Fuzzy configuration file (default: built-in)");
    add_policy_options(estimate, o);
    add_format_options(estimate, o);

    auto* fuzzy_table = app.add_subcommand("fuzzy-table", "Print Karner and adjusted use-case weights for 1..10");
    fuzzy_table->add_option("--fuzzy-config", o.fuzzy_config, "Fuzzy configuration file (default: built-in)");
    add_format_options(fuzzy_table, o);

    auto* train = app.add_subcommand("train", "Train the size network on projects with known actuals");
    train->add_option("--corpus", o.corpus, "Corpus file")->required();
    train->add_option("--out", o.model_out, "Model file to write")->required();
    train->add_option("--seed", o.seed, "Seed for initialization and random splits");
    train->add_option("--algorithm", o.algorithm, "lm (Levenberg-Marquardt) or backprop")
        ->check(CLI::IsMember({"lm", "backprop"}));
    train->add_option("--epochs", o.epochs, "Maximum epochs")->check(CLI::PositiveNumber);
    train->add_option("--hidden", o.hidden, "Hidden units (14..25)")->check(CLI::Range(14, 25));
    train->add_option("--learning-rate", o.learning_rate, "Step size for backprop")->check(CLI::PositiveNumber);
    auto* ids = train->add_option("--train-ids", o.train_ids, "Train only on these project ids")->delimiter(',');
    auto* frac = train->add_option("--train-fraction", o.train_fraction, "Train on a seeded random fraction");
    ids->excludes(frac);
    train->add_flag("--force-rate", o.force_rate, "Convert at-risk effort actuals with 28 ph/UCP");
    add_policy_options(train, o);
    train->add_option("-o,--output", o.output, "Write the training summary to a file instead of stdout");

    auto* predict = app.add_subcommand("predict", "Estimate sizes with a trained network");
    predict->add_option("--corpus", o.corpus, "Corpus file")->required();
    predict->add_option("--mlp-model", o.mlp_model, "Trained network file")->required();
    predict->add_option("--rate", o.rate, "Effort rate: schneider or karner")
        ->check(CLI::IsMember({"schneider", "karner"}));
    predict->add_flag("--force-rate", o.force_rate, "Apply 28 ph/UCP to at-risk teams");
    add_policy_options(predict, o);
    add_format_options(predict, o);

    auto* evaluate = app.add_subcommand("evaluate", "Compare models against actual sizes (MMRE, MMER, mean error)");
    auto* corpus_opt = evaluate->add_option("--corpus", o.corpus, "Corpus with actuals");
    auto* obs_opt = evaluate->add_option("--observations", o.observations, "Precomputed actual/estimate pairs")
                        ;
    corpus_opt->excludes(obs_opt);
    evaluate->add_option("--models", o.models, "Models to compare; the first is the baseline (default karner,fuzzy)")
        ->delimiter(',');
    evaluate->add_option("--mlp-model", o.mlp_model, "Trained network file (enables the mlp model)");
    evaluate->add_flag("--by-stage", o.by_stage, "Group projects by extend/include share");
    evaluate->add_flag("--force-rate", o.force_rate, "Convert at-risk effort actuals with 28 ph/UCP");
    evaluate->add_option("--fuzzy-config", o.fuzzy_config, "Fuzzy configuration file (default: built-in)");
    add_policy_options(evaluate, o);
    add_format_options(evaluate, o);

    auto* summary = app.add_subcommand("corpus-summary", "List projects with stage, TF, EF and actuals");
    summary->add_option("--corpus", o.corpus, "Corpus file")->required();
    add_format_options(summary, o);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kValidation;
    }

    try {
        if (*evaluate && o.corpus.empty() && o.observations.empty())
            throw ucp::ValidationError("evaluate", "", "one of --corpus or --observations is required");
        if (*estimate) return run_estimate(o, {"karner", "fuzzy"});
        if (*fuzzy_table) return run_fuzzy_table(o);
        if (*train) return run_train(o);
        if (*predict) {
            o.models = {"mlp"};
            return run_estimate(o, {"mlp"});
        }
        if (*evaluate) return run_evaluate(o);
        if (*summary) return run_corpus_summary(o);
    } catch (const ucp::ValidationError& e) {
        std::cerr << "validation error:\n" << e.what() << "\n";
        return kValidation;
    } catch (const ucp::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kValidation;
    } catch (const ucp::IoError& e) {
        std::cerr << "I/O error: " << e.what() << "\n";
        return kIo;
    } catch (const ucp::NumericError& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return kNumeric;
    } catch (const ucp::TeamRiskError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kValidation;
    }
    return kOk;
}
