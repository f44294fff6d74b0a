// tec: entity-cluster topic modeling pipeline driver.
//
// Subcommands wire the library stages together through files:
//   fuse -> extract -> train -> infer / topics / eval
// Exit codes: 0 success, 1 runtime error, 2 usage error.

#include <cstdint>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <tec/tec.hpp>

namespace {

// JSON config files mirroring the flags: top-level keys set main-app options,
// nested objects scope to subcommands, e.g. {"train": {"topics": 3}}.
class JsonConfig final : public CLI::Config {
  public:
    std::string to_config(const CLI::App* app, bool default_also, bool, std::string) const override {
        return dump(app, default_also).dump(2) + "\n";
    }

    std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
        nlohmann::json j;
        try {
            input >> j;
        } catch (const nlohmann::json::exception& e) {
            throw CLI::ConfigError(std::string("config is not valid JSON: ") + e.what());
        }
        if (!j.is_object()) throw CLI::ConfigError("config root must be a JSON object");
        std::vector<CLI::ConfigItem> items;
        walk(j, {}, items);
        return items;
    }

  private:
    static void walk(const nlohmann::json& obj, const std::vector<std::string>& parents,
                     std::vector<CLI::ConfigItem>& items) {
        for (auto it = obj.begin(); it != obj.end(); ++it) {
            const nlohmann::json& value = it.value();
            if (value.is_object()) {
                std::vector<std::string> deeper = parents;
                deeper.push_back(it.key());
                walk(value, deeper, items);
                continue;
            }
            CLI::ConfigItem item;
            item.parents = parents;
            item.name = it.key();
            if (value.is_array()) {
                for (const auto& element : value) item.inputs.push_back(scalar(element));
            } else {
                item.inputs.push_back(scalar(value));
            }
            items.push_back(std::move(item));
        }
    }

    static std::string scalar(const nlohmann::json& value) {
        if (value.is_string()) return value.get<std::string>();
        if (value.is_boolean()) return value.get<bool>() ? "true" : "false";
        return value.dump();
    }

    static nlohmann::json dump(const CLI::App* app, bool default_also) {
        nlohmann::json j = nlohmann::json::object();
        for (const CLI::Option* opt : app->get_options({})) {
            if (!opt->get_configurable()) continue;
            const std::string name = opt->get_single_name();
            if (name.empty() || name == "config") continue;
            if (opt->count() > 0) {
                const auto& results = opt->results();
                if (results.size() == 1) {
                    j[name] = results.front();
                } else {
                    j[name] = results;
                }
            } else if (default_also) {
                j[name] = opt->get_default_str();
            }
        }
        for (const CLI::App* sub : app->get_subcommands({})) {
            nlohmann::json nested = dump(sub, default_also);
            if (!nested.empty()) j[sub->get_name()] = std::move(nested);
        }
        return j;
    }
};

// model.json -> model.seed3.json; keeps multi-run outputs side by side.
std::string with_seed_suffix(const std::string& path, std::uint64_t seed) {
    const std::size_t slash = path.find_last_of('/');
    const std::size_t dot = path.find_last_of('.');
    std::ostringstream suffix;
    suffix << ".seed" << seed;
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) {
        return path + suffix.str();
    }
    return path.substr(0, dot) + suffix.str() + path.substr(dot);
}

struct FuseArgs {
    std::string lm, graph, alpha = "1", out;
};

struct ExtractArgs {
    std::string corpus, lexicon, embeddings, out;
    tec::ExtractOptions options;
};

struct TrainArgs {
    std::string corpus, lm, graph, alpha = "1", out;
    int topics = 0;
    int runs = 1;
    tec::KMeansConfig kmeans;
    tec::RerankConfig rerank;
};

struct InferArgs {
    std::string model, lm, graph, corpus, out;
};

struct TopicsArgs {
    std::string model;
    int top = 10;
};

struct EvalArgs {
    std::string model, corpus, out;
    int n = 10;
    int top = 25;
};

}  // namespace

int main(int argc, char** argv) {
    tec::set_log_level_from_env();

    CLI::App app{"entity-cluster topic modeling pipeline"};
    app.require_subcommand(1);
    app.config_formatter(std::make_shared<JsonConfig>());
    app.set_config("--config", "", "JSON config file mirroring the flags");

    FuseArgs fuse_args;
    CLI::App* fuse = app.add_subcommand("fuse", "fuse LM and graph embeddings into one space");
    fuse->add_option("--lm-embeddings", fuse_args.lm, "LM embedding file")->required();
    fuse->add_option("--graph-embeddings", fuse_args.graph, "graph embedding file")->required();
    fuse->add_option("--alpha", fuse_args.alpha, "graph-vs-LM balance (number or 'inf')");
    fuse->add_option("--out", fuse_args.out, "fused embedding file to write")->required();
    fuse->callback([&]() {
        tec::run_fuse(fuse_args.lm, fuse_args.graph, tec::parse_alpha(fuse_args.alpha),
                      fuse_args.out);
    });

    ExtractArgs extract_args;
    CLI::App* extract = app.add_subcommand("extract", "turn raw text into entity documents");
    extract->add_option("--corpus", extract_args.corpus, "raw corpus JSONL")->required();
    extract->add_option("--lexicon", extract_args.lexicon, "surface-form lexicon TSV")->required();
    extract->add_option("--embeddings", extract_args.embeddings, "fused embedding file")
        ->required();
    extract->add_option("--lang", extract_args.options.lang, "language to extract");
    extract->add_option("--threshold", extract_args.options.threshold,
                        "disambiguation cosine threshold");
    extract->add_option("--jobs", extract_args.options.jobs, "worker threads (0 = all cores)")
        ->check(CLI::NonNegativeNumber);
    extract->add_option("--out", extract_args.out, "entitized corpus JSONL to write")->required();
    extract->callback([&]() {
        tec::run_extract(extract_args.corpus, extract_args.lexicon, extract_args.embeddings,
                         extract_args.options, extract_args.out);
    });

    TrainArgs train_args;
    CLI::App* train = app.add_subcommand("train", "fuse, cluster and rerank a topic model");
    train->add_option("--corpus", train_args.corpus, "entitized corpus JSONL")->required();
    train->add_option("--lm-embeddings", train_args.lm, "LM embedding file")->required();
    train->add_option("--graph-embeddings", train_args.graph, "graph embedding file")->required();
    train->add_option("--alpha", train_args.alpha, "graph-vs-LM balance (number or 'inf')");
    train->add_option("--topics", train_args.topics, "number of topics K")
        ->required()
        ->check(CLI::PositiveNumber);
    train->add_option("--seed", train_args.kmeans.seed, "RNG seed");
    train->add_option("--max-iters", train_args.kmeans.max_iters, "Lloyd iteration cap")
        ->check(CLI::PositiveNumber);
    train->add_option("--tol", train_args.kmeans.tol, "centroid-shift stopping tolerance")
        ->check(CLI::NonNegativeNumber);
    train->add_option("--n-redo", train_args.kmeans.n_redo, "restarts, keep lowest inertia")
        ->check(CLI::PositiveNumber);
    train->add_option("--n", train_args.rerank.n, "entities reported per topic")
        ->check(CLI::PositiveNumber);
    train->add_option("--epsilon", train_args.rerank.epsilon, "rerank seed weight");
    train->add_option("--n-track", train_args.rerank.n_track,
                      "per-topic score-table cap (0 = 10*n)")
        ->check(CLI::NonNegativeNumber);
    train->add_flag("--flat-epsilon", train_args.rerank.flat_epsilon,
                    "seed with plain epsilon, not epsilon/(1+d^2)");
    train->add_option("--runs", train_args.runs, "train repeatedly with sequential seeds")
        ->check(CLI::PositiveNumber);
    train->add_option("--out", train_args.out, "model file to write")->required();
    train->callback([&]() {
        tec::TrainOptions options;
        options.k = train_args.topics;
        options.alpha = tec::parse_alpha(train_args.alpha);
        options.kmeans = train_args.kmeans;
        options.rerank = train_args.rerank;
        for (int run = 0; run < train_args.runs; ++run) {
            options.kmeans.seed = train_args.kmeans.seed + static_cast<std::uint64_t>(run);
            const std::string out = train_args.runs == 1
                                        ? train_args.out
                                        : with_seed_suffix(train_args.out, options.kmeans.seed);
            tec::run_train(train_args.corpus, train_args.lm, train_args.graph, options, out);
        }
    });

    InferArgs infer_args;
    CLI::App* infer = app.add_subcommand("infer", "write per-document topic weights");
    infer->add_option("--model", infer_args.model, "model file")->required();
    infer->add_option("--lm-embeddings", infer_args.lm, "LM embedding file")->required();
    infer->add_option("--graph-embeddings", infer_args.graph, "graph embedding file")->required();
    infer->add_option("--corpus", infer_args.corpus, "entitized corpus JSONL")->required();
    infer->add_option("--out", infer_args.out, "weights JSONL to write")->required();
    infer->callback([&]() {
        tec::run_infer(infer_args.model, infer_args.lm, infer_args.graph, infer_args.corpus,
                       infer_args.out);
    });

    TopicsArgs topics_args;
    CLI::App* topics = app.add_subcommand("topics", "print each topic's top entities");
    topics->add_option("--model", topics_args.model, "model file")->required();
    topics->add_option("--top", topics_args.top, "entities per topic")->check(CLI::PositiveNumber);
    topics->callback([&]() { std::cout << tec::run_topics(topics_args.model, topics_args.top); });

    EvalArgs eval_args;
    CLI::App* eval = app.add_subcommand("eval", "score a model against a corpus");
    eval->add_option("--model", eval_args.model, "model file")->required();
    eval->add_option("--corpus", eval_args.corpus, "entitized corpus JSONL")->required();
    eval->add_option("--n", eval_args.n, "top entities per topic for coherence")
        ->check(CLI::Range(2, 1000000));
    eval->add_option("--top", eval_args.top, "top entities per topic for diversity")
        ->check(CLI::PositiveNumber);
    eval->add_option("--out", eval_args.out, "also write the report JSON here");
    eval->callback([&]() {
        const tec::EvalReport report =
            tec::run_eval(eval_args.model, eval_args.corpus, eval_args.n, eval_args.top,
                          eval_args.out);
        std::cout << tec::eval_report_to_json(report).dump(2) << "\n";
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;  // help/version keep 0, usage errors map to 2
    } catch (const tec::Error& e) {
        tec::log_error(e.what());
        return 1;
    } catch (const std::exception& e) {
        tec::log_error(e.what());
        return 1;
    }
    return 0;
}
