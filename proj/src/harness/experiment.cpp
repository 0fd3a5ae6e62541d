#include "climstance/harness/experiment.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include "climstance/common/error.hpp"
#include "climstance/common/paths.hpp"
#include "climstance/model/checkpoint.hpp"
#include "climstance/stance/propagate.hpp"
#include "climstance/text/pipeline.hpp"
#include "climstance/topic/topic_model.hpp"

namespace climstance::harness {

namespace {

nlohmann::ordered_json metrics_to_json(const TaskMetrics& m) {
    nlohmann::ordered_json per_class = nlohmann::ordered_json::object();
    for (const auto& [label, f1] : m.per_class_f1) per_class[label] = f1;
    nlohmann::ordered_json confusion;
    confusion["labels"] = m.confusion.labels;
    confusion["counts"] = m.confusion.counts;
    return nlohmann::ordered_json{{"accuracy", m.accuracy},
                                  {"macro_f1", m.macro_f1},
                                  {"per_class_f1", std::move(per_class)},
                                  {"confusion", std::move(confusion)}};
}

nlohmann::ordered_json aggregate_to_json(const TaskAggregate& a) {
    return nlohmann::ordered_json{
        {"accuracy", {{"mean", a.accuracy_mean}, {"std", a.accuracy_std}}},
        {"macro_f1", {{"mean", a.macro_f1_mean}, {"std", a.macro_f1_std}}}};
}

TaskAggregate aggregate(const std::vector<FoldEntry>& folds, bool stance) {
    std::vector<double> acc, f1;
    for (const auto& f : folds) {
        const auto& m = stance ? f.stance : f.sentiment;
        acc.push_back(m->accuracy);
        f1.push_back(m->macro_f1);
    }
    TaskAggregate a;
    a.accuracy_mean = mean(acc);
    a.accuracy_std = sample_std(acc);
    a.macro_f1_mean = mean(f1);
    a.macro_f1_std = sample_std(f1);
    return a;
}

std::uint64_t fold_seed(std::uint64_t base, int fold, std::uint64_t salt) {
    return base + salt * static_cast<std::uint64_t>(fold + 1);
}

}  // namespace

PreparedData prepare_data(const ExperimentConfig& config,
                          const std::vector<text::TweetRecord>& corpus) {
    const std::string data_dir = config.data_dir.empty() ? default_data_dir() : config.data_dir;
    text::PipelineOptions popts;
    popts.max_tokens = static_cast<std::size_t>(config.max_tokens);
    const text::TextPipeline pipeline = text::TextPipeline::from_data_dir(data_dir, popts);

    const bool topic = config.features == model::Features::TextTopic;
    topic::TopicModel topic_model;
    if (topic) {
        if (!config.topics_path.empty()) {
            if (!std::filesystem::exists(config.topics_path))
                throw ConfigError("topics file not found: " + config.topics_path);
            topic_model = topic::load_external(config.topics_path,
                                               static_cast<std::size_t>(config.p));
        } else {
            std::unordered_set<std::string> excluded;
            if (!config.seeds_path.empty()) {
                const auto seeds = stance::SeedSet::load(config.seeds_path);
                excluded.insert(seeds.denier.begin(), seeds.denier.end());
                excluded.insert(seeds.believer.begin(), seeds.believer.end());
            }
            std::vector<std::pair<std::string, std::vector<std::string>>> docs;
            docs.reserve(corpus.size());
            for (const auto& r : corpus) docs.emplace_back(r.id, pipeline.topic_tokens(r, excluded));
            topic::BaselineOptions bopts;
            bopts.k_topics = config.topic_k;
            bopts.seed = config.seed;
            topic_model = topic::fit_baseline(docs, bopts);
        }
    }

    const bool need_stance = config.variant != model::Variant::SingleSentiment;
    const bool need_sentiment = config.variant != model::Variant::SingleStance;

    PreparedData out;
    std::set<std::string> vocab;
    for (const auto& record : corpus) {
        if ((need_stance && !record.stance_label) || (need_sentiment && !record.sentiment_label)) {
            ++out.dropped;
            continue;
        }
        Sample s;
        s.id = record.id;
        s.input.text_tokens =
            pipeline.tokenize_record(record, config.include_hashtag_tokens).tokens;
        if (topic) {
            const auto feature = topic::top_words(topic_model, record.id, config.m, config.p);
            s.input.topic_tokens = feature.words;
        }
        if (need_stance) s.targets.stance = static_cast<int>(*record.stance_label);
        if (need_sentiment) s.targets.sentiment = static_cast<int>(*record.sentiment_label);
        vocab.insert(s.input.text_tokens.begin(), s.input.text_tokens.end());
        vocab.insert(s.input.topic_tokens.begin(), s.input.topic_tokens.end());
        out.primary_labels.push_back(need_stance ? text::to_string(*record.stance_label)
                                                 : text::to_string(*record.sentiment_label));
        out.samples.push_back(std::move(s));
    }
    out.vocabulary.assign(vocab.begin(), vocab.end());
    return out;
}

nlohmann::ordered_json FoldReport::to_json() const {
    nlohmann::ordered_json j;
    j["config"] = config.to_json();
    j["records_used"] = records_used;
    j["records_dropped"] = records_dropped;
    j["folds"] = nlohmann::ordered_json::array();
    for (const auto& f : folds) {
        nlohmann::ordered_json fj;
        fj["fold"] = f.fold;
        fj["best_epoch"] = f.best_epoch;
        if (f.stance) fj["stance"] = metrics_to_json(*f.stance);
        if (f.sentiment) fj["sentiment"] = metrics_to_json(*f.sentiment);
        j["folds"].push_back(std::move(fj));
    }
    nlohmann::ordered_json agg = nlohmann::ordered_json::object();
    if (stance) agg["stance"] = aggregate_to_json(*stance);
    if (sentiment) agg["sentiment"] = aggregate_to_json(*sentiment);
    j["aggregate"] = std::move(agg);
    return j;
}

std::string FoldReport::to_text() const {
    std::ostringstream out;
    out << std::fixed << std::setprecision(4);
    out << "experiment: " << model::to_string(config.variant) << " / "
        << model::to_string(config.features) << "  (k=" << config.folds << ", seed=" << config.seed
        << ", epochs=" << config.epochs << ")\n";
    out << "records: " << records_used << " used, " << records_dropped << " dropped\n\n";
    out << std::left << std::setw(8) << "fold";
    if (stance) out << std::setw(12) << "st_acc" << std::setw(12) << "st_f1";
    if (sentiment) out << std::setw(12) << "se_acc" << std::setw(12) << "se_f1";
    out << std::setw(10) << "best_ep" << "\n";
    for (const auto& f : folds) {
        out << std::left << std::setw(8) << f.fold;
        if (f.stance) out << std::setw(12) << f.stance->accuracy << std::setw(12) << f.stance->macro_f1;
        if (f.sentiment)
            out << std::setw(12) << f.sentiment->accuracy << std::setw(12) << f.sentiment->macro_f1;
        out << std::setw(10) << f.best_epoch << "\n";
    }
    auto aggregate_row = [&](const char* name, auto pick) {
        out << std::left << std::setw(8) << name;
        if (stance) out << std::setw(12) << pick(*stance).first << std::setw(12) << pick(*stance).second;
        if (sentiment)
            out << std::setw(12) << pick(*sentiment).first << std::setw(12) << pick(*sentiment).second;
        out << "\n";
    };
    aggregate_row("mean", [](const TaskAggregate& a) {
        return std::pair<double, double>(a.accuracy_mean, a.macro_f1_mean);
    });
    aggregate_row("std", [](const TaskAggregate& a) {
        return std::pair<double, double>(a.accuracy_std, a.macro_f1_std);
    });
    return out.str();
}

FoldReport run_experiment(const ExperimentConfig& config) {
    config.validate();
    const auto corpus = text::read_jsonl(config.corpus_path);
    const PreparedData data = prepare_data(config, corpus);
    if (data.samples.empty()) throw DataError("no usable labeled records in the corpus");

    const bool use_stance = config.variant != model::Variant::SingleSentiment;
    const bool use_sentiment = config.variant != model::Variant::SingleStance;

    FoldReport report;
    report.config = config;
    report.records_used = static_cast<int>(data.samples.size());
    report.records_dropped = data.dropped;

    const auto splits = stratified_kfold(data.primary_labels, config.folds, config.seed);

    std::filesystem::path out_dir;
    if (!config.output_dir.empty()) {
        out_dir = config.output_dir;
        std::filesystem::create_directories(out_dir);
    }

    for (int f = 0; f < config.folds; ++f) {
        const auto& split = splits[static_cast<std::size_t>(f)];
        try {
            // Validation carve-out happens before oversampling so duplicated
            // minority records cannot leak into the selection set.
            std::vector<int> train_idx = split.train;
            std::mt19937_64 val_rng(fold_seed(config.seed, f, 0x9e3779b9ULL));
            std::shuffle(train_idx.begin(), train_idx.end(), val_rng);
            std::size_t val_count = static_cast<std::size_t>(config.val_fraction *
                                                             static_cast<double>(train_idx.size()));
            if (config.val_fraction > 0.0 && val_count == 0 && train_idx.size() > 1) val_count = 1;
            std::vector<int> val_idx(train_idx.begin(),
                                     train_idx.begin() + static_cast<std::ptrdiff_t>(val_count)),
                fit_idx(train_idx.begin() + static_cast<std::ptrdiff_t>(val_count), train_idx.end());
            std::sort(val_idx.begin(), val_idx.end());
            std::sort(fit_idx.begin(), fit_idx.end());
            if (use_stance)
                fit_idx = oversample_minority(fit_idx, data.primary_labels,
                                              fold_seed(config.seed, f, 0x85ebca6bULL));

            auto collect = [&](const std::vector<int>& idx) {
                std::vector<Sample> out;
                out.reserve(idx.size());
                for (int i : idx) out.push_back(data.samples[static_cast<std::size_t>(i)]);
                return out;
            };
            const std::vector<Sample> fit_set = collect(fit_idx);
            const std::vector<Sample> val_set = collect(val_idx);
            const std::vector<Sample> test_set = collect(split.test);

            model::EmbeddingProvider provider =
                config.embeddings_path.empty()
                    ? model::EmbeddingProvider::trainable(data.vocabulary, config.embed_dim,
                                                          fold_seed(config.seed, f, 0xc2b2ae35ULL))
                    : model::EmbeddingProvider::from_file(config.embeddings_path);
            model::Model model(config.model_config(), std::move(provider),
                               fold_seed(config.seed, f, 0x27d4eb2fULL));

            TrainOptions topts;
            topts.epochs = config.epochs;
            topts.learning_rate = config.learning_rate;
            topts.grad_window = config.grad_window;
            topts.seed = fold_seed(config.seed, f, 0x165667b1ULL);
            const TrainResult trained = train_model(model, fit_set, val_set, topts);

            FoldEntry entry;
            entry.fold = f + 1;
            entry.best_epoch = trained.best_epoch;
            if (use_stance)
                entry.stance = metrics(predict_labels(model, test_set, "stance"),
                                       gold_labels(test_set, "stance"));
            if (use_sentiment)
                entry.sentiment = metrics(predict_labels(model, test_set, "sentiment"),
                                          gold_labels(test_set, "sentiment"));
            report.folds.push_back(std::move(entry));

            if (!out_dir.empty())
                model::save_checkpoint((out_dir / ("fold_" + std::to_string(f + 1) + ".ckpt.json"))
                                           .string(),
                                       model);
        } catch (const ConfigError& e) {
            throw ConfigError("fold " + std::to_string(f + 1) + ": " + e.what());
        } catch (const DataError& e) {
            throw DataError("fold " + std::to_string(f + 1) + ": " + e.what());
        } catch (const NumericError& e) {
            throw NumericError("fold " + std::to_string(f + 1) + ": " + e.what());
        } catch (const Error& e) {
            throw Error("fold " + std::to_string(f + 1) + ": " + e.what());
        }
    }

    if (use_stance) report.stance = aggregate(report.folds, true);
    if (use_sentiment) report.sentiment = aggregate(report.folds, false);

    if (!out_dir.empty()) {
        std::ofstream json_out(out_dir / "report.json");
        if (!json_out) throw DataError("cannot write report.json under " + out_dir.string());
        json_out << report.to_json().dump(2) << "\n";
        std::ofstream text_out(out_dir / "report.txt");
        if (!text_out) throw DataError("cannot write report.txt under " + out_dir.string());
        text_out << report.to_text();
    }
    return report;
}

}  // namespace climstance::harness
