#include "svdstack/cli.hpp"

#include <fstream>
#include <iostream>

#include "json.hpp"
#include "svdstack/diagnostics.hpp"
#include "svdstack/persist.hpp"

namespace svdstack {

namespace {

using nlohmann::json;

std::uint64_t hash_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot hash " + path.string());
    std::uint64_t h = 0xcbf29ce484222325ULL;
    char buf[1 << 16];
    while (in.read(buf, sizeof(buf)) || in.gcount() > 0)
        h = fnv1a64(buf, static_cast<std::size_t>(in.gcount()), h);
    return h;
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

void write_json_file(const json& j, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write " + path.string());
    out << j.dump(2) << '\n';
    if (!out) throw DataError("write failed: " + path.string());
}

json accuracy_json(const ThresholdRule& rule) {
    return json{{"numerator", rule.correct},
                {"denominator", rule.total},
                {"decimal", rule.accuracy()}};
}

json rule_json(const ThresholdRule& rule) {
    return json{{"dimension", rule.dimension},
                {"theta", rule.theta},
                {"direction", to_string(rule.direction)},
                {"accuracy", accuracy_json(rule)}};
}

json report_json(const DiscriminationReport& report) {
    json per_pair = json::array();
    for (const PairOutcome& out : report.per_pair) {
        per_pair.push_back(json{{"word_a", out.pair.a},
                                {"word_b", out.pair.b},
                                {"best_accuracy_a", accuracy_json(out.rule_a)},
                                {"best_accuracy_b", accuracy_json(out.rule_b)},
                                {"best_rule_a", rule_json(out.rule_a)},
                                {"best_rule_b", rule_json(out.rule_b)}});
    }
    return json{{"per_pair", per_pair},
                {"wins_a", report.wins_a},
                {"ties", report.ties},
                {"wins_b", report.wins_b},
                {"mean_accuracy_diff", report.mean_accuracy_diff},
                {"mean_relative_diff", report.mean_relative_diff},
                {"p_value", report.p_value}};
}

Representation representation_from_files(const std::filesystem::path& matrix_path,
                                         const TrigramSample* trigrams) {
    LoadedMatrix loaded = read_matrix(matrix_path);
    Representation rep;
    rep.matrix = std::move(loaded.values);
    const std::string& prov = loaded.meta.provenance;
    if (auto slash = prov.find('/'); slash != std::string::npos) {
        rep.method = method_from_string(prov.substr(0, slash));
        rep.layer = layer_from_string(prov.substr(slash + 1));
    }
    if (trigrams) {
        if (rep.rows() != static_cast<Eigen::Index>(trigrams->size()))
            throw DataError(matrix_path.string() + " has " + std::to_string(rep.rows()) +
                            " rows but the trigram file lists " +
                            std::to_string(trigrams->size()));
        rep.row_labels.reserve(trigrams->size());
        for (const Trigram& t : trigrams->trigrams) rep.row_labels.push_back(t.text());
    }
    return rep;
}

json config_json(const RunConfig& c) {
    return json{{"corpus", c.corpus_path.string()},
                {"context_dims", c.context_dims},
                {"k", c.k},
                {"n_trigrams", c.n_trigrams},
                {"n_pairs", c.n_pairs},
                {"freq_lo", c.freq_lo},
                {"freq_hi", c.freq_hi},
                {"min_occurrences", c.min_occurrences},
                {"seed", c.seed},
                {"mode", c.mode == RunConfig::Mode::OneLayer ? "1layer" : "2layer"},
                {"tfidf_variant", to_string(c.tfidf_variant)},
                {"diagonal_mode", c.diagonal_mode},
                {"bin_width", c.bin_width},
                {"floor_abs", c.floor_abs},
                {"normalize_concatenation", c.normalize_concatenation}};
}

MatrixMeta representation_meta(const Representation& rep, const RunConfig& config,
                               const std::string& row_label_file) {
    MatrixMeta meta;
    meta.provenance = to_string(rep.method) + "/" + to_string(rep.layer);
    meta.k = rep.k();
    meta.seed = config.seed;
    meta.state_flags = {"row-unit-norm"};
    meta.row_label_file = row_label_file;
    meta.extra_json = config_json(config).dump();
    return meta;
}

}  // namespace

void RunConfig::validate() const {
    if (context_dims < 1) throw UsageError("context-dims must be positive");
    if (k < 1) throw UsageError("k must be positive");
    if (n_trigrams < 1) throw UsageError("n-trigrams must be positive");
    if (n_pairs < 1) throw UsageError("n-pairs must be positive");
    if (min_occurrences < 1) throw UsageError("min-occurrences must be positive");
    if (freq_lo > freq_hi) throw UsageError("freq-lo must not exceed freq-hi");
    if (bin_width <= 0.0) throw UsageError("bin-width must be positive");
    if (floor_abs <= 0.0) throw UsageError("floor must be positive");
}

void cmd_embed(const RunConfig& config) {
    config.validate();
    std::filesystem::create_directories(config.output_dir);

    // Manifest first, so interrupted runs leave their parameters behind.
    json manifest{{"command", "embed"}, {"parameters", config_json(config)}};
    const std::filesystem::path manifest_path = config.output_dir / "manifest.json";
    write_json_file(manifest, manifest_path);

    PipelineParams params;
    params.n_trigrams = config.n_trigrams;
    params.context_dim = config.context_dims;
    params.k = config.k;
    params.seed = config.seed;
    params.tfidf_variant = config.tfidf_variant;
    params.normalize_concatenation = config.normalize_concatenation;

    const TokenizedCorpus corpus = tokenize_file(config.corpus_path);
    const bool two_layer = config.mode == RunConfig::Mode::TwoLayer;
    PipelineResult result =
        two_layer ? pipeline_2layer(corpus, params) : pipeline_1layer(corpus, params);

    write_vocab_tsv(result.vocab, config.output_dir / "vocab.tsv");
    write_trigrams_tsv(result.trigrams, config.output_dir / "trigrams.tsv");
    write_matrix(result.svd1.matrix, config.output_dir / "svd1.mat",
                 representation_meta(result.svd1, config, "trigrams.tsv"));
    write_matrix(result.svd2.matrix, config.output_dir / "svd2.mat",
                 representation_meta(result.svd2, config, "trigrams.tsv"));
    if (result.word_svd1)
        write_matrix(result.word_svd1->matrix, config.output_dir / "word_svd1.mat",
                     representation_meta(*result.word_svd1, config, "vocab.tsv"));

    std::vector<std::string> names = {"vocab.tsv", "trigrams.tsv", "svd1.mat",
                                      "svd1.mat.meta.json", "svd2.mat",
                                      "svd2.mat.meta.json"};
    if (result.word_svd1) {
        names.push_back("word_svd1.mat");
        names.push_back("word_svd1.mat.meta.json");
    }
    json outputs;
    for (const std::string& name : names) {
        const auto path = config.output_dir / name;
        outputs[name] = json{{"bytes", std::filesystem::file_size(path)},
                             {"fnv1a64", hex64(hash_file(path))}};
    }
    manifest["outputs"] = outputs;
    manifest["zero_trigram_rows"] = result.zero_rows;
    write_json_file(manifest, manifest_path);
}

void cmd_diagnose(const RunConfig& config, const std::filesystem::path& rep_a,
                  const std::filesystem::path& rep_b) {
    config.validate();
    std::filesystem::create_directories(config.output_dir);

    Representation a = representation_from_files(rep_a, nullptr);
    Representation b = representation_from_files(rep_b, nullptr);
    if (a.k() != b.k())
        throw DataError("representations disagree on k: " + std::to_string(a.k()) +
                        " vs " + std::to_string(b.k()));

    const CorrelationSummary summary_a = log_abs_histogram(
        column_correlations(a), config.bin_width, config.floor_abs, config.diagonal_mode);
    const CorrelationSummary summary_b = log_abs_histogram(
        column_correlations(b), config.bin_width, config.floor_abs, config.diagonal_mode);

    std::string stem_a = rep_a.stem().string();
    std::string stem_b = rep_b.stem().string();
    if (stem_a == stem_b) {
        stem_a += "_a";
        stem_b += "_b";
    }
    write_histogram_csv(summary_a, config.output_dir / (stem_a + ".hist.csv"));
    write_histogram_csv(summary_b, config.output_dir / (stem_b + ".hist.csv"));

    const double shift = histogram_shift(summary_a, summary_b);
    json j{{"rep_a", rep_a.string()},
           {"rep_b", rep_b.string()},
           {"mean_log10_offdiag_a", summary_a.mean_log10_offdiag},
           {"mean_log10_offdiag_b", summary_b.mean_log10_offdiag},
           {"mean_shift_a_minus_b", shift},
           {"bin_width", config.bin_width},
           {"floor_abs", config.floor_abs},
           {"include_diagonal", config.diagonal_mode}};
    write_json_file(j, config.output_dir / "shift.json");
    std::cout << "mean_shift_a_minus_b = " << shift << "\n";
}

void cmd_discriminate(const RunConfig& config, const std::filesystem::path& rep_a,
                      const std::filesystem::path& rep_b,
                      const std::filesystem::path& vocab_tsv,
                      const std::filesystem::path& trigrams_tsv) {
    config.validate();
    std::filesystem::create_directories(config.output_dir);

    const Vocabulary vocab = read_vocab_tsv(vocab_tsv);
    const TrigramSample trigrams = read_trigrams_tsv(trigrams_tsv);
    const Representation a = representation_from_files(rep_a, &trigrams);
    const Representation b = representation_from_files(rep_b, &trigrams);

    const WordPairSet pairs = sample_word_pairs(
        vocab, trigrams, config.n_pairs, config.freq_lo, config.freq_hi,
        config.min_occurrences, mix_seed(config.seed, kSeedWordPairs));

    const DiscriminationReport report = compare_representations(a, b, trigrams, pairs);

    json j = report_json(report);
    j["rep_a"] = rep_a.string();
    j["rep_b"] = rep_b.string();
    j["parameters"] = config_json(config);
    write_json_file(j, config.output_dir / "discrimination.json");
    std::cout << "wins_a=" << report.wins_a << " ties=" << report.ties
              << " wins_b=" << report.wins_b << " p=" << report.p_value << "\n";
}

void cmd_focality(const RunConfig& config, const std::filesystem::path& rep,
                  const std::filesystem::path& trigrams_tsv, const std::string& word_a,
                  const std::string& word_b, double theta, Eigen::Index max_subset) {
    config.validate();
    std::filesystem::create_directories(config.output_dir);

    const TrigramSample trigrams = read_trigrams_tsv(trigrams_tsv);
    const Representation r = representation_from_files(rep, &trigrams);

    const FocalityResult result =
        focality_measure(r, trigrams, WordPair{word_a, word_b}, theta, max_subset);

    json j{{"word_a", word_a},
           {"word_b", word_b},
           {"theta", result.theta},
           {"max_subset", result.max_subset}};
    if (result.k_star) {
        const ConjunctiveRule& w = *result.witness;
        json dims = json::array();
        for (std::size_t i = 0; i < w.dims.size(); ++i) {
            dims.push_back(json{{"dimension", w.dims[i]},
                                {"theta", w.thetas[i]},
                                {"direction", to_string(w.directions[i])}});
        }
        j["k_star"] = *result.k_star;
        j["witness"] = json{{"predicates", dims},
                            {"predicts_first", w.predicts_first},
                            {"accuracy", json{{"numerator", w.correct},
                                              {"denominator", w.total},
                                              {"decimal", w.accuracy()}}}};
        std::cout << "k_star=" << *result.k_star << " accuracy=" << w.accuracy() << "\n";
    } else {
        j["k_star"] = nullptr;
        std::cout << "k_star=absent (threshold " << theta << " unattainable with subsets up to "
                  << max_subset << ")\n";
    }
    write_json_file(j, config.output_dir / "focality.json");
}

int exit_code_for_current_exception() {
    try {
        throw;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const NumericError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    }
}

}  // namespace svdstack
