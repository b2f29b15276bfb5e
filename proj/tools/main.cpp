#include <string>

#include "CLI11.hpp"
#include "svdstack/cli.hpp"

namespace {

void add_common_flags(CLI::App* cmd, svdstack::RunConfig& config) {
    cmd->add_option("--seed", config.seed, "64-bit run seed");
    cmd->add_option("--output-dir", config.output_dir, "directory for all outputs");
}

void add_sampling_flags(CLI::App* cmd, svdstack::RunConfig& config,
                        std::string& tfidf_variant) {
    cmd->add_option("--context-dims", config.context_dims,
                    "dimensionality r of the left/right context vectors");
    cmd->add_option("--k", config.k, "embedding dimensionality");
    cmd->add_option("--n-trigrams", config.n_trigrams, "trigram sample size");
    cmd->add_option("--n-pairs", config.n_pairs, "number of word pairs");
    cmd->add_option("--freq-lo", config.freq_lo, "pair word minimum corpus frequency");
    cmd->add_option("--freq-hi", config.freq_hi, "pair word maximum corpus frequency");
    cmd->add_option("--min-occurrences", config.min_occurrences,
                    "minimum central-word trigrams per pair word");
    cmd->add_option("--tfidf-variant", tfidf_variant, "tf-idf weighting: ln | smooth");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Stacked-SVD trigram representations and focality diagnostics"};
    app.require_subcommand(1);

    svdstack::RunConfig config;
    std::string tfidf_variant = "ln";
    std::string mode = "1layer";
    std::string rep_a, rep_b, rep, vocab_tsv = "vocab.tsv", trigrams_tsv = "trigrams.tsv";
    std::string word_a, word_b;
    double theta = 0.99;
    Eigen::Index max_subset = 2;

    CLI::App* embed = app.add_subcommand(
        "embed", "build SVD1/SVD2 representations from a sentence-per-line corpus");
    embed->add_option("--corpus", config.corpus_path, "UTF-8 corpus, one sentence per line")
        ->required();
    embed->add_option("--mode", mode, "1layer | 2layer")
        ->check(CLI::IsMember({"1layer", "2layer"}));
    embed->add_flag("!--no-normalize-concatenation", config.normalize_concatenation,
                    "skip row-normalizing the assembled trigram matrix");
    add_sampling_flags(embed, config, tfidf_variant);
    add_common_flags(embed, config);

    CLI::App* diagnose =
        app.add_subcommand("diagnose", "column-correlation histograms and their shift");
    diagnose->add_option("--rep-a", rep_a, "first representation (.mat)")->required();
    diagnose->add_option("--rep-b", rep_b, "second representation (.mat)")->required();
    diagnose->add_option("--bin-width", config.bin_width, "histogram bin width");
    diagnose->add_option("--floor", config.floor_abs, "|c| below this counts as zero");
    diagnose
        ->add_option("--diagonal-mode", config.diagonal_mode,
                     "include the correlation-matrix diagonal (true | false)")
        ->transform(CLI::IsMember({"true", "1", "false", "0"}))
        ->default_str("true");
    add_common_flags(diagnose, config);

    CLI::App* discriminate = app.add_subcommand(
        "discriminate", "word-pair threshold discrimination for two representations");
    discriminate->add_option("--rep-a", rep_a, "first representation (.mat)")->required();
    discriminate->add_option("--rep-b", rep_b, "second representation (.mat)")->required();
    discriminate->add_option("--vocab", vocab_tsv, "vocabulary TSV from embed");
    discriminate->add_option("--trigrams", trigrams_tsv, "trigram TSV from embed");
    add_sampling_flags(discriminate, config, tfidf_variant);
    add_common_flags(discriminate, config);

    CLI::App* focality = app.add_subcommand(
        "focality", "smallest dimension subset reaching a target accuracy for one pair");
    focality->add_option("--rep", rep, "representation (.mat)")->required();
    focality->add_option("--trigrams", trigrams_tsv, "trigram TSV from embed");
    focality->add_option("--word-a", word_a, "class-1 central word")->required();
    focality->add_option("--word-b", word_b, "class-2 central word")->required();
    focality->add_option("--theta", theta, "target accuracy in [0,1]");
    focality->add_option("--max-subset", max_subset, "largest subset size to try (<= 3)");
    add_common_flags(focality, config);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? svdstack::kExitOk : svdstack::kExitUsage;
    }

    try {
        config.tfidf_variant = svdstack::tfidf_variant_from_string(tfidf_variant);
        config.mode = mode == "2layer" ? svdstack::RunConfig::Mode::TwoLayer
                                       : svdstack::RunConfig::Mode::OneLayer;
        if (embed->parsed()) {
            svdstack::cmd_embed(config);
        } else if (diagnose->parsed()) {
            svdstack::cmd_diagnose(config, rep_a, rep_b);
        } else if (discriminate->parsed()) {
            svdstack::cmd_discriminate(config, rep_a, rep_b, vocab_tsv, trigrams_tsv);
        } else if (focality->parsed()) {
            svdstack::cmd_focality(config, rep, trigrams_tsv, word_a, word_b, theta,
                                   max_subset);
        }
    } catch (...) {
        return svdstack::exit_code_for_current_exception();
    }
    return svdstack::kExitOk;
}
