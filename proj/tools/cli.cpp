#include "cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include <spdlog/sinks/ostream_sink.h>
#include <spdlog/spdlog.h>

#include "essumm/errors.hpp"
#include "essumm/pipeline.hpp"
#include "essumm/rouge_eval.hpp"

namespace essumm::cli {

namespace {

constexpr int kUsage = 1;
constexpr int kData = 2;
constexpr int kInternal = 3;

// Points the default logger at `err` and restores the previous one on scope exit.
class LogScope {
public:
    explicit LogScope(std::ostream& err) : previous_(spdlog::default_logger()) { init(err); }
    ~LogScope() { spdlog::set_default_logger(previous_); }
    LogScope(const LogScope&) = delete;
    LogScope& operator=(const LogScope&) = delete;

private:
    static void init(std::ostream& err);
    std::shared_ptr<spdlog::logger> previous_;
};

void LogScope::init(std::ostream& err) {
    auto sink = std::make_shared<spdlog::sinks::ostream_sink_mt>(err, true);
    auto logger = std::make_shared<spdlog::logger>("essumm", sink);
    logger->set_pattern("essumm: %l: %v");
    auto level = spdlog::level::warn;
    if (const char* env = std::getenv("ESSUMM_LOG")) {
        const std::string v(env);
        if (v == "error") level = spdlog::level::err;
        else if (v == "warn") level = spdlog::level::warn;
        else if (v == "info") level = spdlog::level::info;
        else if (v == "debug") level = spdlog::level::debug;
    }
    logger->set_level(level);
    spdlog::set_default_logger(std::move(logger));
}

// "mfcc" | "file:PATH" and "vad" | "manifest:PATH".
std::optional<std::filesystem::path> parse_source(const std::string& value, const std::string& builtin,
                                                  const std::string& prefix, const char* flag) {
    if (value == builtin) return std::nullopt;
    if (value.rfind(prefix, 0) == 0 && value.size() > prefix.size()) {
        return std::filesystem::path(value.substr(prefix.size()));
    }
    throw UsageError(std::string(flag) + " must be '" + builtin + "' or '" + prefix + "PATH', got '" +
                     value + "'");
}

struct SharedFlags {
    std::string input;
    std::string features = "mfcc";
    std::string segments = "vad";
    std::string alignment;
    std::size_t k = 32;
    std::size_t pca = 4;
    double min_silence_ms = 500.0;
    std::uint64_t seed = 0;
    bool no_resample = false;

    void attach(CLI::App* cmd) {
        cmd->add_option("--input", input, "Input WAV file")->required();
        cmd->add_option("--features", features, "mfcc | file:PATH (ESF1)")->capture_default_str();
        cmd->add_option("--segments", segments, "vad | manifest:PATH (JSON)")->capture_default_str();
        cmd->add_option("--alignment", alignment, "Time-aligned transcript JSON");
        cmd->add_option("--k", k, "Number of pseudo-phoneme clusters")->capture_default_str();
        cmd->add_option("--pca-components", pca, "Principal components for scoring")->capture_default_str();
        cmd->add_option("--min-silence-ms", min_silence_ms, "Minimum silence gap between segments")
            ->capture_default_str();
        cmd->add_option("--seed", seed, "k-means seed")->capture_default_str();
        cmd->add_flag("--no-resample", no_resample, "Keep the input sample rate");
    }

    PipelineConfig config() const {
        PipelineConfig c;
        c.input_wav = input;
        c.features_file = parse_source(features, "mfcc", "file:", "--features");
        c.segments_file = parse_source(segments, "vad", "manifest:", "--segments");
        if (!alignment.empty()) c.alignment_file = alignment;
        if (k < 1) throw UsageError("--k must be at least 1");
        if (pca < 1) throw UsageError("--pca-components must be at least 1");
        if (min_silence_ms < 0.0) throw UsageError("--min-silence-ms must be non-negative");
        c.k = k;
        c.pca_components = pca;
        c.seed = seed;
        c.resample = !no_resample;
        c.vad.min_silence_s = min_silence_ms / 1000.0;
        return c;
    }
};

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    out << text;
    if (!out) throw IoError("write failed: " + path.string());
}

std::string fixed6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    const LogScope logging(err);

    CLI::App app{"Unsupervised extractive speech-to-speech summarization"};
    app.require_subcommand(1);

    SharedFlags sum_flags;
    std::optional<double> target_seconds;
    std::optional<std::size_t> target_words;
    std::string out_wav, out_manifest, dump_codebook, dump_model;
    double gap_ms = 0.0;
    auto* summarize_cmd = app.add_subcommand("summarize", "Select key segments and write the summary audio");
    sum_flags.attach(summarize_cmd);
    auto* secs_opt = summarize_cmd->add_option("--target-seconds", target_seconds, "Summary length in seconds");
    auto* words_opt = summarize_cmd->add_option("--target-words", target_words,
                                                "Summary length in words (needs --alignment)");
    secs_opt->excludes(words_opt);
    summarize_cmd->add_option("--out-wav", out_wav, "Summary WAV output")->required();
    summarize_cmd->add_option("--out-manifest", out_manifest, "Selection manifest JSON output")->required();
    summarize_cmd->add_option("--gap-ms", gap_ms, "Silence inserted between segments")->capture_default_str();
    summarize_cmd->add_option("--dump-codebook", dump_codebook, "Write the k-means codebook as JSON");
    summarize_cmd->add_option("--dump-model", dump_model, "Write the PCA model as JSON");

    std::string feat_input, feat_out;
    bool feat_no_resample = false;
    auto* features_cmd = app.add_subcommand("features", "Extract MFCC features to an ESF1 file");
    features_cmd->add_option("--input", feat_input, "Input WAV file")->required();
    features_cmd->add_option("--out", feat_out, "Output ESF1 file")->required();
    features_cmd->add_flag("--no-resample", feat_no_resample, "Keep the input sample rate");

    std::string mapping, metrics_arg = "rouge1,rouge2,rougesu4", eval_out;
    std::optional<std::size_t> truncate_words;
    auto* eval_cmd = app.add_subcommand("eval", "ROUGE-1/2/SU4 against reference summaries");
    eval_cmd->add_option("--mapping", mapping, "JSON {meeting_id: {hyp, refs}}")->required();
    eval_cmd->add_option("--metrics", metrics_arg, "Comma-separated subset of rouge1,rouge2,rougesu4")
        ->capture_default_str();
    eval_cmd->add_option("--truncate-words", truncate_words, "Keep only the first N hypothesis tokens");
    eval_cmd->add_option("--out", eval_out, "Report path (stdout when omitted)");

    SharedFlags insp_flags;
    auto* inspect_cmd = app.add_subcommand("inspect", "Print the scored segment table as TSV");
    insp_flags.attach(inspect_cmd);

    std::vector<const char*> argv{"essumm"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "essumm: usage error: " << e.what() << "\n";
        return kUsage;
    }

    try {
        if (*summarize_cmd) {
            PipelineConfig config = sum_flags.config();
            if (target_seconds.has_value() == target_words.has_value()) {
                throw UsageError("exactly one of --target-seconds or --target-words is required");
            }
            if (target_seconds) {
                if (!(*target_seconds > 0.0)) throw UsageError("--target-seconds must be positive");
                config.budget = Budget::seconds(*target_seconds);
            } else {
                if (*target_words == 0) throw UsageError("--target-words must be positive");
                config.budget = Budget::words(*target_words);
            }
            if (gap_ms < 0.0) throw UsageError("--gap-ms must be non-negative");
            config.gap_s = gap_ms / 1000.0;

            const SummaryResult result = summarize(config);
            write_wav(result.summary, out_wav);
            write_text(out_manifest, manifest_json(result.manifest));
            if (!dump_codebook.empty() && result.recording.codebook.k > 0) {
                write_text(dump_codebook, codebook_json(result.recording.codebook) + "\n");
            }
            if (!dump_model.empty() && result.recording.model) {
                write_text(dump_model, lsa_model_json(*result.recording.model) + "\n");
            }
            spdlog::info("selected {} of {} segments, {} s", result.manifest.selected.size(),
                         result.recording.segments.size(), result.manifest.total_seconds);
        } else if (*features_cmd) {
            const FeatureMatrix fm = extract_features(feat_input, MfccParams{}, !feat_no_resample);
            store_features(fm, feat_out);
        } else if (*eval_cmd) {
            std::vector<rouge::Metric> metrics;
            std::stringstream ss(metrics_arg);
            for (std::string name; std::getline(ss, name, ',');) {
                const auto m = rouge::parse_metric(name);
                if (!m) throw UsageError("unknown metric '" + name + "'");
                metrics.push_back(*m);
            }
            if (metrics.empty()) throw UsageError("--metrics selects no metric");
            const auto [hyps, refs] = rouge::load_mapping(mapping);
            const std::string report = rouge::report_json(rouge::evaluate(hyps, refs, truncate_words, metrics));
            if (eval_out.empty()) {
                out << report;
            } else {
                write_text(eval_out, report);
            }
        } else if (*inspect_cmd) {
            const ScoredRecording rec = score_recording(insp_flags.config());
            if (rec.scored.empty()) spdlog::warn("no segments to inspect");
            const auto order = rank_order(rec.scored);
            std::vector<std::size_t> rank(rec.scored.size());
            for (std::size_t r = 0; r < order.size(); ++r) rank[order[r]] = r + 1;
            out << "id\tstart_s\tend_s\tduration_s\tscore\trank\n";
            for (std::size_t i = 0; i < rec.scored.size(); ++i) {
                const Segment& s = rec.scored[i].segment;
                out << s.id << '\t' << fixed6(s.start_s) << '\t' << fixed6(s.end_s) << '\t'
                    << fixed6(s.duration_s()) << '\t' << fixed6(rec.scored[i].score) << '\t' << rank[i]
                    << '\n';
            }
        }
    } catch (const StageError& e) {
        err << "essumm: error in stage " << e.what() << "\n";
        return e.exit_code();
    } catch (const UsageError& e) {
        err << "essumm: usage error: " << e.what() << "\n";
        return kUsage;
    } catch (const DataError& e) {
        err << "essumm: error: " << e.what() << "\n";
        return kData;
    } catch (const std::exception& e) {
        err << "essumm: internal error: " << e.what() << "\n";
        return kInternal;
    }
    return 0;
}

}  // namespace essumm::cli
