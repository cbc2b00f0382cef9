#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace essumm::rouge {

using TokenList = std::vector<std::string>;

struct Score {
    double recall = 0.0;
    double precision = 0.0;
    double f1 = 0.0;

    static Score from_counts(double overlap, double ref_units, double hyp_units);
};

// Lowercases ASCII letters and splits on every character that is not an ASCII letter
// or digit. Bytes outside ASCII act as separators.
TokenList tokenize(const std::string& text);

// Clipped n-gram overlap.
Score rouge_n(const TokenList& hyp, const TokenList& ref, std::size_t n);

// Skip-bigrams (i < j, j - i - 1 <= max_gap) plus unigrams, clipped overlap.
Score rouge_su(const TokenList& hyp, const TokenList& ref, std::size_t max_gap = 4);

enum class Metric { rouge1, rouge2, rougesu4 };

const char* metric_name(Metric m);
std::optional<Metric> parse_metric(const std::string& name);
Score score(Metric m, const TokenList& hyp, const TokenList& ref);

struct MetricResult {
    Score best;  // scores against the reference with the highest F1, first on ties
    Score mean;  // component-wise mean over references
    std::size_t best_ref = 0;
};

struct MeetingResult {
    std::string meeting_id;
    std::map<Metric, MetricResult> metrics;
};

struct Report {
    std::vector<MeetingResult> per_meeting;  // sorted by meeting_id
    std::map<Metric, Score> macro;           // unweighted mean of per-meeting best scores
    std::map<Metric, Score> macro_mean_ref;  // same over per-meeting mean-reference scores
};

struct Hypothesis {
    std::string meeting_id;
    std::string text;
};

struct References {
    std::string meeting_id;
    std::vector<std::string> texts;
};

// Per meeting and metric: scores against every reference, best-F1 and mean aggregates.
// The corpus score is the macro average over meetings. Throws DataError when a
// hypothesis has no reference.
Report evaluate(const std::vector<Hypothesis>& hyps, const std::vector<References>& refs,
                std::optional<std::size_t> truncate_words = std::nullopt,
                const std::vector<Metric>& metrics = {Metric::rouge1, Metric::rouge2, Metric::rougesu4});

std::string report_json(const Report& report);

// Reads {"meeting_id": {"hyp": path, "refs": [paths]}}; relative paths resolve against
// the mapping file's directory.
std::pair<std::vector<Hypothesis>, std::vector<References>> load_mapping(
    const std::filesystem::path& mapping);

}  // namespace essumm::rouge
