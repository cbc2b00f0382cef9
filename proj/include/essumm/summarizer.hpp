#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "essumm/audio_io.hpp"
#include "essumm/lsa_scorer.hpp"

namespace essumm {

enum class BudgetKind { seconds, words };

struct Budget {
    BudgetKind kind = BudgetKind::seconds;
    double amount = 0.0;  // seconds, or a whole number of words

    static Budget seconds(double s) { return {BudgetKind::seconds, s}; }
    static Budget words(std::size_t n) { return {BudgetKind::words, static_cast<double>(n)}; }
};

struct AlignmentEntry {
    double start_s = 0.0;
    double end_s = 0.0;
    std::string text;

    double midpoint_s() const { return 0.5 * (start_s + end_s); }
};

// Time-stamped transcript, used only for word budgets and ROUGE hypotheses.
struct TranscriptAlignment {
    std::vector<AlignmentEntry> entries;
};

// Accepts the segment-manifest layout: [{"start_s", "end_s", "text"}].
TranscriptAlignment load_alignment(const std::filesystem::path& path);
TranscriptAlignment parse_alignment(const std::string& json_text);

std::size_t count_words(const std::string& text);

// Whitespace tokens of entries whose midpoint lies in [seg.start_s, seg.end_s).
std::size_t words_in(const Segment& seg, const TranscriptAlignment& alignment);

struct SelectedSegment {
    Segment segment;
    double distance = 0.0;
    double score = 0.0;
    std::size_t rank = 0;  // 1-based position in descending-score order
    double length_contribution = 0.0;
};

struct SummaryManifest {
    std::vector<SelectedSegment> selected;  // chronological
    double total_seconds = 0.0;
    std::optional<std::size_t> total_words;
    Budget budget;
};

// Descending score, earlier start first on ties. Returns indices into `scored`.
std::vector<std::size_t> rank_order(const std::vector<ScoredSegment>& scored);

// Walks segments in rank order, accumulating duration or words, and stops after the
// first segment whose inclusion reaches the budget.
SummaryManifest select(const std::vector<ScoredSegment>& scored, const Budget& budget,
                       const TranscriptAlignment* alignment = nullptr);

// Joins the selected sample ranges in time order with `gap_s` of silence between them.
AudioBuffer concatenate(const AudioBuffer& buf, const SummaryManifest& manifest, double gap_s = 0.0);

// Space-joined text of alignment entries whose midpoints fall in selected segments.
std::string emit_summary_text(const SummaryManifest& manifest, const TranscriptAlignment& alignment);

// Manifest JSON with fixed key order and six-decimal floats.
std::string manifest_json(const SummaryManifest& manifest);

}  // namespace essumm
