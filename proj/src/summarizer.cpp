#include "essumm/summarizer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

#include "json.hpp"
#include <spdlog/spdlog.h>

#include "essumm/errors.hpp"

namespace essumm {

TranscriptAlignment parse_alignment(const std::string& json_text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw FormatError(std::string("alignment is not valid JSON: ") + e.what(), e.byte);
    }
    if (!doc.is_array()) throw ValidationError("alignment must be a JSON array");

    TranscriptAlignment out;
    for (std::size_t i = 0; i < doc.size(); ++i) {
        const auto& item = doc[i];
        if (!item.is_object() || !item.contains("start_s") || !item.contains("end_s") ||
            !item["start_s"].is_number() || !item["end_s"].is_number()) {
            throw ValidationError("alignment entry " + std::to_string(i) +
                                  " needs numeric start_s and end_s");
        }
        AlignmentEntry e;
        e.start_s = item["start_s"].get<double>();
        e.end_s = item["end_s"].get<double>();
        if (!(e.end_s > e.start_s)) {
            throw ValidationError("alignment entry " + std::to_string(i) + " has end_s <= start_s");
        }
        if (item.contains("text")) {
            if (!item["text"].is_string()) {
                throw ValidationError("alignment entry " + std::to_string(i) + " text is not a string");
            }
            e.text = item["text"].get<std::string>();
        }
        out.entries.push_back(std::move(e));
    }
    std::stable_sort(out.entries.begin(), out.entries.end(),
                     [](const AlignmentEntry& a, const AlignmentEntry& b) { return a.start_s < b.start_s; });
    return out;
}

TranscriptAlignment load_alignment(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open alignment: " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_alignment(ss.str());
}

std::size_t count_words(const std::string& text) {
    std::istringstream in(text);
    std::size_t n = 0;
    for (std::string tok; in >> tok;) ++n;
    return n;
}

namespace {

bool contains_midpoint(const Segment& seg, const AlignmentEntry& e) {
    const double mid = e.midpoint_s();
    return mid >= seg.start_s && mid < seg.end_s;
}

std::string fixed6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

}  // namespace

std::size_t words_in(const Segment& seg, const TranscriptAlignment& alignment) {
    std::size_t n = 0;
    for (const auto& e : alignment.entries) {
        if (contains_midpoint(seg, e)) n += count_words(e.text);
    }
    return n;
}

std::vector<std::size_t> rank_order(const std::vector<ScoredSegment>& scored) {
    std::vector<std::size_t> order(scored.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (scored[a].score != scored[b].score) return scored[a].score > scored[b].score;
        return scored[a].segment.start_s < scored[b].segment.start_s;
    });
    return order;
}

SummaryManifest select(const std::vector<ScoredSegment>& scored, const Budget& budget,
                       const TranscriptAlignment* alignment) {
    if (!(budget.amount > 0.0) || !std::isfinite(budget.amount)) {
        throw UsageError("summary budget must be positive");
    }
    if (budget.kind == BudgetKind::words) {
        if (alignment == nullptr) {
            throw UsageError("a word budget requires a transcript alignment");
        }
        if (budget.amount != std::floor(budget.amount)) {
            throw UsageError("a word budget must be a whole number of words");
        }
    }

    SummaryManifest manifest;
    manifest.budget = budget;
    if (alignment) manifest.total_words = 0;
    if (scored.empty()) {
        spdlog::warn("no candidate segments; the summary is empty");
        return manifest;
    }

    const auto order = rank_order(scored);
    double cumulative = 0.0;
    for (std::size_t r = 0; r < order.size(); ++r) {
        const ScoredSegment& s = scored[order[r]];
        SelectedSegment sel{s.segment, s.distance, s.score, r + 1, 0.0};
        const std::size_t words = alignment ? words_in(s.segment, *alignment) : 0;
        sel.length_contribution = budget.kind == BudgetKind::seconds ? s.segment.duration_s()
                                                                     : static_cast<double>(words);
        manifest.total_seconds += s.segment.duration_s();
        if (manifest.total_words) *manifest.total_words += words;
        manifest.selected.push_back(sel);
        cumulative += sel.length_contribution;
        if (cumulative >= budget.amount) break;
    }

    std::sort(manifest.selected.begin(), manifest.selected.end(),
              [](const SelectedSegment& a, const SelectedSegment& b) {
                  return a.segment.start_s < b.segment.start_s;
              });
    return manifest;
}

AudioBuffer concatenate(const AudioBuffer& buf, const SummaryManifest& manifest, double gap_s) {
    if (gap_s < 0.0) throw UsageError("gap between summary segments must be non-negative");
    const auto n = static_cast<long long>(buf.samples.size());
    const auto gap = static_cast<std::size_t>(std::llround(gap_s * buf.sample_rate_hz));

    AudioBuffer out;
    out.sample_rate_hz = buf.sample_rate_hz;
    for (std::size_t i = 0; i < manifest.selected.size(); ++i) {
        const Segment& seg = manifest.selected[i].segment;
        const long long a = std::llround(seg.start_s * buf.sample_rate_hz);
        const long long b = std::llround(seg.end_s * buf.sample_rate_hz);
        if (a < 0 || b > n || b < a) {
            throw ValidationError("segment " + std::to_string(seg.id) + " [" + fixed6(seg.start_s) +
                                  ", " + fixed6(seg.end_s) + ") is out of range for " +
                                  fixed6(buf.duration_s()) + " s of audio");
        }
        if (i > 0) out.samples.insert(out.samples.end(), gap, 0.0f);
        out.samples.insert(out.samples.end(), buf.samples.begin() + a, buf.samples.begin() + b);
    }
    return out;
}

std::string emit_summary_text(const SummaryManifest& manifest, const TranscriptAlignment& alignment) {
    std::string out;
    for (const auto& e : alignment.entries) {
        const bool keep = std::any_of(manifest.selected.begin(), manifest.selected.end(),
                                      [&](const SelectedSegment& s) { return contains_midpoint(s.segment, e); });
        if (!keep || e.text.empty()) continue;
        if (!out.empty()) out += ' ';
        out += e.text;
    }
    return out;
}

std::string manifest_json(const SummaryManifest& m) {
    std::ostringstream o;
    o << "{\n";
    o << "  \"budget\": {\"kind\": \"" << (m.budget.kind == BudgetKind::seconds ? "seconds" : "words")
      << "\", \"amount\": ";
    if (m.budget.kind == BudgetKind::words) {
        o << static_cast<long long>(m.budget.amount);
    } else {
        o << fixed6(m.budget.amount);
    }
    o << "},\n";
    o << "  \"total_seconds\": " << fixed6(m.total_seconds) << ",\n";
    o << "  \"total_words\": ";
    if (m.total_words) {
        o << *m.total_words;
    } else {
        o << "null";
    }
    o << ",\n";
    o << "  \"selected\": [";
    for (std::size_t i = 0; i < m.selected.size(); ++i) {
        const auto& s = m.selected[i];
        o << (i == 0 ? "\n" : ",\n");
        o << "    {\"id\": " << s.segment.id << ", \"start_s\": " << fixed6(s.segment.start_s)
          << ", \"end_s\": " << fixed6(s.segment.end_s) << ", \"score\": " << fixed6(s.score)
          << ", \"distance\": " << fixed6(s.distance) << ", \"rank\": " << s.rank << "}";
    }
    o << (m.selected.empty() ? "]\n" : "\n  ]\n");
    o << "}\n";
    return o.str();
}

}  // namespace essumm
