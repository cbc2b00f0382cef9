#include "essumm/segmenter.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "json.hpp"
#include <spdlog/spdlog.h>

#include "essumm/errors.hpp"

namespace essumm {

namespace {

// Frame index count covering at least `seconds`, tolerant of 0.5/0.01 style rounding.
std::size_t frames_for(double seconds, double frame_s) {
    const double n = std::ceil(seconds / frame_s - 1e-9);
    return n <= 0.0 ? 0 : static_cast<std::size_t>(n);
}

}  // namespace

FrameActivity classify_frames(const AudioBuffer& buf, const SilenceParams& params) {
    if (params.frame_s <= 0.0) throw ParameterError("VAD frame length must be positive");
    const auto frame_len = static_cast<std::size_t>(
        std::max<long long>(1, std::llround(params.frame_s * buf.sample_rate_hz)));
    const std::size_t n = buf.samples.size();
    const std::size_t n_frames = (n + frame_len - 1) / frame_len;

    FrameActivity act;
    act.frame_s = static_cast<double>(frame_len) / buf.sample_rate_hz;
    act.rms.resize(n_frames);
    for (std::size_t f = 0; f < n_frames; ++f) {
        const std::size_t lo = f * frame_len;
        const std::size_t hi = std::min(n, lo + frame_len);
        double acc = 0.0;
        for (std::size_t i = lo; i < hi; ++i) {
            const double s = buf.samples[i];
            acc += s * s;
        }
        act.rms[f] = std::sqrt(acc / static_cast<double>(hi - lo));
    }
    act.speech.assign(n_frames, false);
    if (n_frames == 0) return act;

    // Percentile of RMS equals percentile of RMS in dB since the map is monotone; comparing
    // in the linear domain keeps power-of-two gain changes exact.
    std::vector<double> sorted = act.rms;
    std::sort(sorted.begin(), sorted.end());
    const auto rank = static_cast<std::size_t>(
        std::floor(params.floor_percentile * static_cast<double>(n_frames - 1)));
    const double floor_rms = std::max(sorted[rank], 1e-10);
    act.threshold_rms = floor_rms * std::pow(10.0, params.margin_db / 20.0);

    for (std::size_t f = 0; f < n_frames; ++f) act.speech[f] = act.rms[f] > act.threshold_rms;
    return act;
}

std::vector<std::pair<double, double>> speech_runs(const AudioBuffer& buf,
                                                   const SilenceParams& params) {
    const FrameActivity act = classify_frames(buf, params);

    std::vector<std::pair<std::size_t, std::size_t>> runs;
    for (std::size_t f = 0; f < act.speech.size();) {
        if (!act.speech[f]) {
            ++f;
            continue;
        }
        std::size_t e = f;
        while (e < act.speech.size() && act.speech[e]) ++e;
        runs.emplace_back(f, e);
        f = e;
    }

    const std::size_t min_gap = frames_for(params.min_silence_s, act.frame_s);
    std::vector<std::pair<std::size_t, std::size_t>> bridged;
    for (const auto& r : runs) {
        if (!bridged.empty() && r.first - bridged.back().second < min_gap) {
            bridged.back().second = r.second;
        } else {
            bridged.push_back(r);
        }
    }

    const std::size_t min_len = frames_for(params.min_segment_s, act.frame_s);
    const double duration = buf.duration_s();
    std::vector<std::pair<double, double>> out;
    for (const auto& [a, b] : bridged) {
        if (b - a < min_len) continue;
        out.emplace_back(static_cast<double>(a) * act.frame_s,
                         std::min(static_cast<double>(b) * act.frame_s, duration));
    }
    return out;
}

SegmentSet segment_by_silence(const AudioBuffer& buf, const SilenceParams& params) {
    if (buf.samples.empty()) throw ValidationError("cannot segment an empty audio buffer");
    if (params.min_silence_s < 0.0 || params.min_segment_s < 0.0 || params.pad_s < 0.0) {
        throw ParameterError("silence segmentation durations must be non-negative");
    }

    const double duration = buf.duration_s();
    SegmentSet set;
    set.source = SegmentSource::silence_vad;
    for (const auto& [s, e] : speech_runs(buf, params)) {
        const double start = std::max(0.0, s - params.pad_s);
        const double end = std::min(duration, e + params.pad_s);
        if (!set.segments.empty() && start < set.segments.back().end_s) {
            set.segments.back().end_s = std::max(set.segments.back().end_s, end);
            continue;
        }
        set.segments.push_back(Segment{set.segments.size(), start, end});
    }
    check_invariants(set);
    return set;
}

SegmentSet parse_segments(const std::string& json_text, double audio_duration_s) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw FormatError(std::string("segment manifest is not valid JSON: ") + e.what(), e.byte);
    }
    if (!doc.is_array()) throw ValidationError("segment manifest must be a JSON array");

    struct Entry {
        std::size_t index;
        double start;
        double end;
    };
    std::vector<Entry> entries;
    for (std::size_t i = 0; i < doc.size(); ++i) {
        const auto& item = doc[i];
        if (!item.is_object() || !item.contains("start_s") || !item.contains("end_s") ||
            !item["start_s"].is_number() || !item["end_s"].is_number()) {
            throw ValidationError("segment manifest entry " + std::to_string(i) +
                                  " needs numeric start_s and end_s");
        }
        const double s = item["start_s"].get<double>();
        const double e = item["end_s"].get<double>();
        if (!std::isfinite(s) || !std::isfinite(e) || e <= s) {
            throw ValidationError("segment manifest entry " + std::to_string(i) +
                                  " has end_s <= start_s");
        }
        entries.push_back({i, s, e});
    }

    std::stable_sort(entries.begin(), entries.end(),
                     [](const Entry& a, const Entry& b) { return a.start < b.start; });

    std::vector<std::string> overlaps;
    for (std::size_t i = 1; i < entries.size(); ++i) {
        if (entries[i].start < entries[i - 1].end) {
            overlaps.push_back(std::to_string(entries[i - 1].index) + "&" +
                               std::to_string(entries[i].index));
        }
    }
    if (!overlaps.empty()) {
        std::ostringstream msg;
        msg << "segment manifest has overlapping entries:";
        for (const auto& o : overlaps) msg << ' ' << o;
        throw ValidationError(msg.str());
    }

    SegmentSet set;
    set.source = SegmentSource::external_manifest;
    for (const auto& e : entries) {
        const double start = std::clamp(e.start, 0.0, audio_duration_s);
        const double end = std::clamp(e.end, 0.0, audio_duration_s);
        if (end <= start) {
            spdlog::warn("segment manifest entry {} [{}, {}) lies outside the audio [0, {}]; dropped",
                         e.index, e.start, e.end, audio_duration_s);
            continue;
        }
        if (start != e.start || end != e.end) {
            spdlog::warn("segment manifest entry {} [{}, {}) clipped to [{}, {})", e.index, e.start,
                         e.end, start, end);
        }
        set.segments.push_back(Segment{set.segments.size(), start, end});
    }
    check_invariants(set);
    return set;
}

SegmentSet load_segments(const std::filesystem::path& manifest, double audio_duration_s) {
    std::ifstream in(manifest);
    if (!in) throw IoError("cannot open segment manifest: " + manifest.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_segments(ss.str(), audio_duration_s);
}

void check_invariants(const SegmentSet& set) {
    for (std::size_t i = 0; i < set.segments.size(); ++i) {
        const Segment& s = set.segments[i];
        if (s.id != i) throw InvariantError("segment ids are not 0..n-1 in order");
        if (!(s.end_s > s.start_s) || s.start_s < 0.0) {
            throw InvariantError("segment " + std::to_string(i) + " has an invalid span");
        }
        if (i > 0 && set.segments[i - 1].end_s > s.start_s) {
            throw InvariantError("segments " + std::to_string(i - 1) + " and " + std::to_string(i) +
                                 " overlap");
        }
    }
}

}  // namespace essumm
