#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "essumm/audio_io.hpp"

namespace essumm {

struct Segment {
    std::size_t id = 0;
    double start_s = 0.0;
    double end_s = 0.0;

    double duration_s() const { return end_s - start_s; }
};

enum class SegmentSource { silence_vad, external_manifest };

struct SegmentSet {
    std::vector<Segment> segments;
    SegmentSource source = SegmentSource::silence_vad;

    std::size_t size() const { return segments.size(); }
    bool empty() const { return segments.empty(); }
};

struct SilenceParams {
    double min_silence_s = 0.5;
    double min_segment_s = 0.2;
    double margin_db = 10.0;
    double pad_s = 0.05;
    double frame_s = 0.010;
    double floor_percentile = 0.05;
};

// Per-frame speech/silence decision of the energy detector, exposed for inspection.
struct FrameActivity {
    double frame_s = 0.0;
    double threshold_rms = 0.0;
    std::vector<double> rms;
    std::vector<bool> speech;
};

FrameActivity classify_frames(const AudioBuffer& buf, const SilenceParams& params = {});

// Speech runs before padding, as [start_s, end_s) pairs on the frame grid.
std::vector<std::pair<double, double>> speech_runs(const AudioBuffer& buf,
                                                   const SilenceParams& params = {});

// Splits `buf` at silences of at least `min_silence_s`. Frames of 10 ms are speech
// when their RMS exceeds the 5th-percentile frame RMS by `margin_db`. Short speech
// runs are dropped and the survivors padded, clipped, and merged.
SegmentSet segment_by_silence(const AudioBuffer& buf, const SilenceParams& params = {});

// Loads a JSON array of {"start_s", "end_s", "text"?} objects. Entries are sorted,
// renumbered, and clipped to [0, audio_duration_s].
SegmentSet load_segments(const std::filesystem::path& manifest, double audio_duration_s);
SegmentSet parse_segments(const std::string& json_text, double audio_duration_s);

// Throws InvariantError unless ids are 0..n-1 and segments are ordered and disjoint.
void check_invariants(const SegmentSet& set);

}  // namespace essumm
