#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "essumm/audio_io.hpp"
#include "essumm/features.hpp"
#include "essumm/lsa_scorer.hpp"
#include "essumm/quantizer.hpp"
#include "essumm/segmenter.hpp"
#include "essumm/summarizer.hpp"

namespace essumm {

struct PipelineConfig {
    std::filesystem::path input_wav;
    std::optional<std::filesystem::path> features_file;  // MFCC when empty
    std::optional<std::filesystem::path> segments_file;  // silence VAD when empty
    std::optional<std::filesystem::path> alignment_file;
    std::size_t k = 32;
    std::size_t pca_components = 4;
    Budget budget = Budget::seconds(60.0);
    std::uint64_t seed = 0;
    bool resample = true;
    double gap_s = 0.0;
    SilenceParams vad;
    MfccParams mfcc;
};

// Everything computed up to (and including) segment scoring.
struct ScoredRecording {
    AudioBuffer audio;
    SegmentSet segments;
    FeatureMatrix features;
    Codebook codebook;
    std::vector<ClusterSequence> sequences;
    std::vector<TfIdfVector> vectors;
    std::optional<LsaModel> model;
    std::size_t pca_components_used = 0;
    std::vector<ScoredSegment> scored;
    std::optional<TranscriptAlignment> alignment;
};

struct SummaryResult {
    ScoredRecording recording;
    SummaryManifest manifest;
    AudioBuffer summary;
};

// Failure inside a named pipeline stage. `exit_code` follows the CLI convention:
// 1 usage, 2 data/format, 3 internal invariant.
class StageError : public std::runtime_error {
public:
    StageError(std::string stage, const std::string& message, int exit_code)
        : std::runtime_error(stage + ": " + message), stage_(std::move(stage)), exit_code_(exit_code) {}

    const std::string& stage() const { return stage_; }
    int exit_code() const { return exit_code_; }

private:
    std::string stage_;
    int exit_code_;
};

// read -> resample -> segment -> features -> k-means -> TF-IDF -> PCA -> score.
ScoredRecording score_recording(const PipelineConfig& config);

// score_recording followed by selection and concatenation.
SummaryResult summarize(const PipelineConfig& config);

// read -> resample -> MFCC, rounded to the ESF1 payload precision.
FeatureMatrix extract_features(const std::filesystem::path& wav, const MfccParams& params = {},
                               bool resample_input = true);

}  // namespace essumm
