#include "essumm/pipeline.hpp"

#include <algorithm>
#include <exception>
#include <utility>

#include <spdlog/spdlog.h>

#include "essumm/errors.hpp"

namespace essumm {

namespace {

template <typename Fn>
auto stage(const char* name, Fn&& fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const StageError&) {
        throw;
    } catch (const UsageError& e) {
        throw StageError(name, e.what(), 1);
    } catch (const DataError& e) {
        throw StageError(name, e.what(), 2);
    } catch (const std::exception& e) {
        throw StageError(name, e.what(), 3);
    }
}

AudioBuffer load_audio(const std::filesystem::path& path, bool resample_input) {
    AudioBuffer audio = stage("read", [&] { return read_wav(path); });
    if (resample_input) {
        audio = stage("resample", [&] { return resample(audio, kWorkingSampleRate); });
    }
    return audio;
}

}  // namespace

FeatureMatrix extract_features(const std::filesystem::path& wav, const MfccParams& params,
                               bool resample_input) {
    const AudioBuffer audio = load_audio(wav, resample_input);
    return stage("features", [&] { return round_to_float32(mfcc(audio, params)); });
}

ScoredRecording score_recording(const PipelineConfig& config) {
    if (config.k < 1) throw StageError("config", "k must be at least 1", 1);
    if (config.pca_components < 1) throw StageError("config", "pca components must be at least 1", 1);

    ScoredRecording rec;
    rec.audio = load_audio(config.input_wav, config.resample);

    if (config.alignment_file) {
        rec.alignment = stage("alignment", [&] { return load_alignment(*config.alignment_file); });
    }

    rec.segments = stage("segment", [&] {
        if (config.segments_file) return load_segments(*config.segments_file, rec.audio.duration_s());
        return segment_by_silence(rec.audio, config.vad);
    });
    spdlog::info("{} candidate segments", rec.segments.size());
    if (rec.segments.empty()) {
        spdlog::warn("segmentation produced no segments");
        return rec;
    }

    rec.features = stage("features", [&] {
        if (config.features_file) return load_features(*config.features_file);
        return round_to_float32(mfcc(rec.audio, config.mfcc));
    });

    rec.codebook = stage("quantize", [&] {
        KMeansParams params;
        params.k = config.k;
        params.seed = config.seed;
        return fit_kmeans(rec.features, params);
    });
    spdlog::info("k-means: k={} inertia={} after {} iterations", rec.codebook.k, rec.codebook.inertia,
                 rec.codebook.iterations);

    stage("quantize", [&] {
        for (const auto& seg : rec.segments.segments) {
            rec.sequences.push_back(quantize(slice_frames(rec.features, seg), rec.codebook));
        }
        return 0;
    });

    rec.vectors = stage("tfidf", [&] { return tfidf(rec.sequences, config.k); });

    const std::size_t n = rec.segments.size();
    if (n == 1) {
        // A single candidate has no spread to model; it is trivially central.
        rec.scored.push_back(ScoredSegment{rec.segments.segments.front(), 0.0, 1.0});
        return rec;
    }

    std::size_t n_comp = config.pca_components;
    const std::size_t limit = std::min(n - 1, config.k);
    if (n_comp > limit) {
        spdlog::warn("pca components {} exceed min(N-1, k) = {} for {} segments; clamped",
                     n_comp, limit, n);
        n_comp = limit;
    }
    rec.pca_components_used = n_comp;
    rec.model = stage("pca", [&] { return fit_pca(rec.vectors, n_comp); });
    rec.scored = stage("score", [&] { return score_segments(rec.vectors, *rec.model, rec.segments); });
    return rec;
}

SummaryResult summarize(const PipelineConfig& config) {
    if (config.budget.kind == BudgetKind::words && !config.alignment_file) {
        throw StageError("config", "a word budget requires --alignment", 1);
    }
    SummaryResult out;
    out.recording = score_recording(config);
    const TranscriptAlignment* alignment =
        out.recording.alignment ? &*out.recording.alignment : nullptr;
    out.manifest = stage("select", [&] { return select(out.recording.scored, config.budget, alignment); });
    out.summary = stage("concatenate",
                        [&] { return concatenate(out.recording.audio, out.manifest, config.gap_s); });
    return out;
}

}  // namespace essumm
