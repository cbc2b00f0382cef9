#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

namespace essumm {

inline constexpr int kWorkingSampleRate = 16000;

// Mono PCM signal. Samples are nominally in [-1, 1].
struct AudioBuffer {
    std::vector<float> samples;
    int sample_rate_hz = kWorkingSampleRate;

    double duration_s() const {
        return static_cast<double>(samples.size()) / static_cast<double>(sample_rate_hz);
    }
};

// Throws ValidationError if the rate is not positive or a sample is not finite.
void validate(const AudioBuffer& buf);

// Reads a RIFF/WAVE file holding 16/24-bit integer PCM or 32-bit float PCM, mono or
// stereo. Stereo is downmixed by the mean of both channels; integer samples are
// divided by 2^(bits-1).
AudioBuffer read_wav(const std::filesystem::path& path);

// Parses an in-memory WAV image; `read_wav` is a thin wrapper over this.
AudioBuffer parse_wav(const std::vector<std::uint8_t>& bytes);

// Linear-interpolation resampling. Output length is round(n * target / source).
AudioBuffer resample(const AudioBuffer& buf, int target_hz);

// Writes 16-bit PCM mono. Samples are clamped to [-1, 1], scaled by 32768, rounded
// half away from zero and saturated to the int16 range.
void write_wav(const AudioBuffer& buf, const std::filesystem::path& path);

std::vector<std::uint8_t> encode_wav16(const AudioBuffer& buf);

}  // namespace essumm
