#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "essumm/audio_io.hpp"
#include "essumm/segmenter.hpp"

namespace essumm {

// Row-major frames x dim matrix with frame timing. Frame i is centred at
// first_center_s + i * frame_hop_s.
class FeatureMatrix {
public:
    FeatureMatrix() = default;
    FeatureMatrix(std::size_t n_frames, std::size_t dim, double frame_hop_s, double first_center_s);
    FeatureMatrix(std::vector<double> data, std::size_t dim, double frame_hop_s,
                  double first_center_s);

    std::size_t n_frames() const { return dim_ == 0 ? 0 : data_.size() / dim_; }
    std::size_t dim() const { return dim_; }
    double frame_hop_s() const { return hop_; }
    double first_center_s() const { return first_; }
    double center_s(std::size_t i) const { return first_ + static_cast<double>(i) * hop_; }
    bool empty() const { return data_.empty(); }

    std::span<const double> row(std::size_t i) const { return {data_.data() + i * dim_, dim_}; }
    std::span<double> row(std::size_t i) { return {data_.data() + i * dim_, dim_}; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * dim_ + j]; }
    double& operator()(std::size_t i, std::size_t j) { return data_[i * dim_ + j]; }

    const std::vector<double>& data() const { return data_; }

    bool operator==(const FeatureMatrix&) const = default;

private:
    std::vector<double> data_;
    std::size_t dim_ = 1;
    double hop_ = 0.01;
    double first_ = 0.0;
};

// Throws ValidationError on non-finite entries, dim == 0, or a non-positive hop.
void validate(const FeatureMatrix& fm);

// Rounds every entry to the nearest binary32 value, the precision of the ESF1 payload.
FeatureMatrix round_to_float32(const FeatureMatrix& fm);

struct MfccParams {
    int n_coeffs = 13;
    int n_mels = 26;
    double win_s = 0.025;
    double hop_s = 0.010;
    double preemphasis = 0.97;
    double log_floor = 1e-10;
};

// Triangular HTK-mel filters spanning 0 Hz to Nyquist, n_mels rows of n_fft/2 + 1
// weights each. Filter edges are evaluated at exact bin frequencies.
std::vector<std::vector<double>> mel_filterbank(int n_mels, std::size_t n_fft, int sample_rate);

// Pre-emphasised, Hamming-windowed magnitude spectrum of each frame, before the mel
// stage. One row per frame, n_fft/2 + 1 bins.
std::vector<std::vector<double>> magnitude_frames(const AudioBuffer& buf, const MfccParams& p = {});

// Pre-log mel energies for every frame.
std::vector<std::vector<double>> mel_energies(const AudioBuffer& buf, const MfccParams& p = {});

// MFCCs: pre-emphasis, Hamming window, magnitude FFT, mel filterbank, log with floor,
// orthonormal DCT-II. Requires 16 kHz input; returns an empty matrix when the input
// is shorter than one window.
FeatureMatrix mfcc(const AudioBuffer& buf, const MfccParams& p = {});

// ESF1 binary feature files (little endian).
inline constexpr std::size_t kEsf1HeaderBytes = 29;
inline constexpr std::size_t kEsf1ReservedBytes = 8;

std::vector<std::uint8_t> encode_esf1(const FeatureMatrix& fm);
FeatureMatrix decode_esf1(std::span<const std::uint8_t> bytes);
void store_features(const FeatureMatrix& fm, const std::filesystem::path& path);
FeatureMatrix load_features(const std::filesystem::path& path);

// Half-open range [begin, end) of frame indices whose centres lie in [start_s, end_s).
struct FrameRange {
    std::size_t begin = 0;
    std::size_t end = 0;
    std::size_t size() const { return end - begin; }
};

FrameRange frame_range(const FeatureMatrix& fm, const Segment& seg);
FeatureMatrix slice_frames(const FeatureMatrix& fm, const Segment& seg);

}  // namespace essumm
