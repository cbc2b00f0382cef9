#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <fftw3.h>

#include "essumm/errors.hpp"
#include "essumm/features.hpp"

namespace essumm {

namespace {

double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }
double mel_to_hz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

// Real-to-complex FFT of a fixed size, planned once with FFTW_ESTIMATE so the plan
// (and hence the arithmetic) does not depend on timing measurements.
class RealFft {
public:
    explicit RealFft(std::size_t n)
        : n_(n),
          in_(static_cast<double*>(fftw_malloc(sizeof(double) * n))),
          out_(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * (n / 2 + 1)))) {
        plan_ = fftw_plan_dft_r2c_1d(static_cast<int>(n), in_, out_, FFTW_ESTIMATE);
    }
    ~RealFft() {
        fftw_destroy_plan(plan_);
        fftw_free(in_);
        fftw_free(out_);
    }
    RealFft(const RealFft&) = delete;
    RealFft& operator=(const RealFft&) = delete;

    // Magnitudes of bins 0..n/2 of the zero-padded input.
    void magnitude(const std::vector<double>& frame, std::vector<double>& mag) {
        std::fill(in_, in_ + n_, 0.0);
        std::copy(frame.begin(), frame.end(), in_);
        fftw_execute(plan_);
        mag.resize(n_ / 2 + 1);
        for (std::size_t k = 0; k < mag.size(); ++k) mag[k] = std::hypot(out_[k][0], out_[k][1]);
    }

private:
    std::size_t n_;
    double* in_;
    fftw_complex* out_;
    fftw_plan plan_;
};

struct Framing {
    std::size_t win = 0;
    std::size_t hop = 0;
    std::size_t n_fft = 0;
    std::size_t n_frames = 0;
};

Framing framing(const AudioBuffer& buf, const MfccParams& p) {
    if (buf.sample_rate_hz != kWorkingSampleRate) {
        throw ValidationError("MFCC extraction requires 16000 Hz audio, got " +
                              std::to_string(buf.sample_rate_hz) + " Hz");
    }
    if (p.n_coeffs < 1 || p.n_mels < 1 || p.n_coeffs > p.n_mels) {
        throw ParameterError("MFCC needs 1 <= n_coeffs <= n_mels");
    }
    if (!(p.win_s > 0.0) || !(p.hop_s > 0.0)) throw ParameterError("MFCC window and hop must be positive");

    Framing f;
    f.win = static_cast<std::size_t>(std::llround(p.win_s * buf.sample_rate_hz));
    f.hop = static_cast<std::size_t>(std::llround(p.hop_s * buf.sample_rate_hz));
    f.n_fft = next_pow2(f.win);
    const std::size_t n = buf.samples.size();
    f.n_frames = n < f.win ? 0 : (n - f.win) / f.hop + 1;
    return f;
}

}  // namespace

std::vector<std::vector<double>> mel_filterbank(int n_mels, std::size_t n_fft, int sample_rate) {
    const double nyquist = sample_rate / 2.0;
    const double mel_hi = hz_to_mel(nyquist);
    std::vector<double> edges(static_cast<std::size_t>(n_mels) + 2);
    for (std::size_t i = 0; i < edges.size(); ++i) {
        edges[i] = mel_to_hz(mel_hi * static_cast<double>(i) / (n_mels + 1));
    }

    const std::size_t n_bins = n_fft / 2 + 1;
    std::vector<std::vector<double>> bank(static_cast<std::size_t>(n_mels),
                                          std::vector<double>(n_bins, 0.0));
    for (std::size_t m = 0; m < bank.size(); ++m) {
        const double lo = edges[m], mid = edges[m + 1], hi = edges[m + 2];
        for (std::size_t b = 0; b < n_bins; ++b) {
            const double f = static_cast<double>(b) * sample_rate / static_cast<double>(n_fft);
            if (f > lo && f <= mid) {
                bank[m][b] = (f - lo) / (mid - lo);
            } else if (f > mid && f < hi) {
                bank[m][b] = (hi - f) / (hi - mid);
            }
        }
    }
    return bank;
}

std::vector<std::vector<double>> magnitude_frames(const AudioBuffer& buf, const MfccParams& p) {
    const Framing f = framing(buf, p);
    std::vector<std::vector<double>> out(f.n_frames);
    if (f.n_frames == 0) return out;

    const auto& x = buf.samples;
    std::vector<double> emph(x.size());
    emph[0] = x[0];
    for (std::size_t t = 1; t < x.size(); ++t) {
        emph[t] = static_cast<double>(x[t]) - p.preemphasis * static_cast<double>(x[t - 1]);
    }

    std::vector<double> window(f.win);
    for (std::size_t i = 0; i < f.win; ++i) {
        window[i] = 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) /
                                           static_cast<double>(f.win - 1));
    }

    RealFft fft(f.n_fft);
    std::vector<double> frame(f.win);
    for (std::size_t t = 0; t < f.n_frames; ++t) {
        const std::size_t off = t * f.hop;
        for (std::size_t i = 0; i < f.win; ++i) frame[i] = emph[off + i] * window[i];
        fft.magnitude(frame, out[t]);
    }
    return out;
}

std::vector<std::vector<double>> mel_energies(const AudioBuffer& buf, const MfccParams& p) {
    const Framing f = framing(buf, p);
    const auto bank = mel_filterbank(p.n_mels, f.n_fft, buf.sample_rate_hz);
    auto spectra = magnitude_frames(buf, p);
    std::vector<std::vector<double>> out(spectra.size(), std::vector<double>(bank.size(), 0.0));
    for (std::size_t t = 0; t < spectra.size(); ++t) {
        for (std::size_t m = 0; m < bank.size(); ++m) {
            double acc = 0.0;
            for (std::size_t b = 0; b < spectra[t].size(); ++b) acc += bank[m][b] * spectra[t][b];
            out[t][m] = acc;
        }
    }
    return out;
}

FeatureMatrix mfcc(const AudioBuffer& buf, const MfccParams& p) {
    const Framing f = framing(buf, p);
    const auto n_coeffs = static_cast<std::size_t>(p.n_coeffs);
    const auto n_mels = static_cast<std::size_t>(p.n_mels);
    const double hop_s = static_cast<double>(f.hop) / buf.sample_rate_hz;
    const double first_center = static_cast<double>(f.win) / 2.0 / buf.sample_rate_hz;
    if (f.n_frames == 0) return FeatureMatrix(0, n_coeffs, hop_s, first_center);

    // Orthonormal DCT-II basis.
    std::vector<double> dct(n_coeffs * n_mels);
    for (std::size_t k = 0; k < n_coeffs; ++k) {
        const double scale = std::sqrt((k == 0 ? 1.0 : 2.0) / static_cast<double>(n_mels));
        for (std::size_t m = 0; m < n_mels; ++m) {
            dct[k * n_mels + m] = scale * std::cos(std::numbers::pi * static_cast<double>(k) *
                                                   (static_cast<double>(m) + 0.5) /
                                                   static_cast<double>(n_mels));
        }
    }

    const auto energies = mel_energies(buf, p);
    FeatureMatrix out(f.n_frames, n_coeffs, hop_s, first_center);
    std::vector<double> logmel(n_mels);
    for (std::size_t t = 0; t < f.n_frames; ++t) {
        for (std::size_t m = 0; m < n_mels; ++m) {
            logmel[m] = std::log(std::max(energies[t][m], p.log_floor));
        }
        for (std::size_t k = 0; k < n_coeffs; ++k) {
            double acc = 0.0;
            for (std::size_t m = 0; m < n_mels; ++m) acc += dct[k * n_mels + m] * logmel[m];
            out(t, k) = acc;
        }
    }
    return out;
}

}  // namespace essumm
