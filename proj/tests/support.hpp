#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <memory>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include <spdlog/sinks/ringbuffer_sink.h>
#include <spdlog/spdlog.h>

#include "essumm/audio_io.hpp"

namespace essumm::testing {

inline std::filesystem::path data_dir() { return ESSUMM_TEST_DATA_DIR; }

inline std::filesystem::path fixture_wav() { return data_dir() / "synthetic_10s.wav"; }

// Scratch directory removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        static int counter = 0;
        path_ = std::filesystem::temp_directory_path() /
                ("essumm_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

inline std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void write_file(const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    out << text;
}

inline void write_bytes(const std::filesystem::path& p, const std::vector<std::uint8_t>& bytes) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

// Piecewise signal builder: tones and low-level noise at 16 kHz.
class SignalBuilder {
public:
    explicit SignalBuilder(std::uint64_t seed, double noise_amp = 1e-3, int rate = kWorkingSampleRate)
        : rng_(seed), noise_(0.0, noise_amp), rate_(rate) {}

    SignalBuilder& silence(double seconds) {
        const auto n = count(seconds);
        for (std::size_t i = 0; i < n; ++i) out_.samples.push_back(static_cast<float>(noise_(rng_)));
        return *this;
    }

    SignalBuilder& tone(double seconds, double hz, double amp = 0.3) {
        const auto n = count(seconds);
        const std::size_t base = out_.samples.size();
        for (std::size_t i = 0; i < n; ++i) {
            const double t = static_cast<double>(base + i) / rate_;
            out_.samples.push_back(
                static_cast<float>(amp * std::sin(2.0 * std::numbers::pi * hz * t) + noise_(rng_)));
        }
        return *this;
    }

    double now_s() const { return static_cast<double>(out_.samples.size()) / rate_; }

    AudioBuffer build() const {
        AudioBuffer b = out_;
        b.sample_rate_hz = rate_;
        return b;
    }

private:
    std::size_t count(double seconds) const {
        return static_cast<std::size_t>(std::llround(seconds * rate_));
    }

    std::mt19937_64 rng_;
    std::normal_distribution<double> noise_;
    int rate_;
    AudioBuffer out_;
};

// Routes spdlog to an in-memory ring buffer for the lifetime of the object.
class LogCapture {
public:
    LogCapture() : sink_(std::make_shared<spdlog::sinks::ringbuffer_sink_mt>(256)) {
        previous_ = spdlog::default_logger();
        auto logger = std::make_shared<spdlog::logger>("capture", sink_);
        logger->set_pattern("%l: %v");
        logger->set_level(spdlog::level::trace);
        spdlog::set_default_logger(logger);
    }
    ~LogCapture() { spdlog::set_default_logger(previous_); }
    LogCapture(const LogCapture&) = delete;
    LogCapture& operator=(const LogCapture&) = delete;

    std::vector<std::string> lines() const { return sink_->last_formatted(); }

    bool contains(const std::string& needle) const {
        for (const auto& l : lines()) {
            if (l.find(needle) != std::string::npos) return true;
        }
        return false;
    }

private:
    std::shared_ptr<spdlog::sinks::ringbuffer_sink_mt> sink_;
    std::shared_ptr<spdlog::logger> previous_;
};

}  // namespace essumm::testing
