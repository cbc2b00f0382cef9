#include "doctest.h"

#include <cmath>
#include <cstring>
#include <limits>
#include <random>

#include "essumm/audio_io.hpp"
#include "essumm/errors.hpp"
#include "support.hpp"

using namespace essumm;
using essumm::testing::TempDir;

namespace {

void put_u16(std::vector<std::uint8_t>& b, std::uint16_t v) {
    b.push_back(v & 0xFF);
    b.push_back(v >> 8);
}

void put_u32(std::vector<std::uint8_t>& b, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) b.push_back((v >> (8 * i)) & 0xFF);
}

void put_tag(std::vector<std::uint8_t>& b, const char* t) { b.insert(b.end(), t, t + 4); }

// Minimal RIFF/WAVE writer for hand-built fixtures.
std::vector<std::uint8_t> wav_bytes(std::uint16_t codec, std::uint16_t channels, std::uint32_t rate,
                                    std::uint16_t bits, const std::vector<std::uint8_t>& payload,
                                    bool junk_chunk = false) {
    std::vector<std::uint8_t> b;
    put_tag(b, "RIFF");
    put_u32(b, 0);
    put_tag(b, "WAVE");
    if (junk_chunk) {
        put_tag(b, "LIST");
        put_u32(b, 3);
        b.insert(b.end(), {'a', 'b', 'c', 0});
    }
    put_tag(b, "fmt ");
    put_u32(b, 16);
    put_u16(b, codec);
    put_u16(b, channels);
    put_u32(b, rate);
    put_u32(b, rate * channels * bits / 8);
    put_u16(b, static_cast<std::uint16_t>(channels * bits / 8));
    put_u16(b, bits);
    put_tag(b, "data");
    put_u32(b, static_cast<std::uint32_t>(payload.size()));
    b.insert(b.end(), payload.begin(), payload.end());
    const auto riff = static_cast<std::uint32_t>(b.size() - 8);
    std::memcpy(b.data() + 4, &riff, 4);
    return b;
}

std::vector<std::uint8_t> pcm16(const std::vector<std::int16_t>& v) {
    std::vector<std::uint8_t> b;
    for (auto s : v) put_u16(b, static_cast<std::uint16_t>(s));
    return b;
}

}  // namespace

TEST_CASE("pcm16 mono decodes to [-1, 1)") {
    const auto buf = parse_wav(wav_bytes(1, 1, 16000, 16, pcm16({0, 16384, -32768, 32767})));
    CHECK(buf.sample_rate_hz == 16000);
    REQUIRE(buf.samples.size() == 4);
    CHECK(buf.samples[0] == 0.0f);
    CHECK(buf.samples[1] == 0.5f);
    CHECK(buf.samples[2] == -1.0f);
    CHECK(buf.samples[3] == doctest::Approx(32767.0 / 32768.0));
}

TEST_CASE("stereo is averaged and keeps the per-channel frame count") {
    const auto buf = parse_wav(wav_bytes(1, 2, 8000, 16, pcm16({16384, 0, -16384, -16384, 100, 300})));
    REQUIRE(buf.samples.size() == 3);
    CHECK(buf.sample_rate_hz == 8000);
    CHECK(buf.samples[0] == 0.25f);
    CHECK(buf.samples[1] == -0.5f);
    CHECK(buf.samples[2] == doctest::Approx(200.0 / 32768.0));
}

TEST_CASE("24-bit PCM and float32 are accepted") {
    std::vector<std::uint8_t> p24{0x00, 0x00, 0x40, 0x00, 0x00, 0xC0};  // +0.5, -0.5
    const auto a = parse_wav(wav_bytes(1, 1, 16000, 24, p24));
    REQUIRE(a.samples.size() == 2);
    CHECK(a.samples[0] == 0.5f);
    CHECK(a.samples[1] == -0.5f);

    std::vector<std::uint8_t> pf(8);
    const float v[2] = {0.25f, -0.75f};
    std::memcpy(pf.data(), v, 8);
    const auto b = parse_wav(wav_bytes(3, 1, 16000, 32, pf));
    REQUIRE(b.samples.size() == 2);
    CHECK(b.samples[0] == 0.25f);
    CHECK(b.samples[1] == -0.75f);
}

TEST_CASE("unknown chunks before fmt are skipped") {
    const auto buf = parse_wav(wav_bytes(1, 1, 16000, 16, pcm16({1, 2, 3}), true));
    CHECK(buf.samples.size() == 3);
}

TEST_CASE("format errors carry byte offsets") {
    SUBCASE("bad magic") {
        auto b = wav_bytes(1, 1, 16000, 16, pcm16({1}));
        b[0] = 'X';
        try {
            parse_wav(b);
            FAIL("expected FormatError");
        } catch (const FormatError& e) {
            CHECK(e.offset() == 0);
        }
    }
    SUBCASE("not WAVE") {
        auto b = wav_bytes(1, 1, 16000, 16, pcm16({1}));
        b[8] = 'A';
        try {
            parse_wav(b);
            FAIL("expected FormatError");
        } catch (const FormatError& e) {
            CHECK(e.offset() == 8);
        }
    }
    SUBCASE("truncated data") {
        auto b = wav_bytes(1, 1, 16000, 16, pcm16({1, 2, 3, 4}));
        b.resize(b.size() - 3);
        CHECK_THROWS_AS(parse_wav(b), FormatError);
    }
    SUBCASE("truncated header") {
        auto b = wav_bytes(1, 1, 16000, 16, pcm16({1}));
        b.resize(10);
        CHECK_THROWS_AS(parse_wav(b), FormatError);
    }
    SUBCASE("block align mismatch") {
        auto b = wav_bytes(1, 1, 16000, 16, pcm16({1}));
        b[32] = 7;  // block align field of the fmt chunk
        try {
            parse_wav(b);
            FAIL("expected FormatError");
        } catch (const FormatError& e) {
            CHECK(e.offset() == 32);
        }
    }
}

TEST_CASE("unsupported codecs are named") {
    const auto b = wav_bytes(7, 1, 8000, 8, {0x7F, 0xFF});
    try {
        parse_wav(b);
        FAIL("expected UnsupportedFormatError");
    } catch (const UnsupportedFormatError& e) {
        CHECK(std::string(e.what()).find("mu-law") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_wav(wav_bytes(1, 1, 16000, 8, {1, 2})), UnsupportedFormatError);
    CHECK_THROWS_AS(parse_wav(wav_bytes(1, 3, 16000, 16, pcm16({1, 2, 3}))), UnsupportedFormatError);
}

TEST_CASE("missing file is an IoError") {
    CHECK_THROWS_AS(read_wav("/nonexistent/x.wav"), IoError);
}

TEST_CASE("write then read round trip stays within one quantization step") {
    TempDir dir("audio");
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    AudioBuffer b;
    for (int i = 0; i < 5000; ++i) b.samples.push_back(static_cast<float>(u(rng)));
    b.samples.push_back(1.0f);
    b.samples.push_back(-1.0f);
    b.samples.push_back(0.0f);
    write_wav(b, dir / "rt.wav");
    const auto r = read_wav(dir / "rt.wav");
    REQUIRE(r.samples.size() == b.samples.size());
    const double bound = std::ldexp(1.0, -15) + std::numeric_limits<float>::epsilon();
    double worst = 0.0;
    for (std::size_t i = 0; i < b.samples.size(); ++i) {
        worst = std::max(worst, std::abs(static_cast<double>(r.samples[i]) - b.samples[i]));
    }
    CHECK(worst <= bound);
    CHECK(worst <= 1.0 / 32767.0);
}

TEST_CASE("out-of-range amplitude is clamped to full scale") {
    AudioBuffer b;
    b.samples = {1.5f, -1.5f};
    const auto bytes = encode_wav16(b);
    REQUIRE(bytes.size() == 48);
    std::int16_t v[2];
    std::memcpy(v, bytes.data() + 44, 4);
    CHECK(v[0] == 32767);
    CHECK(v[1] == -32768);
}

TEST_CASE("empty buffer writes a valid zero-length WAV") {
    AudioBuffer b;
    const auto bytes = encode_wav16(b);
    CHECK(bytes.size() == 44);
    const auto r = parse_wav(bytes);
    CHECK(r.samples.empty());
    CHECK(r.sample_rate_hz == 16000);
}

TEST_CASE("validate rejects non-finite samples") {
    AudioBuffer b;
    b.samples = {0.0f, std::numeric_limits<float>::quiet_NaN()};
    CHECK_THROWS_AS(validate(b), ValidationError);
    CHECK_THROWS_AS(encode_wav16(b), ValidationError);
}

TEST_CASE("resample") {
    AudioBuffer b;
    b.sample_rate_hz = 8000;
    for (int i = 0; i < 800; ++i) b.samples.push_back(static_cast<float>(i) / 800.0f);

    SUBCASE("equal rate is the identity") {
        const auto same = resample(b, 8000);
        CHECK(same.samples == b.samples);
        CHECK(resample(same, 8000).samples == same.samples);
    }
    SUBCASE("length follows the rate ratio") {
        const auto up = resample(b, 16000);
        CHECK(up.sample_rate_hz == 16000);
        CHECK(up.samples.size() == 1600);
        CHECK(up.duration_s() == doctest::Approx(b.duration_s()));
        // a ramp is reproduced exactly by linear interpolation
        CHECK(up.samples[3] == doctest::Approx(1.5 / 800.0));
        const auto down = resample(b, 44100);
        CHECK(down.samples.size() == 4410);
    }
    SUBCASE("bad target") { CHECK_THROWS_AS(resample(b, 0), ParameterError); }
}
