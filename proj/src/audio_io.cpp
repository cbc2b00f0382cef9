#include "essumm/audio_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "essumm/errors.hpp"

namespace essumm {

namespace {

constexpr std::uint16_t kFormatPcm = 0x0001;
constexpr std::uint16_t kFormatFloat = 0x0003;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::string codec_name(std::uint16_t tag) {
    switch (tag) {
        case kFormatPcm: return "PCM";
        case kFormatFloat: return "IEEE float";
        case 0x0002: return "Microsoft ADPCM";
        case 0x0006: return "A-law";
        case 0x0007: return "mu-law";
        case 0x0011: return "IMA ADPCM";
        case 0x0055: return "MPEG Layer 3";
        default: {
            char hex[8];
            std::snprintf(hex, sizeof(hex), "0x%04X", tag);
            return std::string("format tag ") + hex;
        }
    }
}

class ByteReader {
public:
    explicit ByteReader(const std::vector<std::uint8_t>& bytes) : bytes_(bytes) {}

    std::size_t pos() const { return pos_; }
    std::size_t remaining() const { return bytes_.size() - pos_; }
    void seek(std::size_t p) { pos_ = p; }

    void need(std::size_t n, const char* what) const {
        if (remaining() < n) {
            throw FormatError(std::string("truncated WAV: expected ") + what, pos_);
        }
    }

    std::string tag() {
        need(4, "4-byte chunk tag");
        std::string t(reinterpret_cast<const char*>(bytes_.data() + pos_), 4);
        pos_ += 4;
        return t;
    }

    std::uint16_t u16() {
        need(2, "16-bit field");
        std::uint16_t v = static_cast<std::uint16_t>(bytes_[pos_] | (bytes_[pos_ + 1] << 8));
        pos_ += 2;
        return v;
    }

    std::uint32_t u32() {
        need(4, "32-bit field");
        std::uint32_t v = 0;
        for (int i = 3; i >= 0; --i) v = (v << 8) | bytes_[pos_ + static_cast<std::size_t>(i)];
        pos_ += 4;
        return v;
    }

private:
    const std::vector<std::uint8_t>& bytes_;
    std::size_t pos_ = 0;
};

struct WavFormat {
    std::uint16_t codec = 0;
    std::uint16_t channels = 0;
    std::uint32_t sample_rate = 0;
    std::uint16_t block_align = 0;
    std::uint16_t bits = 0;
};

double decode_sample(const std::uint8_t* p, const WavFormat& fmt) {
    if (fmt.codec == kFormatFloat) {
        float f;
        std::memcpy(&f, p, sizeof(f));
        return static_cast<double>(f);
    }
    switch (fmt.bits) {
        case 16: {
            auto v = static_cast<std::int16_t>(p[0] | (p[1] << 8));
            return static_cast<double>(v) / 32768.0;
        }
        case 24: {
            std::int32_t v = p[0] | (p[1] << 8) | (p[2] << 16);
            if (v & 0x800000) v -= 0x1000000;
            return static_cast<double>(v) / 8388608.0;
        }
        default:
            return 0.0;
    }
}

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
    out.push_back(static_cast<std::uint8_t>(v & 0xFF));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xFF));
}

void put_tag(std::vector<std::uint8_t>& out, const char* tag) {
    out.insert(out.end(), tag, tag + 4);
}

}  // namespace

void validate(const AudioBuffer& buf) {
    if (buf.sample_rate_hz <= 0) {
        throw ValidationError("audio sample rate must be positive, got " +
                              std::to_string(buf.sample_rate_hz));
    }
    for (std::size_t i = 0; i < buf.samples.size(); ++i) {
        if (!std::isfinite(buf.samples[i])) {
            throw ValidationError("non-finite audio sample at index " + std::to_string(i));
        }
    }
}

AudioBuffer parse_wav(const std::vector<std::uint8_t>& bytes) {
    ByteReader rd(bytes);
    if (rd.tag() != "RIFF") throw FormatError("missing RIFF signature", 0);
    rd.u32();  // RIFF size; unreliable in streamed files, chunk walk bounds the parse instead
    if (rd.tag() != "WAVE") throw FormatError("missing WAVE form type", 8);

    WavFormat fmt;
    bool have_fmt = false;
    std::size_t fmt_body = 0;
    while (true) {
        if (rd.remaining() < 8) {
            throw FormatError(have_fmt ? "no data chunk found" : "no fmt chunk found", rd.pos());
        }
        const std::size_t chunk_at = rd.pos();
        const std::string id = rd.tag();
        const std::uint32_t size = rd.u32();
        const std::size_t body = rd.pos();

        if (id == "fmt ") {
            if (size < 16) throw FormatError("fmt chunk shorter than 16 bytes", chunk_at);
            rd.need(size, "fmt chunk body");
            fmt_body = body;
            fmt.codec = rd.u16();
            fmt.channels = rd.u16();
            fmt.sample_rate = rd.u32();
            rd.u32();  // byte rate
            fmt.block_align = rd.u16();
            fmt.bits = rd.u16();
            if (fmt.codec == kFormatExtensible) {
                if (size < 40) {
                    throw FormatError("WAVE_FORMAT_EXTENSIBLE fmt chunk shorter than 40 bytes",
                                      chunk_at);
                }
                rd.u16();  // cbSize
                rd.u16();  // valid bits
                rd.u32();  // channel mask
                fmt.codec = rd.u16();  // first two bytes of the subformat GUID
            }
            have_fmt = true;
        } else if (id == "data") {
            if (!have_fmt) throw FormatError("data chunk precedes fmt chunk", chunk_at);
            if (size > rd.remaining()) {
                throw FormatError("data chunk length " + std::to_string(size) +
                                      " exceeds remaining file size " +
                                      std::to_string(rd.remaining()),
                                  chunk_at + 4);
            }

            const bool int_ok = fmt.codec == kFormatPcm && (fmt.bits == 16 || fmt.bits == 24);
            const bool float_ok = fmt.codec == kFormatFloat && fmt.bits == 32;
            if (!int_ok && !float_ok) {
                throw UnsupportedFormatError("unsupported WAV encoding: " + codec_name(fmt.codec) +
                                             " with " + std::to_string(fmt.bits) +
                                             " bits per sample");
            }
            if (fmt.channels != 1 && fmt.channels != 2) {
                throw UnsupportedFormatError("unsupported WAV channel count " +
                                             std::to_string(fmt.channels) + " (" +
                                             codec_name(fmt.codec) + ")");
            }
            if (fmt.sample_rate == 0) throw FormatError("sample rate is zero", fmt_body + 4);
            const std::size_t bytes_per_sample = fmt.bits / 8;
            const std::size_t frame_bytes = bytes_per_sample * fmt.channels;
            if (fmt.block_align != frame_bytes) {
                throw FormatError("block align " + std::to_string(fmt.block_align) +
                                      " inconsistent with " + std::to_string(fmt.channels) +
                                      " channels of " + std::to_string(fmt.bits) + " bits",
                                  fmt_body + 12);
            }

            const std::size_t n = size / frame_bytes;
            AudioBuffer out;
            out.sample_rate_hz = static_cast<int>(fmt.sample_rate);
            out.samples.resize(n);
            const std::uint8_t* p = bytes.data() + body;
            for (std::size_t i = 0; i < n; ++i, p += frame_bytes) {
                if (fmt.channels == 1) {
                    out.samples[i] = static_cast<float>(decode_sample(p, fmt));
                } else {
                    const double l = decode_sample(p, fmt);
                    const double r = decode_sample(p + bytes_per_sample, fmt);
                    out.samples[i] = static_cast<float>(0.5 * (l + r));
                }
            }
            validate(out);
            return out;
        }

        // Chunks are word aligned.
        const std::size_t next = body + size + (size & 1u);
        if (next > bytes.size()) {
            throw FormatError("chunk '" + id + "' extends past end of file", chunk_at);
        }
        rd.seek(next);
    }
}

AudioBuffer read_wav(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open WAV file: " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    try {
        return parse_wav(bytes);
    } catch (const FormatError& e) {
        throw FormatError(path.string() + ": " + e.what(), e.offset());
    }
}

AudioBuffer resample(const AudioBuffer& buf, int target_hz) {
    if (target_hz <= 0) {
        throw ParameterError("resample target rate must be positive, got " +
                             std::to_string(target_hz));
    }
    if (target_hz == buf.sample_rate_hz) return buf;

    const std::size_t n = buf.samples.size();
    const auto out_len = static_cast<std::size_t>(std::llround(
        static_cast<double>(n) * target_hz / static_cast<double>(buf.sample_rate_hz)));

    AudioBuffer out;
    out.sample_rate_hz = target_hz;
    out.samples.resize(out_len);
    if (n == 0) return out;

    const double step = static_cast<double>(buf.sample_rate_hz) / target_hz;
    for (std::size_t i = 0; i < out_len; ++i) {
        const double pos = static_cast<double>(i) * step;
        const auto lo = std::min(static_cast<std::size_t>(pos), n - 1);
        const std::size_t hi = std::min(lo + 1, n - 1);
        const double frac = std::clamp(pos - static_cast<double>(lo), 0.0, 1.0);
        const double a = buf.samples[lo];
        const double b = buf.samples[hi];
        out.samples[i] = static_cast<float>(a + (b - a) * frac);
    }
    return out;
}

std::vector<std::uint8_t> encode_wav16(const AudioBuffer& buf) {
    validate(buf);
    const auto data_bytes = static_cast<std::uint32_t>(buf.samples.size() * 2);
    std::vector<std::uint8_t> out;
    out.reserve(44 + data_bytes);
    put_tag(out, "RIFF");
    put_u32(out, 36 + data_bytes);
    put_tag(out, "WAVE");
    put_tag(out, "fmt ");
    put_u32(out, 16);
    put_u16(out, kFormatPcm);
    put_u16(out, 1);
    put_u32(out, static_cast<std::uint32_t>(buf.sample_rate_hz));
    put_u32(out, static_cast<std::uint32_t>(buf.sample_rate_hz) * 2);
    put_u16(out, 2);
    put_u16(out, 16);
    put_tag(out, "data");
    put_u32(out, data_bytes);
    for (float s : buf.samples) {
        const double clamped = std::clamp(static_cast<double>(s), -1.0, 1.0);
        const double scaled = std::round(clamped * 32768.0);
        const auto v = static_cast<std::int16_t>(std::clamp(scaled, -32768.0, 32767.0));
        put_u16(out, static_cast<std::uint16_t>(v));
    }
    return out;
}

void write_wav(const AudioBuffer& buf, const std::filesystem::path& path) {
    const auto bytes = encode_wav16(buf);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace essumm
