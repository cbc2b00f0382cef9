#include "essumm/features.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "essumm/errors.hpp"

namespace essumm {

static_assert(std::endian::native == std::endian::little,
              "ESF1 encoding assumes a little-endian host");

FeatureMatrix::FeatureMatrix(std::size_t n_frames, std::size_t dim, double frame_hop_s,
                             double first_center_s)
    : data_(n_frames * dim, 0.0), dim_(dim), hop_(frame_hop_s), first_(first_center_s) {}

FeatureMatrix::FeatureMatrix(std::vector<double> data, std::size_t dim, double frame_hop_s,
                             double first_center_s)
    : data_(std::move(data)), dim_(dim), hop_(frame_hop_s), first_(first_center_s) {
    if (dim_ == 0 || data_.size() % dim_ != 0) {
        throw ValidationError("feature data of " + std::to_string(data_.size()) +
                              " values is not a whole number of rows of dim " +
                              std::to_string(dim_));
    }
}

void validate(const FeatureMatrix& fm) {
    if (fm.dim() == 0) throw ValidationError("feature dim must be at least 1");
    if (!(fm.frame_hop_s() > 0.0) || !std::isfinite(fm.frame_hop_s())) {
        throw ValidationError("feature frame hop must be positive and finite");
    }
    if (!std::isfinite(fm.first_center_s()) || fm.first_center_s() < 0.0) {
        throw ValidationError("feature first_center_s must be finite and non-negative");
    }
    const auto& d = fm.data();
    for (std::size_t i = 0; i < d.size(); ++i) {
        if (!std::isfinite(d[i])) {
            throw ValidationError("non-finite feature value at index " + std::to_string(i) +
                                  " (frame " + std::to_string(i / fm.dim()) + ", column " +
                                  std::to_string(i % fm.dim()) + ")");
        }
    }
}

FeatureMatrix round_to_float32(const FeatureMatrix& fm) {
    std::vector<double> d = fm.data();
    for (double& v : d) v = static_cast<double>(static_cast<float>(v));
    return FeatureMatrix(std::move(d), fm.dim(), fm.frame_hop_s(), fm.first_center_s());
}

namespace {

template <typename T>
void put(std::vector<std::uint8_t>& out, T v) {
    const auto* p = reinterpret_cast<const std::uint8_t*>(&v);
    out.insert(out.end(), p, p + sizeof(T));
}

template <typename T>
T get(std::span<const std::uint8_t> bytes, std::size_t at) {
    T v;
    std::memcpy(&v, bytes.data() + at, sizeof(T));
    return v;
}

}  // namespace

std::vector<std::uint8_t> encode_esf1(const FeatureMatrix& fm) {
    validate(fm);
    std::vector<std::uint8_t> out;
    out.reserve(kEsf1HeaderBytes + kEsf1ReservedBytes + fm.data().size() * 4);
    out.insert(out.end(), {'E', 'S', 'F', '1'});
    out.push_back(1);
    put<std::uint32_t>(out, static_cast<std::uint32_t>(fm.dim()));
    put<std::uint32_t>(out, static_cast<std::uint32_t>(fm.n_frames()));
    put<double>(out, fm.frame_hop_s());
    put<double>(out, fm.first_center_s());
    out.insert(out.end(), kEsf1ReservedBytes, 0);
    for (double v : fm.data()) put<float>(out, static_cast<float>(v));
    return out;
}

FeatureMatrix decode_esf1(std::span<const std::uint8_t> bytes) {
    constexpr std::size_t kPayloadAt = kEsf1HeaderBytes + kEsf1ReservedBytes;
    if (bytes.size() < 4 || std::memcmp(bytes.data(), "ESF1", 4) != 0) {
        throw FormatError("bad ESF1 magic", 0);
    }
    if (bytes.size() < kPayloadAt) {
        throw TruncationError("ESF1 header needs " + std::to_string(kPayloadAt) + " bytes, file has " +
                                  std::to_string(bytes.size()),
                              bytes.size());
    }
    if (bytes[4] != 1) {
        throw FormatError("unsupported ESF1 version " + std::to_string(bytes[4]), 4);
    }
    const auto dim = get<std::uint32_t>(bytes, 5);
    const auto n_frames = get<std::uint32_t>(bytes, 9);
    const auto hop = get<double>(bytes, 13);
    const auto first = get<double>(bytes, 21);

    const std::size_t expected = static_cast<std::size_t>(dim) * n_frames * 4;
    const std::size_t actual = bytes.size() - kPayloadAt;
    if (actual != expected) {
        throw TruncationError("ESF1 payload is " + std::to_string(actual) + " bytes, header implies " +
                                  std::to_string(n_frames) + " x " + std::to_string(dim) +
                                  " x 4 = " + std::to_string(expected),
                              kPayloadAt);
    }
    if (dim == 0) throw ValidationError("ESF1 dim must be at least 1");

    std::vector<double> data(static_cast<std::size_t>(dim) * n_frames);
    for (std::size_t i = 0; i < data.size(); ++i) {
        data[i] = static_cast<double>(get<float>(bytes, kPayloadAt + 4 * i));
    }
    FeatureMatrix fm(std::move(data), dim, hop, first);
    validate(fm);
    return fm;
}

void store_features(const FeatureMatrix& fm, const std::filesystem::path& path) {
    const auto bytes = encode_esf1(fm);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("write failed: " + path.string());
}

FeatureMatrix load_features(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open feature file: " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    try {
        return decode_esf1(bytes);
    } catch (const TruncationError& e) {
        throw TruncationError(path.string() + ": " + e.what(), e.offset());
    } catch (const FormatError& e) {
        throw FormatError(path.string() + ": " + e.what(), e.offset());
    } catch (const ValidationError& e) {
        throw ValidationError(path.string() + ": " + e.what());
    }
}

FrameRange frame_range(const FeatureMatrix& fm, const Segment& seg) {
    const std::size_t n = fm.n_frames();
    // First index whose centre is >= t, using the same centre expression everywhere so
    // adjacent segments partition the frames exactly.
    auto lower = [&](double t) {
        double guess = std::ceil((t - fm.first_center_s()) / fm.frame_hop_s());
        std::size_t i = guess <= 0.0 ? 0
                      : guess >= static_cast<double>(n) ? n
                                                        : static_cast<std::size_t>(guess);
        while (i > 0 && fm.center_s(i - 1) >= t) --i;
        while (i < n && fm.center_s(i) < t) ++i;
        return i;
    };
    FrameRange r{lower(seg.start_s), lower(seg.end_s)};
    if (r.end < r.begin) r.end = r.begin;
    return r;
}

FeatureMatrix slice_frames(const FeatureMatrix& fm, const Segment& seg) {
    const FrameRange r = frame_range(fm, seg);
    const auto& d = fm.data();
    std::vector<double> rows(d.begin() + static_cast<std::ptrdiff_t>(r.begin * fm.dim()),
                             d.begin() + static_cast<std::ptrdiff_t>(r.end * fm.dim()));
    const double first = r.size() > 0 ? fm.center_s(r.begin) : std::max(0.0, seg.start_s);
    return FeatureMatrix(std::move(rows), fm.dim(), fm.frame_hop_s(), first);
}

}  // namespace essumm
