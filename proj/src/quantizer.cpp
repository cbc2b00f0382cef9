#include "essumm/quantizer.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <random>

#include "json.hpp"

#include "essumm/errors.hpp"

namespace essumm {

namespace {

double sq_distance(std::span<const double> a, std::span<const double> b) {
    double acc = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        const double d = a[j] - b[j];
        acc += d * d;
    }
    return acc;
}

// Uniform double in [0, 1) from the top 53 bits; std::uniform_real_distribution is not
// specified bit-exactly across standard libraries.
double unit_uniform(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Index chosen with probability proportional to weights[i]. Falls back to the first
// index when every weight is zero.
std::size_t weighted_pick(const std::vector<double>& weights, std::mt19937_64& rng) {
    const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
    if (!(total > 0.0)) return 0;
    const double target = unit_uniform(rng) * total;
    double acc = 0.0;
    std::size_t last_positive = 0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (weights[i] <= 0.0) continue;
        acc += weights[i];
        last_positive = i;
        if (target < acc) return i;
    }
    return last_positive;
}

// k-means++ seeding. Frames are visited in lexicographic order so the chosen seeds
// do not depend on the order frames were supplied in.
void seed_plus_plus(const FeatureMatrix& x, Codebook& cb, std::mt19937_64& rng) {
    const std::size_t n = x.n_frames();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const auto ra = x.row(a), rb = x.row(b);
        return std::lexicographical_compare(ra.begin(), ra.end(), rb.begin(), rb.end());
    });

    auto set_centroid = [&](std::size_t c, std::size_t frame) {
        const auto r = x.row(frame);
        std::copy(r.begin(), r.end(), cb.centroids.begin() + static_cast<std::ptrdiff_t>(c * cb.dim));
    };

    const auto first = static_cast<std::size_t>(unit_uniform(rng) * static_cast<double>(n));
    set_centroid(0, order[std::min(first, n - 1)]);

    std::vector<double> d2(n);
    for (std::size_t i = 0; i < n; ++i) d2[i] = sq_distance(x.row(order[i]), cb.centroid(0));
    for (std::size_t c = 1; c < cb.k; ++c) {
        const std::size_t pick = weighted_pick(d2, rng);
        set_centroid(c, order[pick]);
        for (std::size_t i = 0; i < n; ++i) {
            d2[i] = std::min(d2[i], sq_distance(x.row(order[i]), cb.centroid(c)));
        }
    }
}

double assign(const FeatureMatrix& x, const Codebook& cb, std::vector<std::uint32_t>& labels,
              std::vector<double>& dist) {
    double inertia = 0.0;
    for (std::size_t i = 0; i < x.n_frames(); ++i) {
        labels[i] = nearest_centroid(cb, x.row(i), &dist[i]);
        inertia += dist[i];
    }
    return inertia;
}

void update(const FeatureMatrix& x, Codebook& cb, const std::vector<std::uint32_t>& labels,
            const std::vector<double>& dist) {
    std::vector<double> sums(cb.k * cb.dim, 0.0);
    std::vector<std::size_t> counts(cb.k, 0);
    for (std::size_t i = 0; i < x.n_frames(); ++i) {
        const auto r = x.row(i);
        double* s = sums.data() + labels[i] * cb.dim;
        for (std::size_t j = 0; j < cb.dim; ++j) s[j] += r[j];
        ++counts[labels[i]];
    }

    // Frames already used to revive an empty cluster in this update.
    std::vector<bool> taken(x.n_frames(), false);
    for (std::size_t c = 0; c < cb.k; ++c) {
        double* centroid = cb.centroids.data() + c * cb.dim;
        if (counts[c] > 0) {
            for (std::size_t j = 0; j < cb.dim; ++j) {
                centroid[j] = sums[c * cb.dim + j] / static_cast<double>(counts[c]);
            }
            continue;
        }
        std::size_t far = x.n_frames();
        for (std::size_t i = 0; i < x.n_frames(); ++i) {
            if (taken[i]) continue;
            if (far == x.n_frames() || dist[i] > dist[far]) far = i;
        }
        if (far == x.n_frames()) continue;
        taken[far] = true;
        const auto r = x.row(far);
        std::copy(r.begin(), r.end(), centroid);
    }
}

Codebook lloyd(const FeatureMatrix& frames, const KMeansParams& params, std::mt19937_64& rng) {
    Codebook cb;
    cb.k = params.k;
    cb.dim = frames.dim();
    cb.seed = params.seed;
    cb.centroids.assign(cb.k * cb.dim, 0.0);
    seed_plus_plus(frames, cb, rng);

    const std::size_t n = frames.n_frames();
    std::vector<std::uint32_t> labels(n);
    std::vector<double> dist(n);
    double inertia = assign(frames, cb, labels, dist);
    cb.inertia_trace.push_back(inertia);

    for (std::size_t it = 0; it < params.max_iters; ++it) {
        if (inertia == 0.0) break;
        update(frames, cb, labels, dist);
        const double next = assign(frames, cb, labels, dist);
        cb.inertia_trace.push_back(next);
        ++cb.iterations;
        const double gain = (inertia - next) / inertia;
        inertia = next;
        if (gain < params.rel_tol) break;
    }
    cb.inertia = inertia;
    return cb;
}

}  // namespace

std::uint32_t nearest_centroid(const Codebook& cb, std::span<const double> x, double* sq_dist) {
    std::uint32_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < cb.k; ++c) {
        const double d = sq_distance(x, cb.centroid(c));
        if (d < best_d) {
            best_d = d;
            best = static_cast<std::uint32_t>(c);
        }
    }
    if (sq_dist) *sq_dist = best_d;
    return best;
}

Codebook fit_kmeans(const FeatureMatrix& frames, const KMeansParams& params) {
    if (params.k == 0) throw ParameterError("k-means needs k >= 1");
    if (params.n_init == 0) throw ParameterError("k-means needs n_init >= 1");
    if (frames.n_frames() < params.k) {
        throw InsufficientDataError("k-means needs at least k frames: have " +
                                    std::to_string(frames.n_frames()) + " frames for k = " +
                                    std::to_string(params.k));
    }

    // One generator feeds every start, so the whole fit is a function of the seed.
    std::mt19937_64 rng(params.seed);
    Codebook best;
    for (std::size_t run = 0; run < params.n_init; ++run) {
        Codebook cb = lloyd(frames, params, rng);
        if (run == 0 || cb.inertia < best.inertia) best = std::move(cb);
        if (best.inertia == 0.0) break;
    }
    return best;
}

ClusterSequence quantize(const FeatureMatrix& fm, const Codebook& cb) {
    if (fm.dim() != cb.dim) {
        throw ValidationError("feature dim " + std::to_string(fm.dim()) +
                              " does not match codebook dim " + std::to_string(cb.dim));
    }
    ClusterSequence seq;
    seq.ids.reserve(fm.n_frames());
    for (std::size_t i = 0; i < fm.n_frames(); ++i) seq.ids.push_back(nearest_centroid(cb, fm.row(i)));
    return seq;
}

std::string codebook_json(const Codebook& cb) {
    nlohmann::ordered_json j;
    j["k"] = cb.k;
    j["dim"] = cb.dim;
    j["seed"] = cb.seed;
    j["inertia"] = cb.inertia;
    auto rows = nlohmann::json::array();
    for (std::size_t c = 0; c < cb.k; ++c) {
        const auto r = cb.centroid(c);
        rows.push_back(std::vector<double>(r.begin(), r.end()));
    }
    j["centroids"] = std::move(rows);
    return j.dump(2);
}

}  // namespace essumm
