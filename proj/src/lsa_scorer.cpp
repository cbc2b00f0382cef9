#include "essumm/lsa_scorer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "json.hpp"

#include "essumm/errors.hpp"

namespace essumm {

std::vector<TfIdfVector> tfidf(const std::vector<ClusterSequence>& sequences, std::size_t k) {
    const std::size_t n_docs = sequences.size();
    if (n_docs == 0) return {};

    std::vector<std::vector<std::size_t>> counts(n_docs, std::vector<std::size_t>(k, 0));
    std::vector<std::size_t> df(k, 0);
    for (std::size_t s = 0; s < n_docs; ++s) {
        for (auto id : sequences[s].ids) {
            if (id >= k) {
                throw ValidationError("cluster id " + std::to_string(id) + " out of range for k = " +
                                      std::to_string(k));
            }
            if (counts[s][id]++ == 0) ++df[id];
        }
    }

    std::vector<double> idf(k);
    for (std::size_t t = 0; t < k; ++t) {
        idf[t] = std::log((1.0 + static_cast<double>(n_docs)) / (1.0 + static_cast<double>(df[t]))) + 1.0;
    }

    std::vector<TfIdfVector> out(n_docs, TfIdfVector{std::vector<double>(k, 0.0)});
    for (std::size_t s = 0; s < n_docs; ++s) {
        const double len = static_cast<double>(sequences[s].size());
        if (len == 0.0) continue;
        for (std::size_t t = 0; t < k; ++t) {
            if (counts[s][t] == 0) continue;
            out[s].weights[t] = static_cast<double>(counts[s][t]) / len * idf[t];
        }
    }
    return out;
}

EigenDecomposition symmetric_eigen(std::vector<double> a, std::size_t n, double tol,
                                   std::size_t max_sweeps) {
    if (a.size() != n * n) throw InvariantError("symmetric_eigen: matrix is not n x n");
    auto at = [&](std::size_t i, std::size_t j) -> double& { return a[i * n + j]; };

    EigenDecomposition out;
    out.n = n;
    std::vector<double> v(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;

    double total = 0.0;
    for (double x : a) total += x * x;
    const double stop = tol * std::sqrt(total);

    auto off_norm = [&] {
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (i != j) acc += at(i, j) * at(i, j);
        return std::sqrt(acc);
    };

    bool converged = off_norm() <= stop;
    while (!converged && out.sweeps < max_sweeps) {
        ++out.sweeps;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = at(p, q);
                if (apq == 0.0) continue;
                const double theta = (at(q, q) - at(p, p)) / (2.0 * apq);
                const double t = std::abs(theta) > 1e150
                                     ? 0.5 / theta
                                     : (theta >= 0.0 ? 1.0 : -1.0) /
                                           (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;

                // A <- J^T A J with J the (p, q) rotation [[c, s], [-s, c]].
                for (std::size_t r = 0; r < n; ++r) {
                    const double arp = at(r, p), arq = at(r, q);
                    at(r, p) = c * arp - s * arq;
                    at(r, q) = s * arp + c * arq;
                }
                for (std::size_t r = 0; r < n; ++r) {
                    const double apr = at(p, r), aqr = at(q, r);
                    at(p, r) = c * apr - s * aqr;
                    at(q, r) = s * apr + c * aqr;
                }
                at(p, q) = 0.0;
                at(q, p) = 0.0;
                for (std::size_t r = 0; r < n; ++r) {
                    const double vrp = v[r * n + p], vrq = v[r * n + q];
                    v[r * n + p] = c * vrp - s * vrq;
                    v[r * n + q] = s * vrp + c * vrq;
                }
            }
        }
        converged = off_norm() <= stop;
    }
    if (!converged) {
        throw InvariantError("Jacobi eigensolver did not converge in " + std::to_string(max_sweeps) +
                             " sweeps");
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return at(i, i) > at(j, j); });
    out.values.resize(n);
    out.vectors.resize(n * n);
    for (std::size_t j = 0; j < n; ++j) {
        out.values[j] = at(order[j], order[j]);
        for (std::size_t r = 0; r < n; ++r) out.vectors[r * n + j] = v[r * n + order[j]];
    }
    return out;
}

LsaModel fit_pca(const std::vector<TfIdfVector>& vectors, std::size_t n_comp) {
    const std::size_t n = vectors.size();
    if (n < 2) {
        throw InsufficientDataError("PCA needs at least 2 segments, got " + std::to_string(n));
    }
    const std::size_t k = vectors.front().weights.size();
    for (const auto& v : vectors) {
        if (v.weights.size() != k) throw ValidationError("TF-IDF vectors have differing lengths");
    }
    if (n_comp < 1 || n_comp > std::min(n - 1, k)) {
        throw ParameterError("PCA component count " + std::to_string(n_comp) +
                             " outside [1, min(N-1, k)] = [1, " +
                             std::to_string(std::min(n - 1, k)) + "]");
    }

    LsaModel model;
    model.k = k;
    model.n_comp = n_comp;
    model.mean.assign(k, 0.0);
    for (const auto& v : vectors)
        for (std::size_t j = 0; j < k; ++j) model.mean[j] += v.weights[j];
    for (double& m : model.mean) m /= static_cast<double>(n);

    std::vector<double> cov(k * k, 0.0);
    std::vector<double> c(k);
    for (const auto& v : vectors) {
        for (std::size_t j = 0; j < k; ++j) c[j] = v.weights[j] - model.mean[j];
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = i; j < k; ++j) cov[i * k + j] += c[i] * c[j];
    }
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = i; j < k; ++j) {
            cov[i * k + j] /= static_cast<double>(n - 1);
            cov[j * k + i] = cov[i * k + j];
        }
    }

    const EigenDecomposition eig = symmetric_eigen(std::move(cov), k);
    model.eigenvalues.assign(eig.values.begin(), eig.values.begin() + static_cast<std::ptrdiff_t>(n_comp));
    model.components.resize(n_comp * k);
    for (std::size_t comp = 0; comp < n_comp; ++comp) {
        std::size_t arg = 0;
        for (std::size_t r = 1; r < k; ++r) {
            if (std::abs(eig.vectors[r * k + comp]) > std::abs(eig.vectors[arg * k + comp])) arg = r;
        }
        const double sign = eig.vectors[arg * k + comp] < 0.0 ? -1.0 : 1.0;
        for (std::size_t r = 0; r < k; ++r) model.components[comp * k + r] = sign * eig.vectors[r * k + comp];
    }
    return model;
}

std::vector<ScoredSegment> score_segments(const std::vector<TfIdfVector>& vectors,
                                          const LsaModel& model, const SegmentSet& segments) {
    if (vectors.size() != segments.size()) {
        throw InvariantError("score_segments: " + std::to_string(vectors.size()) +
                             " vectors for " + std::to_string(segments.size()) + " segments");
    }
    const std::size_t k = model.k;
    std::vector<ScoredSegment> out;
    out.reserve(vectors.size());
    std::vector<double> centred(k);
    for (std::size_t i = 0; i < vectors.size(); ++i) {
        if (vectors[i].weights.size() != k) {
            throw ValidationError("TF-IDF vector length does not match model dimension");
        }
        for (std::size_t j = 0; j < k; ++j) centred[j] = vectors[i].weights[j] - model.mean[j];
        std::vector<double> residual = centred;
        for (std::size_t comp = 0; comp < model.n_comp; ++comp) {
            const auto p = model.component(comp);
            const double coef = std::inner_product(p.begin(), p.end(), centred.begin(), 0.0);
            for (std::size_t j = 0; j < k; ++j) residual[j] -= coef * p[j];
        }
        const double d =
            std::sqrt(std::inner_product(residual.begin(), residual.end(), residual.begin(), 0.0));
        out.push_back(ScoredSegment{segments.segments[i], d, 1.0 / (1.0 + d)});
    }
    return out;
}

std::string lsa_model_json(const LsaModel& model) {
    nlohmann::ordered_json j;
    j["mean"] = model.mean;
    j["eigenvalues"] = model.eigenvalues;
    auto rows = nlohmann::json::array();
    for (std::size_t c = 0; c < model.n_comp; ++c) {
        const auto r = model.component(c);
        rows.push_back(std::vector<double>(r.begin(), r.end()));
    }
    j["components"] = std::move(rows);
    return j.dump(2);
}

}  // namespace essumm
