#include "essumm/rouge_eval.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>

#include "json.hpp"

#include "essumm/errors.hpp"

namespace essumm::rouge {

namespace {

using Counts = std::unordered_map<std::string, std::size_t>;

// Tokens are alphanumeric, so the unit separator cannot collide with token content.
constexpr char kJoin = '\x1f';

Counts ngram_counts(const TokenList& toks, std::size_t n) {
    Counts c;
    if (n == 0 || toks.size() < n) return c;
    for (std::size_t i = 0; i + n <= toks.size(); ++i) {
        std::string key = toks[i];
        for (std::size_t j = 1; j < n; ++j) {
            key += kJoin;
            key += toks[i + j];
        }
        ++c[key];
    }
    return c;
}

Counts su_counts(const TokenList& toks, std::size_t max_gap) {
    Counts c = ngram_counts(toks, 1);
    for (std::size_t i = 0; i < toks.size(); ++i) {
        for (std::size_t j = i + 1; j < toks.size() && j - i - 1 <= max_gap; ++j) {
            ++c[toks[i] + kJoin + toks[j]];
        }
    }
    return c;
}

std::size_t total(const Counts& c) {
    std::size_t n = 0;
    for (const auto& [_, v] : c) n += v;
    return n;
}

std::size_t clipped_overlap(const Counts& hyp, const Counts& ref) {
    std::size_t n = 0;
    for (const auto& [key, h] : hyp) {
        auto it = ref.find(key);
        if (it != ref.end()) n += std::min(h, it->second);
    }
    return n;
}

Score compare(const Counts& hyp, const Counts& ref) {
    return Score::from_counts(static_cast<double>(clipped_overlap(hyp, ref)),
                              static_cast<double>(total(ref)), static_cast<double>(total(hyp)));
}

nlohmann::ordered_json to_json(const Score& s) {
    nlohmann::ordered_json j;
    j["r"] = s.recall;
    j["p"] = s.precision;
    j["f1"] = s.f1;
    return j;
}

std::string read_text(const std::filesystem::path& p) {
    std::ifstream in(p);
    if (!in) throw IoError("cannot open summary file: " + p.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

Score Score::from_counts(double overlap, double ref_units, double hyp_units) {
    Score s;
    s.recall = ref_units > 0.0 ? overlap / ref_units : 0.0;
    s.precision = hyp_units > 0.0 ? overlap / hyp_units : 0.0;
    s.f1 = s.recall + s.precision > 0.0 ? 2.0 * s.recall * s.precision / (s.recall + s.precision) : 0.0;
    return s;
}

TokenList tokenize(const std::string& text) {
    TokenList out;
    std::string cur;
    for (char ch : text) {
        const auto c = static_cast<unsigned char>(ch);
        const bool alnum = (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
        if (alnum) {
            cur += static_cast<char>(c >= 'A' && c <= 'Z' ? c - 'A' + 'a' : c);
        } else if (!cur.empty()) {
            out.push_back(std::move(cur));
            cur.clear();
        }
    }
    if (!cur.empty()) out.push_back(std::move(cur));
    return out;
}

Score rouge_n(const TokenList& hyp, const TokenList& ref, std::size_t n) {
    if (n == 0) throw ParameterError("ROUGE-N needs n >= 1");
    return compare(ngram_counts(hyp, n), ngram_counts(ref, n));
}

Score rouge_su(const TokenList& hyp, const TokenList& ref, std::size_t max_gap) {
    return compare(su_counts(hyp, max_gap), su_counts(ref, max_gap));
}

const char* metric_name(Metric m) {
    switch (m) {
        case Metric::rouge1: return "rouge1";
        case Metric::rouge2: return "rouge2";
        case Metric::rougesu4: return "rougesu4";
    }
    return "?";
}

std::optional<Metric> parse_metric(const std::string& name) {
    for (Metric m : {Metric::rouge1, Metric::rouge2, Metric::rougesu4}) {
        if (name == metric_name(m)) return m;
    }
    return std::nullopt;
}

Score score(Metric m, const TokenList& hyp, const TokenList& ref) {
    switch (m) {
        case Metric::rouge1: return rouge_n(hyp, ref, 1);
        case Metric::rouge2: return rouge_n(hyp, ref, 2);
        case Metric::rougesu4: return rouge_su(hyp, ref, 4);
    }
    return {};
}

Report evaluate(const std::vector<Hypothesis>& hyps, const std::vector<References>& refs,
                std::optional<std::size_t> truncate_words, const std::vector<Metric>& metrics) {
    std::map<std::string, const References*> by_id;
    for (const auto& r : refs) by_id[r.meeting_id] = &r;

    std::vector<const Hypothesis*> sorted;
    std::set<std::string> seen;
    for (const auto& h : hyps) {
        if (!seen.insert(h.meeting_id).second) {
            throw ValidationError("duplicate hypothesis for meeting '" + h.meeting_id + "'");
        }
        sorted.push_back(&h);
    }
    std::sort(sorted.begin(), sorted.end(),
              [](const Hypothesis* a, const Hypothesis* b) { return a->meeting_id < b->meeting_id; });

    Report report;
    for (const Hypothesis* h : sorted) {
        auto it = by_id.find(h->meeting_id);
        if (it == by_id.end() || it->second->texts.empty()) {
            throw DataError("no reference summary for meeting '" + h->meeting_id + "'");
        }
        TokenList hyp_toks = tokenize(h->text);
        if (truncate_words && hyp_toks.size() > *truncate_words) hyp_toks.resize(*truncate_words);
        std::vector<TokenList> ref_toks;
        for (const auto& t : it->second->texts) ref_toks.push_back(tokenize(t));

        MeetingResult mr;
        mr.meeting_id = h->meeting_id;
        for (Metric m : metrics) {
            MetricResult res;
            bool first = true;
            for (std::size_t r = 0; r < ref_toks.size(); ++r) {
                const Score s = score(m, hyp_toks, ref_toks[r]);
                if (first || s.f1 > res.best.f1) {
                    res.best = s;
                    res.best_ref = r;
                    first = false;
                }
                res.mean.recall += s.recall;
                res.mean.precision += s.precision;
                res.mean.f1 += s.f1;
            }
            const auto n = static_cast<double>(ref_toks.size());
            res.mean.recall /= n;
            res.mean.precision /= n;
            res.mean.f1 /= n;
            mr.metrics[m] = res;
        }
        report.per_meeting.push_back(std::move(mr));
    }

    if (!report.per_meeting.empty()) {
        const auto n = static_cast<double>(report.per_meeting.size());
        for (Metric m : metrics) {
            Score best, mean;
            for (const auto& mr : report.per_meeting) {
                const auto& res = mr.metrics.at(m);
                best.recall += res.best.recall;
                best.precision += res.best.precision;
                best.f1 += res.best.f1;
                mean.recall += res.mean.recall;
                mean.precision += res.mean.precision;
                mean.f1 += res.mean.f1;
            }
            for (Score* s : {&best, &mean}) {
                s->recall /= n;
                s->precision /= n;
                s->f1 /= n;
            }
            report.macro[m] = best;
            report.macro_mean_ref[m] = mean;
        }
    }
    return report;
}

std::string report_json(const Report& report) {
    nlohmann::ordered_json j;
    nlohmann::ordered_json per = nlohmann::ordered_json::object();
    for (const auto& mr : report.per_meeting) {
        nlohmann::ordered_json mj;
        for (const auto& [m, res] : mr.metrics) {
            nlohmann::ordered_json rj;
            rj["best"] = to_json(res.best);
            rj["best_ref"] = res.best_ref;
            rj["mean"] = to_json(res.mean);
            mj[metric_name(m)] = std::move(rj);
        }
        per[mr.meeting_id] = std::move(mj);
    }
    j["per_meeting"] = std::move(per);
    nlohmann::ordered_json macro = nlohmann::ordered_json::object();
    for (const auto& [m, s] : report.macro) macro[metric_name(m)] = to_json(s);
    j["macro"] = std::move(macro);
    nlohmann::ordered_json macro_mean = nlohmann::ordered_json::object();
    for (const auto& [m, s] : report.macro_mean_ref) macro_mean[metric_name(m)] = to_json(s);
    j["macro_mean_ref"] = std::move(macro_mean);
    return j.dump(2) + "\n";
}

std::pair<std::vector<Hypothesis>, std::vector<References>> load_mapping(
    const std::filesystem::path& mapping) {
    const std::string text = read_text(mapping);
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw FormatError(mapping.string() + ": not valid JSON: " + e.what(), e.byte);
    }
    if (!doc.is_object()) throw ValidationError(mapping.string() + ": mapping must be a JSON object");

    const auto base = mapping.parent_path();
    auto resolve = [&](const std::string& p) {
        std::filesystem::path path(p);
        return path.is_absolute() ? path : base / path;
    };

    std::vector<Hypothesis> hyps;
    std::vector<References> refs;
    for (const auto& [id, entry] : doc.items()) {
        if (!entry.is_object() || !entry.contains("hyp") || !entry["hyp"].is_string() ||
            !entry.contains("refs") || !entry["refs"].is_array()) {
            throw ValidationError("mapping entry '" + id + "' needs \"hyp\" (string) and \"refs\" (array)");
        }
        hyps.push_back({id, read_text(resolve(entry["hyp"].get<std::string>()))});
        References r{id, {}};
        for (const auto& p : entry["refs"]) {
            if (!p.is_string()) throw ValidationError("mapping entry '" + id + "' has a non-string ref path");
            r.texts.push_back(read_text(resolve(p.get<std::string>())));
        }
        refs.push_back(std::move(r));
    }
    return {std::move(hyps), std::move(refs)};
}

}  // namespace essumm::rouge
