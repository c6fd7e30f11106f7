#include "dtq/temporal_measures.hpp"

#include <thread>

#include "dtq/errors.hpp"
#include "dtq/numeric.hpp"

namespace dtq {

CoherenceResult ttc(const CooccurrenceStats& stats, const TopicWordList& start, const TopicWordList& end,
                    double epsilon) {
    if (!(epsilon > 0.0)) {
        throw ValidationError("epsilon must be positive");
    }
    const auto& vocab = stats.vocabulary();
    std::vector<std::optional<WordId>> end_ids;
    end_ids.reserve(end.size());
    for (const auto& w : end) {
        end_ids.push_back(vocab.find(w));
    }
    CoherenceResult result;
    double sum = 0.0;
    for (const auto& ws : start) {
        const auto a = vocab.find(ws);
        for (const auto& b : end_ids) {
            PairScore s;
            if (a && b) {
                s = npmi_pair(stats, *a, *b, epsilon);
            }
            if (s.defined) {
                sum += s.value;
                ++result.defined_pairs;
            } else {
                ++result.undefined_pairs;
            }
        }
    }
    result.value = result.defined_pairs == 0 ? 0.0 : sum / static_cast<double>(result.defined_pairs);
    return result;
}

double tts(std::span<const TopicWordList> window) {
    if (window.size() < 2) {
        throw ValidationError("smoothness window needs at least two slices");
    }
    const auto& anchor = window.front();
    const auto n = anchor.size();
    std::size_t hits = 0;
    for (std::size_t s = 1; s < window.size(); ++s) {
        if (window[s].size() != n) {
            throw ValidationError("smoothness window slices differ in length");
        }
        for (const auto& w : anchor) {
            if (window[s].contains(w)) {
                ++hits;
            }
        }
    }
    return static_cast<double>(hits) / (static_cast<double>(window.size() - 1) * static_cast<double>(n));
}

namespace {

void check_window(std::size_t n_slices, std::size_t window_length) {
    if (window_length < 2) {
        throw ValidationError("window length L must be at least 2");
    }
    if (n_slices < window_length) {
        throw ValidationError("sequence of " + std::to_string(n_slices) + " slices is shorter than window length " +
                              std::to_string(window_length));
    }
}

TopicTemporal topic_series(const CooccurrenceStats& stats, std::span<const TopicWordList> slices,
                           std::size_t window_length, double epsilon) {
    check_window(slices.size(), window_length);
    TopicTemporal out;
    const std::size_t windows = slices.size() - window_length + 1;
    double sum = 0.0;
    for (std::size_t t = 0; t < windows; ++t) {
        const auto c = ttc(stats, slices[t], slices[t + window_length - 1], epsilon);
        const double s = tts(slices.subspan(t, window_length));
        if (c.warning()) {
            ++out.ttc_warnings;
        }
        out.ttc.push_back(c.value);
        out.tts.push_back(s);
        sum += c.value * s;
    }
    out.ttq = sum / static_cast<double>(windows);
    return out;
}

}  // namespace

double ttq(const CooccurrenceStats& stats, std::span<const TopicWordList> slices, std::size_t window_length,
           double epsilon) {
    return topic_series(stats, slices, window_length, epsilon).ttq;
}

double btc(std::span<const double> per_year_coherences) {
    if (per_year_coherences.empty()) {
        throw ValidationError("baseline coherence needs at least one value");
    }
    return mean(per_year_coherences);
}

double bts(std::span<const TopicWordList> slices) {
    if (slices.size() < 2) {
        throw ValidationError("baseline smoothness needs at least two slices");
    }
    return tts(slices);
}

double dtq(std::span<const double> tq_per_year, std::span<const double> ttq_per_topic) {
    if (tq_per_year.empty() || ttq_per_topic.empty()) {
        throw ValidationError("DTQ needs non-empty TQ and TTQ lists");
    }
    return 0.5 * (mean(tq_per_year) + mean(ttq_per_topic));
}

double TopicTemporal::mean_ttc() const { return mean(ttc); }
double TopicTemporal::mean_tts() const { return mean(tts); }

TemporalReport temporal_report(const CooccurrenceStats& stats, const DynamicTopics& topics,
                               std::size_t window_length, double epsilon, unsigned threads) {
    check_window(topics.n_timestamps(), window_length);
    TemporalReport report;
    report.window_length = window_length;
    report.yearwise = yearwise_report(topics, stats, epsilon);

    const std::size_t K = topics.n_topics();
    report.topics.resize(K);
    auto fill = [&](std::size_t k) {
        const auto& seq = topics.topic(k);
        auto series = topic_series(stats, seq, window_length, epsilon);
        std::vector<double> coherences;
        for (const auto& year : report.yearwise.per_year) {
            coherences.push_back(year.coherence[k]);
        }
        series.btc = btc(coherences);
        series.bts = bts(seq);
        report.topics[k] = std::move(series);
    };
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(K)));
    if (threads == 1) {
        for (std::size_t k = 0; k < K; ++k) {
            fill(k);
        }
    } else {
        std::vector<std::thread> workers;
        for (unsigned w = 0; w < threads; ++w) {
            workers.emplace_back([&, w] {
                for (std::size_t k = w; k < K; k += threads) {
                    fill(k);
                }
            });
        }
        for (auto& w : workers) {
            w.join();
        }
    }

    std::vector<double> all_ttc;
    std::vector<double> all_tts;
    std::vector<double> ttqs;
    for (const auto& t : report.topics) {
        all_ttc.insert(all_ttc.end(), t.ttc.begin(), t.ttc.end());
        all_tts.insert(all_tts.end(), t.tts.begin(), t.tts.end());
        ttqs.push_back(t.ttq);
    }
    report.mean_ttc = mean(all_ttc);
    report.mean_tts = mean(all_tts);
    report.mean_ttq = mean(ttqs);
    std::vector<double> tqs;
    for (const auto& y : report.yearwise.per_year) {
        tqs.push_back(y.tq);
    }
    report.dtq = dtq(tqs, ttqs);
    return report;
}

}  // namespace dtq
