#include "dtq/static_measures.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "dtq/errors.hpp"
#include "dtq/numeric.hpp"

namespace dtq {

namespace {

void check_epsilon(double epsilon) {
    if (!(epsilon > 0.0)) {
        throw ValidationError("epsilon must be positive");
    }
}

}  // namespace

PairScore npmi_pair(const CooccurrenceStats& stats, WordId w1, WordId w2, double epsilon) {
    check_epsilon(epsilon);
    const double p1 = stats.p_word(w1);
    const double p2 = stats.p_word(w2);
    if (p1 == 0.0 || p2 == 0.0) {
        return {0.0, false};
    }
    const double joint = stats.p_pair(w1, w2) + epsilon;
    const double denom = -std::log(joint);
    // joint >= 1 only when both words fill every window; the self-pair limit is 1.
    if (!(denom > 0.0)) {
        return {1.0, true};
    }
    const double score = std::log(joint / (p1 * p2)) / denom;
    return {std::clamp(score, -1.0, 1.0), true};
}

PairScore npmi_pair(const CooccurrenceStats& stats, std::string_view w1, std::string_view w2, double epsilon) {
    check_epsilon(epsilon);
    const auto a = stats.vocabulary().find(w1);
    const auto b = stats.vocabulary().find(w2);
    if (!a || !b) {
        return {0.0, false};
    }
    return npmi_pair(stats, *a, *b, epsilon);
}

CoherenceResult topic_coherence(const CooccurrenceStats& stats, const TopicWordList& topic, double epsilon) {
    if (topic.size() < 2) {
        throw ValidationError("coherence needs at least two words");
    }
    check_epsilon(epsilon);
    std::vector<std::optional<WordId>> ids;
    ids.reserve(topic.size());
    for (const auto& w : topic) {
        ids.push_back(stats.vocabulary().find(w));
    }
    CoherenceResult result;
    double sum = 0.0;
    for (std::size_t j = 1; j < ids.size(); ++j) {
        for (std::size_t i = 0; i < j; ++i) {
            PairScore s;
            if (ids[i] && ids[j]) {
                s = npmi_pair(stats, *ids[i], *ids[j], epsilon);
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

double topic_redundancy(const TopicWordList& topic, std::span<const TopicWordList> others) {
    if (others.empty()) {
        throw ValidationError("redundancy needs at least one other topic");
    }
    std::size_t hits = 0;
    for (const auto& w : topic) {
        for (const auto& q : others) {
            if (q.contains(w)) {
                ++hits;
            }
        }
    }
    return static_cast<double>(hits) / (static_cast<double>(others.size()) * static_cast<double>(topic.size()));
}

double topic_diversity(const TopicWordList& topic, std::span<const TopicWordList> others) {
    return 1.0 - topic_redundancy(topic, others);
}

double diversity_unique_fraction(std::span<const TopicWordList> topics) {
    if (topics.empty()) {
        throw ValidationError("unique-word diversity needs at least one topic");
    }
    std::unordered_map<std::string_view, std::size_t> lists_containing;
    std::size_t slots = 0;
    for (const auto& t : topics) {
        slots += t.size();
        for (const auto& w : t) {
            ++lists_containing[w];
        }
    }
    std::size_t unique = 0;
    for (const auto& [w, c] : lists_containing) {
        if (c == 1) {
            ++unique;
        }
    }
    return static_cast<double>(unique) / static_cast<double>(slots);
}

double topic_quality(std::span<const double> coherences, std::span<const double> diversities) {
    if (coherences.size() != diversities.size()) {
        throw ValidationError("coherence and diversity lists differ in length");
    }
    if (coherences.empty()) {
        throw ValidationError("topic quality needs at least one topic");
    }
    std::vector<double> products(coherences.size());
    for (std::size_t k = 0; k < coherences.size(); ++k) {
        products[k] = coherences[k] * diversities[k];
    }
    return order_free_mean(products);
}

double YearwiseReport::mean_tc() const {
    std::vector<double> v;
    for (const auto& y : per_year) v.push_back(y.tc);
    return mean(v);
}

double YearwiseReport::mean_td() const {
    std::vector<double> v;
    for (const auto& y : per_year) v.push_back(y.td);
    return mean(v);
}

double YearwiseReport::mean_tq() const {
    std::vector<double> v;
    for (const auto& y : per_year) v.push_back(y.tq);
    return mean(v);
}

YearwiseReport yearwise_report(const DynamicTopics& topics, const StatsLookup& stats_for, double epsilon) {
    check_epsilon(epsilon);
    YearwiseReport report;
    report.epsilon = epsilon;
    report.n_top = topics.n_top();
    const std::size_t K = topics.n_topics();
    for (std::size_t t = 0; t < topics.n_timestamps(); ++t) {
        const auto& stats = stats_for(topics.timestamps()[t]);
        const auto slices = topics.at_time(t);
        YearMeasures year;
        year.timestamp = topics.timestamps()[t];
        for (std::size_t k = 0; k < K; ++k) {
            const auto coh = topic_coherence(stats, slices[k], epsilon);
            year.coherence.push_back(coh.value);
            if (coh.warning()) {
                ++year.coherence_warnings;
            }
            if (K >= 2) {
                std::vector<TopicWordList> others;
                others.reserve(K - 1);
                for (std::size_t q = 0; q < K; ++q) {
                    if (q != k) {
                        others.push_back(slices[q]);
                    }
                }
                year.diversity.push_back(topic_diversity(slices[k], others));
            } else {
                // A lone topic overlaps nothing.
                year.diversity.push_back(1.0);
            }
        }
        year.tc = order_free_mean(year.coherence);
        year.td = order_free_mean(year.diversity);
        year.tq = topic_quality(year.coherence, year.diversity);
        year.td_unique = diversity_unique_fraction(slices);
        report.per_year.push_back(std::move(year));
    }
    return report;
}

YearwiseReport yearwise_report(const DynamicTopics& topics, const CooccurrenceStats& stats, double epsilon) {
    return yearwise_report(
        topics, [&stats](Timestamp) -> const CooccurrenceStats& { return stats; }, epsilon);
}

YearwiseReport yearwise_report(const DynamicTopics& topics, const std::map<Timestamp, CooccurrenceStats>& stats,
                               double epsilon) {
    return yearwise_report(
        topics,
        [&stats](Timestamp ts) -> const CooccurrenceStats& {
            auto it = stats.find(ts);
            if (it == stats.end()) {
                throw ValidationError("no reference stats for timestamp " + std::to_string(ts));
            }
            return it->second;
        },
        epsilon);
}

}  // namespace dtq
