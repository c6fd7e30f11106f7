#ifndef DTQ_STATIC_MEASURES_HPP
#define DTQ_STATIC_MEASURES_HPP

#include <cstddef>
#include <functional>
#include <map>
#include <span>
#include <string_view>
#include <vector>

#include "dtq/corpus.hpp"
#include "dtq/topics.hpp"

namespace dtq {

inline constexpr double kDefaultEpsilon = 1e-12;

struct PairScore {
    double value = 0.0;
    // False when either word has zero marginal probability in the reference stats.
    bool defined = false;
};

// Normalized PMI of a word pair, clamped to [-1, 1].
PairScore npmi_pair(const CooccurrenceStats& stats, std::string_view w1, std::string_view w2,
                    double epsilon = kDefaultEpsilon);
PairScore npmi_pair(const CooccurrenceStats& stats, WordId w1, WordId w2, double epsilon = kDefaultEpsilon);

// Mean NPMI over a set of pairs, excluding undefined pairs.
struct CoherenceResult {
    double value = 0.0;
    std::size_t defined_pairs = 0;
    std::size_t undefined_pairs = 0;
    // Every pair was undefined; value is 0.
    bool warning() const { return defined_pairs == 0; }
};

// Mean NPMI over the N(N-1)/2 unordered pairs of the list. Requires N >= 2.
CoherenceResult topic_coherence(const CooccurrenceStats& stats, const TopicWordList& topic,
                                double epsilon = kDefaultEpsilon);

// Fraction of (word, other-topic) memberships: sum_i sum_q 1(w_i in q) / (|others| * N).
double topic_redundancy(const TopicWordList& topic, std::span<const TopicWordList> others);
double topic_diversity(const TopicWordList& topic, std::span<const TopicWordList> others);

// Words that occur in exactly one list, over the total number of word slots.
double diversity_unique_fraction(std::span<const TopicWordList> topics);

// Mean over topics of coherence * diversity.
double topic_quality(std::span<const double> coherences, std::span<const double> diversities);

struct YearMeasures {
    Timestamp timestamp = 0;
    double tc = 0.0;
    double td = 0.0;  // mean Burkhardt diversity
    double tq = 0.0;
    double td_unique = 0.0;
    std::vector<double> coherence;  // per topic
    std::vector<double> diversity;  // per topic
    std::size_t coherence_warnings = 0;
};

struct YearwiseReport {
    std::vector<YearMeasures> per_year;
    double epsilon = kDefaultEpsilon;
    std::size_t n_top = 0;

    double mean_tc() const;
    double mean_td() const;
    double mean_tq() const;
};

// Reference stats per timestamp.
using StatsLookup = std::function<const CooccurrenceStats&(Timestamp)>;

YearwiseReport yearwise_report(const DynamicTopics& topics, const StatsLookup& stats_for,
                               double epsilon = kDefaultEpsilon);
YearwiseReport yearwise_report(const DynamicTopics& topics, const CooccurrenceStats& stats,
                               double epsilon = kDefaultEpsilon);
YearwiseReport yearwise_report(const DynamicTopics& topics, const std::map<Timestamp, CooccurrenceStats>& stats,
                               double epsilon = kDefaultEpsilon);

}  // namespace dtq

#endif
