#ifndef DTQ_TEMPORAL_MEASURES_HPP
#define DTQ_TEMPORAL_MEASURES_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "dtq/corpus.hpp"
#include "dtq/static_measures.hpp"
#include "dtq/topics.hpp"

namespace dtq {

inline constexpr std::size_t kDefaultWindowLength = 2;

// Temporal topic coherence: mean NPMI over all N x N cross pairs
// (start word i, end word j), same-word pairs included.
CoherenceResult ttc(const CooccurrenceStats& stats, const TopicWordList& start, const TopicWordList& end,
                    double epsilon = kDefaultEpsilon);

// Temporal topic smoothness of a window of L >= 2 slices: the fraction of
// anchor-word memberships in the L-1 slices that follow the anchor.
double tts(std::span<const TopicWordList> window);

// Temporal topic quality of one topic sequence: mean over the T-L+1 windows
// of TTC(first, last) * TTS(window).
double ttq(const CooccurrenceStats& stats, std::span<const TopicWordList> slices, std::size_t window_length,
           double epsilon = kDefaultEpsilon);

// Time-averaged per-slice coherence.
double btc(std::span<const double> per_year_coherences);

// TTS with the window spanning the whole sequence.
double bts(std::span<const TopicWordList> slices);

double dtq(std::span<const double> tq_per_year, std::span<const double> ttq_per_topic);

struct TopicTemporal {
    std::vector<double> ttc;  // per window start, T-L+1 entries
    std::vector<double> tts;
    double ttq = 0.0;
    double btc = 0.0;
    double bts = 0.0;
    std::size_t ttc_warnings = 0;

    double mean_ttc() const;
    double mean_tts() const;
};

struct TemporalReport {
    std::size_t window_length = kDefaultWindowLength;
    std::vector<TopicTemporal> topics;
    double mean_ttc = 0.0;  // over every (topic, window)
    double mean_tts = 0.0;
    double mean_ttq = 0.0;  // over topics
    double dtq = 0.0;
    YearwiseReport yearwise;
};

// Requires T >= max(L, 2).
TemporalReport temporal_report(const CooccurrenceStats& stats, const DynamicTopics& topics,
                               std::size_t window_length = kDefaultWindowLength,
                               double epsilon = kDefaultEpsilon, unsigned threads = 1);

}  // namespace dtq

#endif
