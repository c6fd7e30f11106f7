#ifndef DTQ_PERTURBATION_HPP
#define DTQ_PERTURBATION_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dtq/corpus.hpp"
#include "dtq/static_measures.hpp"
#include "dtq/temporal_measures.hpp"
#include "dtq/topics.hpp"

namespace dtq {

enum class PerturbationKind { shuffle, collapse, intrude };

PerturbationKind parse_perturbation_kind(const std::string& name);
std::string to_string(PerturbationKind kind);

// Independently per timestamp, permutes which topic slot holds which slice.
// Requires K >= 2. The permutation applied at each timestamp is returned in
// permutations[t][k] = source topic index placed into slot k.
struct ShuffleResult {
    DynamicTopics topics;
    std::vector<std::vector<std::size_t>> permutations;
};
ShuffleResult temporal_shuffle_traced(const DynamicTopics& topics, std::uint64_t seed);
DynamicTopics temporal_shuffle(const DynamicTopics& topics, std::uint64_t seed);

// Every topic slot receives a copy of topic chosen_k's sequence.
DynamicTopics collapse_repeat(const DynamicTopics& topics, std::size_t chosen_k);
// Seeded uniform choice of a topic index.
std::size_t choose_topic(const DynamicTopics& topics, std::uint64_t seed);

struct IntrusionResult {
    DynamicTopics topics;
    std::size_t timestamp_index = 0;
    std::vector<std::size_t> positions;  // replaced positions in the slice, in replacement order
    std::vector<std::string> intruders;  // intruders[i] went into positions[i]
};

// Replaces `level` words of topic target_k at one seeded timestamp with words
// drawn from other topics at that timestamp. For a fixed seed the timestamp
// and the replacement order do not depend on level, so level n extends level n-1.
IntrusionResult intrude(const DynamicTopics& topics, std::size_t target_k, std::size_t level, std::uint64_t seed);

struct SweepRow {
    std::uint64_t seed = 0;
    std::size_t level = 0;
    double ttc = 0.0;  // target topic, mean over windows
    double tts = 0.0;
    double ttq = 0.0;
};

// One row per (seed, level), with a level-0 reference row per seed first.
std::vector<SweepRow> intrusion_sweep(const CooccurrenceStats& stats, const DynamicTopics& topics,
                                      std::size_t target_k, std::span<const std::size_t> levels,
                                      std::span<const std::uint64_t> seeds,
                                      std::size_t window_length = kDefaultWindowLength,
                                      double epsilon = kDefaultEpsilon);

// Spearman rho between intrusion level and TTQ, skipping level-0 rows.
// `pooled` ranks all rows together; `seed_mean` averages the per-seed values.
// A seed whose TTQ does not vary is an error.
struct LevelCorrelation {
    std::vector<std::uint64_t> seeds;
    std::vector<double> per_seed;
    double seed_mean = 0.0;
    double pooled = 0.0;
};

LevelCorrelation level_ttq_correlation(std::span<const SweepRow> rows);

}  // namespace dtq

#endif
