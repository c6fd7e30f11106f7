#include "dtq/perturbation.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "dtq/errors.hpp"
#include "dtq/numeric.hpp"
#include "dtq/random.hpp"
#include "dtq/stats_human.hpp"

namespace dtq {

PerturbationKind parse_perturbation_kind(const std::string& name) {
    if (name == "shuffle") return PerturbationKind::shuffle;
    if (name == "collapse") return PerturbationKind::collapse;
    if (name == "intrude") return PerturbationKind::intrude;
    throw ValidationError("unknown perturbation kind '" + name + "'");
}

std::string to_string(PerturbationKind kind) {
    switch (kind) {
        case PerturbationKind::shuffle: return "shuffle";
        case PerturbationKind::collapse: return "collapse";
        case PerturbationKind::intrude: return "intrude";
    }
    return "unknown";
}

namespace {

void require_multiple_topics(const DynamicTopics& topics, const char* what) {
    if (topics.n_topics() < 2) {
        throw ValidationError(std::string(what) + " needs at least two topics");
    }
}

}  // namespace

ShuffleResult temporal_shuffle_traced(const DynamicTopics& topics, std::uint64_t seed) {
    require_multiple_topics(topics, "temporal shuffle");
    const std::size_t K = topics.n_topics();
    const std::size_t T = topics.n_timestamps();
    Rng rng(seed);
    std::vector<std::vector<std::size_t>> perms;
    std::vector<std::vector<TopicWordList>> grid(K);
    for (auto& seq : grid) {
        seq.reserve(T);
    }
    for (std::size_t t = 0; t < T; ++t) {
        std::vector<std::size_t> perm(K);
        std::iota(perm.begin(), perm.end(), std::size_t{0});
        shuffle_in_place(perm, rng);
        for (std::size_t k = 0; k < K; ++k) {
            grid[k].push_back(topics.slice(perm[k], t));
        }
        perms.push_back(std::move(perm));
    }
    return {DynamicTopics(topics.timestamps(), topics.n_top(), std::move(grid), topics.ids()), std::move(perms)};
}

DynamicTopics temporal_shuffle(const DynamicTopics& topics, std::uint64_t seed) {
    return temporal_shuffle_traced(topics, seed).topics;
}

DynamicTopics collapse_repeat(const DynamicTopics& topics, std::size_t chosen_k) {
    require_multiple_topics(topics, "collapse");
    if (chosen_k >= topics.n_topics()) {
        throw ValidationError("topic index " + std::to_string(chosen_k) + " out of range (K=" +
                              std::to_string(topics.n_topics()) + ")");
    }
    std::vector<std::vector<TopicWordList>> grid(topics.n_topics(), topics.topic(chosen_k));
    return DynamicTopics(topics.timestamps(), topics.n_top(), std::move(grid), topics.ids());
}

std::size_t choose_topic(const DynamicTopics& topics, std::uint64_t seed) {
    Rng rng(seed);
    return static_cast<std::size_t>(uniform_below(rng, topics.n_topics()));
}

IntrusionResult intrude(const DynamicTopics& topics, std::size_t target_k, std::size_t level, std::uint64_t seed) {
    require_multiple_topics(topics, "intrusion");
    if (target_k >= topics.n_topics()) {
        throw ValidationError("target topic " + std::to_string(target_k) + " out of range");
    }
    const std::size_t N = topics.n_top();
    if (level < 1 || level > N) {
        throw ValidationError("intrusion level must lie in [1, " + std::to_string(N) + "]");
    }
    Rng rng(seed);
    const auto t_star = static_cast<std::size_t>(uniform_below(rng, topics.n_timestamps()));

    std::vector<std::size_t> positions(N);
    std::iota(positions.begin(), positions.end(), std::size_t{0});
    shuffle_in_place(positions, rng);

    const auto& target = topics.slice(target_k, t_star);
    std::vector<std::string> pool;
    std::set<std::string> seen;
    for (std::size_t k = 0; k < topics.n_topics(); ++k) {
        if (k == target_k) {
            continue;
        }
        for (const auto& w : topics.slice(k, t_star)) {
            if (!target.contains(w) && seen.insert(w).second) {
                pool.push_back(w);
            }
        }
    }
    shuffle_in_place(pool, rng);
    if (pool.size() < level) {
        throw ValidationError("intruder pool has " + std::to_string(pool.size()) + " words, level " +
                              std::to_string(level) + " requested");
    }

    IntrusionResult result{topics, t_star, {}, {}};
    auto words = target.words();
    for (std::size_t i = 0; i < level; ++i) {
        words[positions[i]] = pool[i];
        result.positions.push_back(positions[i]);
        result.intruders.push_back(pool[i]);
    }
    auto grid = topics.grid();
    grid[target_k][t_star] = TopicWordList(std::move(words));
    result.topics = DynamicTopics(topics.timestamps(), N, std::move(grid), topics.ids());
    return result;
}

namespace {

SweepRow measure_target(const CooccurrenceStats& stats, const DynamicTopics& topics, std::size_t target_k,
                        std::size_t window_length, double epsilon) {
    const auto& seq = topics.topic(target_k);
    const std::size_t windows = seq.size() - window_length + 1;
    std::vector<double> c(windows);
    std::vector<double> s(windows);
    for (std::size_t t = 0; t < windows; ++t) {
        c[t] = ttc(stats, seq[t], seq[t + window_length - 1], epsilon).value;
        s[t] = tts(std::span<const TopicWordList>(seq).subspan(t, window_length));
    }
    SweepRow row;
    row.ttc = mean(c);
    row.tts = mean(s);
    row.ttq = ttq(stats, seq, window_length, epsilon);
    return row;
}

}  // namespace

std::vector<SweepRow> intrusion_sweep(const CooccurrenceStats& stats, const DynamicTopics& topics,
                                      std::size_t target_k, std::span<const std::size_t> levels,
                                      std::span<const std::uint64_t> seeds, std::size_t window_length,
                                      double epsilon) {
    if (target_k >= topics.n_topics()) {
        throw ValidationError("target topic " + std::to_string(target_k) + " out of range");
    }
    if (window_length < 2 || topics.n_timestamps() < window_length) {
        throw ValidationError("window length must satisfy 2 <= L <= T");
    }
    std::vector<SweepRow> rows;
    const auto reference = measure_target(stats, topics, target_k, window_length, epsilon);
    for (auto seed : seeds) {
        auto row = reference;
        row.seed = seed;
        row.level = 0;
        rows.push_back(row);
        for (auto level : levels) {
            const auto perturbed = intrude(topics, target_k, level, seed);
            row = measure_target(stats, perturbed.topics, target_k, window_length, epsilon);
            row.seed = seed;
            row.level = level;
            rows.push_back(row);
        }
    }
    return rows;
}

LevelCorrelation level_ttq_correlation(std::span<const SweepRow> rows) {
    LevelCorrelation out;
    std::vector<double> all_levels, all_ttq;
    for (const auto& r : rows) {
        if (r.level == 0) continue;
        if (std::find(out.seeds.begin(), out.seeds.end(), r.seed) == out.seeds.end()) out.seeds.push_back(r.seed);
        all_levels.push_back(static_cast<double>(r.level));
        all_ttq.push_back(r.ttq);
    }
    if (out.seeds.empty()) {
        throw ValidationError("sweep has no intruded rows");
    }
    for (auto seed : out.seeds) {
        std::vector<double> lv, q;
        for (const auto& r : rows) {
            if (r.seed != seed || r.level == 0) continue;
            lv.push_back(static_cast<double>(r.level));
            q.push_back(r.ttq);
        }
        out.per_seed.push_back(spearman(lv, q));
    }
    out.seed_mean = mean(out.per_seed);
    out.pooled = spearman(all_levels, all_ttq);
    return out;
}

}  // namespace dtq
