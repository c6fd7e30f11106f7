#ifndef DTQ_STATS_HUMAN_HPP
#define DTQ_STATS_HUMAN_HPP

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace dtq {

// 1-based ranks; tied values share the mean of their positions.
std::vector<double> average_ranks(std::span<const double> values);

// Pearson correlation of the average ranks. Requires n >= 3 and non-constant inputs.
double spearman(std::span<const double> x, std::span<const double> y);

// Two-sided p-value from t = rho * sqrt((n-2) / (1-rho^2)) with n-2 degrees
// of freedom. |rho| = 1 gives 0.
double spearman_pvalue(double rho, std::size_t n);

// Two-sided permutation p-value (count + 1) / (resamples + 1) for small samples.
double spearman_permutation_pvalue(std::span<const double> x, std::span<const double> y, std::size_t resamples,
                                   std::uint64_t seed);

struct CorrelationResult {
    std::string pairing;
    double rho = 0.0;
    std::size_t n = 0;
    double p_value = 1.0;
};

struct Rating {
    std::string rater_id;
    std::string topic_id;
    int relatedness = 1;  // 1..3
    int smoothness = 1;   // 1..3
    int familiarity = 0;
    double duration_seconds = 0.0;
    bool is_control = false;
};

class RatingsTable {
public:
    RatingsTable() = default;
    // Validates ordinal ranges, positive durations and (rater, topic) uniqueness.
    explicit RatingsTable(std::vector<Rating> rows);

    const std::vector<Rating>& rows() const { return rows_; }
    std::size_t size() const { return rows_.size(); }
    bool empty() const { return rows_.empty(); }
    std::vector<std::string> raters() const;  // sorted, distinct

private:
    std::vector<Rating> rows_;
};

// Header: rater_id,topic_id,relatedness,smoothness,familiarity,duration_seconds,is_control
RatingsTable read_ratings_csv(std::istream& in);
RatingsTable load_ratings_file(const std::string& path);

struct FilterRules {
    // Control topic id; when empty, rows flagged is_control are the control task.
    std::string control_topic_id;
    // A control rating above this value on either scale fails the control task.
    int control_threshold = 1;
    // Raters whose total duration lies outside [median / k, k * median] are outliers.
    double duration_factor = 3.0;
};

struct Exclusion {
    std::string rater_id;
    std::string reason;  // "control" or "duration"
};

struct FilterResult {
    RatingsTable valid;
    std::vector<Exclusion> excluded;
};

// Drops control failures, then duration outliers relative to the median over
// the remaining raters, repeating until no rater is removed.
FilterResult filter_respondents(const RatingsTable& ratings, const FilterRules& rules);

struct TopicRatingMeans {
    std::string topic_id;
    double relatedness = 0.0;
    double smoothness = 0.0;
    double familiarity = 0.0;
    std::size_t respondents = 0;
};

// Per-topic means, sorted by topic id.
std::vector<TopicRatingMeans> aggregate_ratings(const RatingsTable& valid);

struct TopicMeasureValues {
    double ttc = 0.0;
    double btc = 0.0;
    double tts = 0.0;
    double bts = 0.0;
};

// Spearman and p-value for relatedness~TTC, relatedness~B-TC, smoothness~TTS,
// smoothness~B-TS over the topics present in both inputs (at least 3).
std::vector<CorrelationResult> correlate_measures(const std::vector<TopicRatingMeans>& aggregates,
                                                  const std::map<std::string, TopicMeasureValues>& measures);

}  // namespace dtq

#endif
