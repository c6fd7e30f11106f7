#include "dtq/stats_human.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <set>
#include <sstream>

#include <boost/math/distributions/students_t.hpp>

#include "dtq/errors.hpp"
#include "dtq/io.hpp"
#include "dtq/random.hpp"

namespace dtq {

std::vector<double> average_ranks(std::span<const double> values) {
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]]) {
            ++j;
        }
        // positions i..j (0-based) share rank mean((i+1)..(j+1))
        const double r = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t p = i; p <= j; ++p) {
            ranks[order[p]] = r;
        }
        i = j + 1;
    }
    return ranks;
}

namespace {

double pearson(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxy = 0.0;
    double sxx = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) {
        throw ValidationError("rank correlation undefined: an input has zero rank variance");
    }
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

}  // namespace

double spearman(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) {
        throw ValidationError("rank correlation inputs differ in length");
    }
    if (x.size() < 3) {
        throw ValidationError("rank correlation needs at least 3 observations");
    }
    return pearson(average_ranks(x), average_ranks(y));
}

double spearman_pvalue(double rho, std::size_t n) {
    if (n < 3) {
        throw ValidationError("p-value needs at least 3 observations");
    }
    if (!(std::fabs(rho) <= 1.0)) {
        throw ValidationError("rho must lie in [-1, 1]");
    }
    if (std::fabs(rho) == 1.0) {
        return 0.0;
    }
    const double df = static_cast<double>(n - 2);
    const double t = std::fabs(rho) * std::sqrt(df / (1.0 - rho * rho));
    const boost::math::students_t dist(df);
    const double p = 2.0 * boost::math::cdf(boost::math::complement(dist, t));
    return std::clamp(p, 0.0, 1.0);
}

double spearman_permutation_pvalue(std::span<const double> x, std::span<const double> y, std::size_t resamples,
                                   std::uint64_t seed) {
    const double observed = std::fabs(spearman(x, y));
    const auto rx = average_ranks(x);
    auto ry = average_ranks(y);
    Rng rng(seed);
    std::size_t extreme = 0;
    for (std::size_t r = 0; r < resamples; ++r) {
        shuffle_in_place(ry, rng);
        double rho = 0.0;
        try {
            rho = pearson(rx, ry);
        } catch (const ValidationError&) {
            continue;
        }
        // Tolerance absorbs rounding between equal-magnitude correlations.
        if (std::fabs(rho) >= observed - 1e-12) {
            ++extreme;
        }
    }
    return static_cast<double>(extreme + 1) / static_cast<double>(resamples + 1);
}

RatingsTable::RatingsTable(std::vector<Rating> rows) : rows_(std::move(rows)) {
    std::set<std::pair<std::string, std::string>> seen;
    for (const auto& r : rows_) {
        if (r.rater_id.empty() || r.topic_id.empty()) {
            throw ValidationError("rating with empty rater or topic id");
        }
        if (r.relatedness < 1 || r.relatedness > 3 || r.smoothness < 1 || r.smoothness > 3) {
            throw ValidationError("rating by " + r.rater_id + " on " + r.topic_id + " outside the 1-3 scale");
        }
        if (r.familiarity < 0) {
            throw ValidationError("negative familiarity for rater " + r.rater_id);
        }
        if (!(r.duration_seconds > 0.0)) {
            throw ValidationError("non-positive duration for rater " + r.rater_id);
        }
        if (!seen.emplace(r.rater_id, r.topic_id).second) {
            throw ValidationError("rater " + r.rater_id + " rated topic " + r.topic_id + " more than once");
        }
    }
}

std::vector<std::string> RatingsTable::raters() const {
    std::set<std::string> ids;
    for (const auto& r : rows_) {
        ids.insert(r.rater_id);
    }
    return {ids.begin(), ids.end()};
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) {
        const auto first = field.find_first_not_of(" \t");
        const auto last = field.find_last_not_of(" \t\r");
        fields.push_back(first == std::string::npos ? std::string() : field.substr(first, last - first + 1));
    }
    if (!line.empty() && line.back() == ',') {
        fields.emplace_back();
    }
    return fields;
}

int parse_int(const std::string& s, std::size_t line, const char* field) {
    try {
        std::size_t used = 0;
        const int v = std::stoi(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ParseError(line, std::string("field ") + field + " is not an integer: '" + s + "'");
    }
}

double parse_real(const std::string& s, std::size_t line, const char* field) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ParseError(line, std::string("field ") + field + " is not a number: '" + s + "'");
    }
}

bool parse_flag(const std::string& s, std::size_t line) {
    if (s == "1" || s == "true" || s == "True" || s == "TRUE") return true;
    if (s == "0" || s == "false" || s == "False" || s == "FALSE" || s.empty()) return false;
    throw ParseError(line, "field is_control is not a boolean: '" + s + "'");
}

}  // namespace

RatingsTable read_ratings_csv(std::istream& in) {
    static const std::vector<std::string> kHeader = {"rater_id",    "topic_id",         "relatedness", "smoothness",
                                                     "familiarity", "duration_seconds", "is_control"};
    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(in, line)) {
        throw ValidationError("ratings file is empty");
    }
    ++line_no;
    if (split_csv_line(line) != kHeader) {
        throw ParseError(line_no, "unexpected ratings header");
    }
    std::vector<Rating> rows;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        const auto f = split_csv_line(line);
        if (f.size() != kHeader.size()) {
            throw ParseError(line_no, "expected 7 fields, found " + std::to_string(f.size()));
        }
        Rating r;
        r.rater_id = f[0];
        r.topic_id = f[1];
        r.relatedness = parse_int(f[2], line_no, "relatedness");
        r.smoothness = parse_int(f[3], line_no, "smoothness");
        r.familiarity = parse_int(f[4], line_no, "familiarity");
        r.duration_seconds = parse_real(f[5], line_no, "duration_seconds");
        r.is_control = parse_flag(f[6], line_no);
        rows.push_back(std::move(r));
    }
    return RatingsTable(std::move(rows));
}

RatingsTable load_ratings_file(const std::string& path) {
    std::istringstream in(read_file(path));
    return read_ratings_csv(in);
}

namespace {

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

FilterResult filter_respondents(const RatingsTable& ratings, const FilterRules& rules) {
    if (!(rules.duration_factor >= 1.0)) {
        throw ValidationError("duration factor must be at least 1");
    }
    auto is_control_row = [&](const Rating& r) {
        return rules.control_topic_id.empty() ? r.is_control : r.topic_id == rules.control_topic_id;
    };
    std::set<std::string> control_failed;
    bool control_present = false;
    for (const auto& r : ratings.rows()) {
        if (!is_control_row(r)) {
            continue;
        }
        control_present = true;
        if (r.relatedness > rules.control_threshold || r.smoothness > rules.control_threshold) {
            control_failed.insert(r.rater_id);
        }
    }
    if (!control_present) {
        throw ValidationError(rules.control_topic_id.empty()
                                  ? std::string("no control-task rows in ratings")
                                  : "control topic '" + rules.control_topic_id + "' not present in ratings");
    }

    FilterResult result;
    std::set<std::string> remaining;
    for (const auto& id : ratings.raters()) {
        if (control_failed.count(id) != 0) {
            result.excluded.push_back({id, "control"});
        } else {
            remaining.insert(id);
        }
    }

    std::map<std::string, double> total_duration;
    for (const auto& r : ratings.rows()) {
        total_duration[r.rater_id] += r.duration_seconds;
    }
    for (;;) {
        if (remaining.empty()) {
            break;
        }
        std::vector<double> durations;
        for (const auto& id : remaining) {
            durations.push_back(total_duration[id]);
        }
        const double med = median(durations);
        const double lo = med / rules.duration_factor;
        const double hi = med * rules.duration_factor;
        std::vector<std::string> outliers;
        for (const auto& id : remaining) {
            const double d = total_duration[id];
            if (d < lo || d > hi) {
                outliers.push_back(id);
            }
        }
        if (outliers.empty()) {
            break;
        }
        for (const auto& id : outliers) {
            remaining.erase(id);
            result.excluded.push_back({id, "duration"});
        }
    }
    if (remaining.empty()) {
        throw ValidationError("no valid raters remain after filtering");
    }
    std::vector<Rating> kept;
    for (const auto& r : ratings.rows()) {
        if (remaining.count(r.rater_id) != 0) {
            kept.push_back(r);
        }
    }
    result.valid = RatingsTable(std::move(kept));
    return result;
}

std::vector<TopicRatingMeans> aggregate_ratings(const RatingsTable& valid) {
    if (valid.empty()) {
        throw ValidationError("no ratings to aggregate");
    }
    struct Sums {
        double relatedness = 0.0;
        double smoothness = 0.0;
        double familiarity = 0.0;
        std::size_t n = 0;
    };
    // Integer-valued sums are exact, so row order cannot change the means.
    std::map<std::string, Sums> by_topic;
    for (const auto& r : valid.rows()) {
        auto& s = by_topic[r.topic_id];
        s.relatedness += r.relatedness;
        s.smoothness += r.smoothness;
        s.familiarity += r.familiarity;
        ++s.n;
    }
    std::vector<TopicRatingMeans> out;
    for (const auto& [topic, s] : by_topic) {
        const double n = static_cast<double>(s.n);
        out.push_back({topic, s.relatedness / n, s.smoothness / n, s.familiarity / n, s.n});
    }
    return out;
}

std::vector<CorrelationResult> correlate_measures(const std::vector<TopicRatingMeans>& aggregates,
                                                  const std::map<std::string, TopicMeasureValues>& measures) {
    std::vector<double> relatedness, smoothness, ttc_v, btc_v, tts_v, bts_v;
    for (const auto& a : aggregates) {
        auto it = measures.find(a.topic_id);
        if (it == measures.end()) {
            continue;
        }
        relatedness.push_back(a.relatedness);
        smoothness.push_back(a.smoothness);
        ttc_v.push_back(it->second.ttc);
        btc_v.push_back(it->second.btc);
        tts_v.push_back(it->second.tts);
        bts_v.push_back(it->second.bts);
    }
    const std::size_t n = relatedness.size();
    if (n < 3) {
        throw ValidationError("only " + std::to_string(n) + " topics are shared by ratings and measures; need 3");
    }
    auto make = [n](std::string name, const std::vector<double>& h, const std::vector<double>& m) {
        const double rho = spearman(h, m);
        return CorrelationResult{std::move(name), rho, n, spearman_pvalue(rho, n)};
    };
    return {make("relatedness~ttc", relatedness, ttc_v), make("relatedness~btc", relatedness, btc_v),
            make("smoothness~tts", smoothness, tts_v), make("smoothness~bts", smoothness, bts_v)};
}

}  // namespace dtq
