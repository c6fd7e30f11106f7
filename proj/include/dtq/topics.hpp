#ifndef DTQ_TOPICS_HPP
#define DTQ_TOPICS_HPP

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "dtq/corpus.hpp"

namespace dtq {

inline constexpr std::size_t kDefaultTopWords = 10;

// Top words of one topic at one timestamp: non-empty, pairwise distinct.
class TopicWordList {
public:
    explicit TopicWordList(std::vector<std::string> words);
    TopicWordList(std::initializer_list<std::string> words)
        : TopicWordList(std::vector<std::string>(words)) {}

    const std::vector<std::string>& words() const { return words_; }
    std::size_t size() const { return words_.size(); }
    const std::string& operator[](std::size_t i) const { return words_[i]; }
    auto begin() const { return words_.begin(); }
    auto end() const { return words_.end(); }
    bool contains(std::string_view word) const;

    bool operator==(const TopicWordList& other) const { return words_ == other.words_; }

private:
    std::vector<std::string> words_;
};

// K topics x T timestamps grid of top-word lists, each of exactly N words.
class DynamicTopics {
public:
    // slices[k][t] is topic k at timestamps[t]. ids default to 0..K-1.
    DynamicTopics(std::vector<Timestamp> timestamps, std::size_t n_top,
                  std::vector<std::vector<TopicWordList>> slices,
                  std::vector<std::int64_t> ids = {});

    std::size_t n_topics() const { return slices_.size(); }
    std::size_t n_timestamps() const { return timestamps_.size(); }
    std::size_t n_top() const { return n_top_; }
    const std::vector<Timestamp>& timestamps() const { return timestamps_; }
    const std::vector<std::int64_t>& ids() const { return ids_; }

    const TopicWordList& slice(std::size_t k, std::size_t t) const { return slices_.at(k).at(t); }
    // Temporal sequence of topic k.
    const std::vector<TopicWordList>& topic(std::size_t k) const { return slices_.at(k); }
    // All K topics at timestamp index t.
    std::vector<TopicWordList> at_time(std::size_t t) const;
    const std::vector<std::vector<TopicWordList>>& grid() const { return slices_; }

    bool operator==(const DynamicTopics& other) const;

private:
    std::vector<Timestamp> timestamps_;
    std::size_t n_top_;
    std::vector<std::vector<TopicWordList>> slices_;
    std::vector<std::int64_t> ids_;
};

// {"timestamps": [...], "n_top": N, "topics": [{"id": k, "slices": [[w, ...], ...]}]}
// A non-zero expected_n_top must match the file's n_top.
DynamicTopics topics_from_json(const nlohmann::json& j, std::size_t expected_n_top = 0);
nlohmann::json topics_to_json(const DynamicTopics& topics);
DynamicTopics load_topics_file(const std::string& path, std::size_t expected_n_top = 0);

// Throws ValidationError naming the first topic timestamp absent from the reference set.
void check_timestamps_known(const DynamicTopics& topics, const std::vector<Timestamp>& reference);

}  // namespace dtq

#endif
