#include "dtq/topics.hpp"

#include <algorithm>
#include <set>

#include <nlohmann/json.hpp>

#include "dtq/errors.hpp"
#include "dtq/io.hpp"

namespace dtq {

using nlohmann::json;

TopicWordList::TopicWordList(std::vector<std::string> words) : words_(std::move(words)) {
    if (words_.empty()) {
        throw ValidationError("topic word list is empty");
    }
    std::set<std::string_view> seen;
    for (const auto& w : words_) {
        if (!seen.insert(w).second) {
            throw ValidationError("duplicate word '" + w + "' in topic word list");
        }
    }
}

bool TopicWordList::contains(std::string_view word) const {
    return std::find(words_.begin(), words_.end(), word) != words_.end();
}

DynamicTopics::DynamicTopics(std::vector<Timestamp> timestamps, std::size_t n_top,
                             std::vector<std::vector<TopicWordList>> slices, std::vector<std::int64_t> ids)
    : timestamps_(std::move(timestamps)), n_top_(n_top), slices_(std::move(slices)), ids_(std::move(ids)) {
    if (slices_.empty()) {
        throw ValidationError("topic set has no topics");
    }
    if (timestamps_.empty()) {
        throw ValidationError("topic set has no timestamps");
    }
    if (n_top_ == 0) {
        throw ValidationError("n_top must be at least 1");
    }
    for (std::size_t t = 1; t < timestamps_.size(); ++t) {
        if (timestamps_[t] <= timestamps_[t - 1]) {
            throw ValidationError("timestamps must be strictly increasing");
        }
    }
    for (std::size_t k = 0; k < slices_.size(); ++k) {
        if (slices_[k].size() != timestamps_.size()) {
            throw ValidationError("topic " + std::to_string(k) + " has " + std::to_string(slices_[k].size()) +
                                  " slices, expected " + std::to_string(timestamps_.size()));
        }
        for (std::size_t t = 0; t < slices_[k].size(); ++t) {
            if (slices_[k][t].size() != n_top_) {
                throw ValidationError("topic " + std::to_string(k) + " at timestamp " +
                                      std::to_string(timestamps_[t]) + " has " +
                                      std::to_string(slices_[k][t].size()) + " words, expected " +
                                      std::to_string(n_top_));
            }
        }
    }
    if (ids_.empty()) {
        for (std::size_t k = 0; k < slices_.size(); ++k) {
            ids_.push_back(static_cast<std::int64_t>(k));
        }
    } else if (ids_.size() != slices_.size()) {
        throw ValidationError("topic id count does not match topic count");
    }
}

std::vector<TopicWordList> DynamicTopics::at_time(std::size_t t) const {
    std::vector<TopicWordList> out;
    out.reserve(slices_.size());
    for (const auto& seq : slices_) {
        out.push_back(seq.at(t));
    }
    return out;
}

bool DynamicTopics::operator==(const DynamicTopics& other) const {
    return timestamps_ == other.timestamps_ && n_top_ == other.n_top_ && slices_ == other.slices_ &&
           ids_ == other.ids_;
}

DynamicTopics topics_from_json(const json& j, std::size_t expected_n_top) {
    try {
        auto timestamps = j.at("timestamps").get<std::vector<Timestamp>>();
        const auto n_top = j.at("n_top").get<std::size_t>();
        if (expected_n_top != 0 && n_top != expected_n_top) {
            throw ValidationError("topics file has n_top=" + std::to_string(n_top) + ", expected " +
                                  std::to_string(expected_n_top));
        }
        std::vector<std::vector<TopicWordList>> slices;
        std::vector<std::int64_t> ids;
        for (const auto& topic : j.at("topics")) {
            ids.push_back(topic.at("id").get<std::int64_t>());
            std::vector<TopicWordList> seq;
            for (const auto& s : topic.at("slices")) {
                seq.emplace_back(s.get<std::vector<std::string>>());
            }
            slices.push_back(std::move(seq));
        }
        std::set<std::int64_t> unique_ids(ids.begin(), ids.end());
        if (unique_ids.size() != ids.size()) {
            throw ValidationError("duplicate topic id in topics file");
        }
        return DynamicTopics(std::move(timestamps), n_top, std::move(slices), std::move(ids));
    } catch (const json::exception& e) {
        throw ValidationError(std::string("malformed topics file: ") + e.what());
    }
}

json topics_to_json(const DynamicTopics& topics) {
    json j;
    j["timestamps"] = topics.timestamps();
    j["n_top"] = topics.n_top();
    json arr = json::array();
    for (std::size_t k = 0; k < topics.n_topics(); ++k) {
        json slices = json::array();
        for (const auto& s : topics.topic(k)) {
            slices.push_back(s.words());
        }
        arr.push_back({{"id", topics.ids()[k]}, {"slices", std::move(slices)}});
    }
    j["topics"] = std::move(arr);
    return j;
}

DynamicTopics load_topics_file(const std::string& path, std::size_t expected_n_top) {
    const auto text = read_file(path);
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ValidationError(path + ": invalid JSON: " + e.what());
    }
    return topics_from_json(j, expected_n_top);
}

void check_timestamps_known(const DynamicTopics& topics, const std::vector<Timestamp>& reference) {
    for (auto ts : topics.timestamps()) {
        if (!std::binary_search(reference.begin(), reference.end(), ts)) {
            throw ValidationError("topic timestamp " + std::to_string(ts) + " is absent from the reference corpus");
        }
    }
}

}  // namespace dtq
