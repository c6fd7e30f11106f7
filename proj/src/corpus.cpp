#include "dtq/corpus.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "dtq/errors.hpp"
#include "dtq/io.hpp"

namespace dtq {

using nlohmann::json;

Vocabulary::Vocabulary(std::vector<std::string> words) {
    for (auto& w : words) {
        if (index_.count(w) != 0) {
            throw ValidationError("duplicate vocabulary word '" + w + "'");
        }
        index_.emplace(w, static_cast<WordId>(words_.size()));
        words_.push_back(std::move(w));
    }
}

WordId Vocabulary::add(const std::string& word) {
    auto [it, inserted] = index_.emplace(word, static_cast<WordId>(words_.size()));
    if (inserted) {
        words_.push_back(word);
    }
    return it->second;
}

std::optional<WordId> Vocabulary::find(std::string_view word) const {
    // unordered_map<string> has no heterogeneous lookup in C++20 without a
    // transparent hasher; the copy is cheap for topic words.
    auto it = index_.find(std::string(word));
    if (it == index_.end()) {
        return std::nullopt;
    }
    return it->second;
}

bool TimedCorpus::operator==(const TimedCorpus& other) const {
    if (timestamps != other.timestamps || !(vocabulary == other.vocabulary) ||
        documents.size() != other.documents.size()) {
        return false;
    }
    for (std::size_t i = 0; i < documents.size(); ++i) {
        if (documents[i].timestamp != other.documents[i].timestamp ||
            documents[i].tokens != other.documents[i].tokens) {
            return false;
        }
    }
    return true;
}

TimedCorpus load_corpus(std::istream& in) {
    TimedCorpus corpus;
    std::set<Timestamp> seen;
    std::string line;
    std::size_t line_no = 0;
    std::size_t records = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        ++records;
        json rec;
        try {
            rec = json::parse(line);
        } catch (const json::exception& e) {
            throw ParseError(line_no, std::string("invalid JSON: ") + e.what());
        }
        if (!rec.is_object()) {
            throw ParseError(line_no, "record is not an object");
        }
        auto ts = rec.find("timestamp");
        if (ts == rec.end() || !ts->is_number_integer()) {
            throw ParseError(line_no, "missing integer field \"timestamp\"");
        }
        auto toks = rec.find("tokens");
        if (toks == rec.end() || !toks->is_array()) {
            throw ParseError(line_no, "missing array field \"tokens\"");
        }
        Document doc;
        doc.timestamp = ts->get<Timestamp>();
        doc.tokens.reserve(toks->size());
        for (const auto& t : *toks) {
            if (!t.is_string()) {
                throw ParseError(line_no, "token is not a string");
            }
            doc.tokens.push_back(t.get<std::string>());
        }
        if (doc.tokens.empty()) {
            ++corpus.skipped_records;
            continue;
        }
        for (const auto& t : doc.tokens) {
            corpus.vocabulary.add(t);
        }
        seen.insert(doc.timestamp);
        corpus.documents.push_back(std::move(doc));
    }
    if (in.bad()) {
        throw IoError("read error in corpus stream");
    }
    if (records == 0) {
        throw ValidationError("corpus stream is empty");
    }
    if (corpus.documents.empty()) {
        throw ValidationError("corpus has no non-empty documents");
    }
    corpus.timestamps.assign(seen.begin(), seen.end());
    return corpus;
}

TimedCorpus load_corpus_file(const std::string& path) {
    std::istringstream in(read_file(path));
    return load_corpus(in);
}

void write_corpus(const TimedCorpus& corpus, std::ostream& out) {
    for (const auto& doc : corpus.documents) {
        json rec;
        rec["timestamp"] = doc.timestamp;
        rec["tokens"] = doc.tokens;
        out << rec.dump() << '\n';
    }
}

TimedCorpus prune_vocabulary(const TimedCorpus& corpus, double min_df, double max_df) {
    if (!(min_df >= 0.0 && min_df <= 1.0) || !(max_df >= 0.0 && max_df <= 1.0)) {
        throw ValidationError("min_df and max_df must lie in [0, 1]");
    }
    if (min_df > max_df) {
        throw ValidationError("min_df must not exceed max_df");
    }
    const auto& vocab = corpus.vocabulary;
    std::vector<std::size_t> df(vocab.size(), 0);
    std::vector<std::size_t> last_doc(vocab.size(), static_cast<std::size_t>(-1));
    for (std::size_t d = 0; d < corpus.documents.size(); ++d) {
        for (const auto& t : corpus.documents[d].tokens) {
            auto id = vocab.find(t);
            if (!id) {
                continue;
            }
            if (last_doc[*id] != d) {
                last_doc[*id] = d;
                ++df[*id];
            }
        }
    }
    const double n_docs = static_cast<double>(corpus.documents.size());
    const double lo = min_df * n_docs;
    const double hi = max_df * n_docs;

    TimedCorpus pruned;
    pruned.timestamps = corpus.timestamps;
    pruned.skipped_records = corpus.skipped_records;
    std::vector<bool> keep(vocab.size(), false);
    for (WordId w = 0; w < vocab.size(); ++w) {
        const auto f = static_cast<double>(df[w]);
        if (f >= lo && f <= hi) {
            keep[w] = true;
            pruned.vocabulary.add(vocab.word(w));
        }
    }
    if (pruned.vocabulary.empty()) {
        throw ValidationError("vocabulary pruning removed every word");
    }
    pruned.documents.reserve(corpus.documents.size());
    for (const auto& doc : corpus.documents) {
        Document out{doc.timestamp, {}};
        for (const auto& t : doc.tokens) {
            auto id = vocab.find(t);
            if (id && keep[*id]) {
                out.tokens.push_back(t);
            }
        }
        pruned.documents.push_back(std::move(out));
    }
    return pruned;
}

CooccurrenceStats::CooccurrenceStats(std::size_t window_size, Vocabulary vocabulary,
                                     std::vector<Timestamp> timestamps)
    : window_size_(window_size),
      vocabulary_(std::move(vocabulary)),
      timestamps_(std::move(timestamps)),
      word_windows_(vocabulary_.size(), 0) {
    if (window_size_ == 0) {
        throw ValidationError("window_size must be at least 1");
    }
}

std::uint64_t CooccurrenceStats::pair_key(WordId a, WordId b) {
    if (a > b) {
        std::swap(a, b);
    }
    return (static_cast<std::uint64_t>(a) << 32) | b;
}

std::uint64_t CooccurrenceStats::word_windows(WordId w) const {
    return w < word_windows_.size() ? word_windows_[w] : 0;
}

std::uint64_t CooccurrenceStats::pair_windows(WordId a, WordId b) const {
    if (a == b) {
        return word_windows(a);
    }
    auto it = pair_windows_.find(pair_key(a, b));
    return it == pair_windows_.end() ? 0 : it->second;
}

double CooccurrenceStats::p_word(WordId w) const {
    if (total_windows_ == 0) {
        throw ValidationError("probability requested from stats with no windows");
    }
    return static_cast<double>(word_windows(w)) / static_cast<double>(total_windows_);
}

double CooccurrenceStats::p_pair(WordId a, WordId b) const {
    if (total_windows_ == 0) {
        throw ValidationError("probability requested from stats with no windows");
    }
    return static_cast<double>(pair_windows(a, b)) / static_cast<double>(total_windows_);
}

void CooccurrenceStats::add_document(const std::vector<WordId>& ids) {
    if (ids.empty()) {
        return;
    }
    const std::size_t width = std::min(window_size_, ids.size());
    const std::size_t n_windows = ids.size() - width + 1;
    std::vector<WordId> present;
    present.reserve(width);
    for (std::size_t start = 0; start < n_windows; ++start) {
        present.assign(ids.begin() + static_cast<std::ptrdiff_t>(start),
                       ids.begin() + static_cast<std::ptrdiff_t>(start + width));
        std::sort(present.begin(), present.end());
        present.erase(std::unique(present.begin(), present.end()), present.end());
        for (std::size_t i = 0; i < present.size(); ++i) {
            ++word_windows_.at(present[i]);
            for (std::size_t j = i + 1; j < present.size(); ++j) {
                ++pair_windows_[pair_key(present[i], present[j])];
            }
        }
    }
    total_windows_ += n_windows;
}

void CooccurrenceStats::merge(const CooccurrenceStats& other) {
    if (window_size_ != other.window_size_ || !(vocabulary_ == other.vocabulary_)) {
        throw ValidationError("cannot merge stats with different window size or vocabulary");
    }
    total_windows_ += other.total_windows_;
    for (std::size_t w = 0; w < word_windows_.size(); ++w) {
        word_windows_[w] += other.word_windows_[w];
    }
    for (const auto& [key, count] : other.pair_windows_) {
        pair_windows_[key] += count;
    }
}

std::vector<CooccurrenceStats::PairCount> CooccurrenceStats::sorted_pairs() const {
    std::vector<PairCount> out;
    out.reserve(pair_windows_.size());
    for (const auto& [key, count] : pair_windows_) {
        out.push_back({static_cast<WordId>(key >> 32), static_cast<WordId>(key & 0xffffffffu), count});
    }
    std::sort(out.begin(), out.end(), [](const PairCount& x, const PairCount& y) {
        return x.a != y.a ? x.a < y.a : x.b < y.b;
    });
    return out;
}

bool CooccurrenceStats::operator==(const CooccurrenceStats& other) const {
    return window_size_ == other.window_size_ && total_windows_ == other.total_windows_ &&
           vocabulary_ == other.vocabulary_ && timestamps_ == other.timestamps_ &&
           word_windows_ == other.word_windows_ && pair_windows_ == other.pair_windows_;
}

void CooccurrenceStats::save(std::ostream& out) const {
    json j;
    j["format"] = "dtq-cooccurrence";
    j["version"] = kFormatVersion;
    j["window_size"] = window_size_;
    j["total_windows"] = total_windows_;
    j["timestamps"] = timestamps_;
    j["vocabulary"] = vocabulary_.words();
    j["word_windows"] = word_windows_;
    json pairs = json::array();
    for (const auto& p : sorted_pairs()) {
        pairs.push_back(json::array({p.a, p.b, p.count}));
    }
    j["pair_windows"] = std::move(pairs);
    out << j.dump() << '\n';
}

CooccurrenceStats CooccurrenceStats::load(std::istream& in) {
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw ValidationError(std::string("stats cache is not valid JSON: ") + e.what());
    }
    try {
        if (j.value("format", std::string()) != "dtq-cooccurrence") {
            throw ValidationError("not a co-occurrence stats cache");
        }
        const int version = j.at("version").get<int>();
        if (version != kFormatVersion) {
            throw ValidationError("unsupported stats cache version " + std::to_string(version));
        }
        CooccurrenceStats stats(j.at("window_size").get<std::size_t>(),
                                Vocabulary(j.at("vocabulary").get<std::vector<std::string>>()),
                                j.at("timestamps").get<std::vector<Timestamp>>());
        stats.total_windows_ = j.at("total_windows").get<std::uint64_t>();
        stats.word_windows_ = j.at("word_windows").get<std::vector<std::uint64_t>>();
        if (stats.word_windows_.size() != stats.vocabulary_.size()) {
            throw ValidationError("word_windows length does not match vocabulary");
        }
        const auto n = stats.vocabulary_.size();
        for (const auto& p : j.at("pair_windows")) {
            const auto a = p.at(0).get<WordId>();
            const auto b = p.at(1).get<WordId>();
            if (a >= n || b >= n || a == b) {
                throw ValidationError("pair entry out of range");
            }
            stats.pair_windows_[pair_key(a, b)] = p.at(2).get<std::uint64_t>();
        }
        return stats;
    } catch (const json::exception& e) {
        throw ValidationError(std::string("malformed stats cache: ") + e.what());
    }
}

void CooccurrenceStats::save_file(const std::string& path) const {
    std::ostringstream out;
    save(out);
    write_file_atomic(path, out.str());
}

CooccurrenceStats CooccurrenceStats::load_file(const std::string& path) {
    std::istringstream in(read_file(path));
    return load(in);
}

namespace {

std::vector<WordId> to_ids(const Document& doc, const Vocabulary& vocab) {
    std::vector<WordId> ids;
    ids.reserve(doc.tokens.size());
    for (const auto& t : doc.tokens) {
        if (auto id = vocab.find(t)) {
            ids.push_back(*id);
        }
    }
    return ids;
}

}  // namespace

CooccurrenceStats count_cooccurrences(const TimedCorpus& corpus, std::size_t window_size, unsigned threads) {
    CooccurrenceStats total(window_size, corpus.vocabulary, corpus.timestamps);
    const std::size_t n_docs = corpus.documents.size();
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(1, n_docs))));
    if (threads == 1) {
        for (const auto& doc : corpus.documents) {
            total.add_document(to_ids(doc, corpus.vocabulary));
        }
        return total;
    }
    std::vector<CooccurrenceStats> partial(threads, total);
    std::vector<std::thread> workers;
    for (unsigned t = 0; t < threads; ++t) {
        workers.emplace_back([&, t] {
            const std::size_t begin = n_docs * t / threads;
            const std::size_t end = n_docs * (t + 1) / threads;
            for (std::size_t d = begin; d < end; ++d) {
                partial[t].add_document(to_ids(corpus.documents[d], corpus.vocabulary));
            }
        });
    }
    for (auto& w : workers) {
        w.join();
    }
    for (const auto& p : partial) {
        total.merge(p);
    }
    return total;
}

}  // namespace dtq
