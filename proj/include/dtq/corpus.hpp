#ifndef DTQ_CORPUS_HPP
#define DTQ_CORPUS_HPP

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace dtq {

using Timestamp = std::int64_t;
using WordId = std::uint32_t;

inline constexpr std::size_t kDefaultWindowSize = 10;

struct Document {
    Timestamp timestamp = 0;
    std::vector<std::string> tokens;
};

// Dense string <-> id map. Ids are assigned in insertion order.
class Vocabulary {
public:
    Vocabulary() = default;
    explicit Vocabulary(std::vector<std::string> words);

    WordId add(const std::string& word);
    std::optional<WordId> find(std::string_view word) const;
    const std::string& word(WordId id) const { return words_.at(id); }
    std::size_t size() const { return words_.size(); }
    bool empty() const { return words_.empty(); }
    const std::vector<std::string>& words() const { return words_; }

    bool operator==(const Vocabulary& other) const { return words_ == other.words_; }

private:
    std::vector<std::string> words_;
    std::unordered_map<std::string, WordId> index_;
};

struct TimedCorpus {
    std::vector<Document> documents;
    std::vector<Timestamp> timestamps;  // strictly increasing
    Vocabulary vocabulary;
    std::size_t skipped_records = 0;  // records rejected at load (empty token lists)

    std::size_t size() const { return documents.size(); }
    bool operator==(const TimedCorpus& other) const;
};

// Reads line-delimited JSON records {"timestamp": int, "tokens": [string, ...]}.
// Blank lines are ignored. Records with an empty token list are skipped and counted.
TimedCorpus load_corpus(std::istream& in);
TimedCorpus load_corpus_file(const std::string& path);
void write_corpus(const TimedCorpus& corpus, std::ostream& out);

// Keeps words whose document frequency df satisfies min_df*D <= df <= max_df*D.
// Documents keep their place even if pruning empties them, so the document
// count D (and hence the thresholds) is stable under repeated pruning.
TimedCorpus prune_vocabulary(const TimedCorpus& corpus, double min_df, double max_df);

// Sliding-window co-occurrence counts. A window is a contiguous span of
// window_size tokens; a document shorter than the window is a single window.
// Presence is boolean per window.
class CooccurrenceStats {
public:
    static constexpr int kFormatVersion = 1;

    CooccurrenceStats(std::size_t window_size, Vocabulary vocabulary, std::vector<Timestamp> timestamps);

    std::size_t window_size() const { return window_size_; }
    std::uint64_t total_windows() const { return total_windows_; }
    const Vocabulary& vocabulary() const { return vocabulary_; }
    const std::vector<Timestamp>& timestamps() const { return timestamps_; }

    std::uint64_t word_windows(WordId w) const;
    std::uint64_t pair_windows(WordId a, WordId b) const;

    double p_word(WordId w) const;
    double p_pair(WordId a, WordId b) const;

    // Adds the windows of one document given as vocabulary ids.
    void add_document(const std::vector<WordId>& ids);
    // Associative, commutative merge of counts built over the same vocabulary.
    void merge(const CooccurrenceStats& other);

    // Observed pairs as (a, b, count) with a < b, sorted.
    struct PairCount {
        WordId a;
        WordId b;
        std::uint64_t count;
    };
    std::vector<PairCount> sorted_pairs() const;
    std::size_t observed_pairs() const { return pair_windows_.size(); }

    bool operator==(const CooccurrenceStats& other) const;

    // Versioned JSON cache. Output is deterministic for equal stats.
    void save(std::ostream& out) const;
    static CooccurrenceStats load(std::istream& in);
    void save_file(const std::string& path) const;
    static CooccurrenceStats load_file(const std::string& path);

private:
    static std::uint64_t pair_key(WordId a, WordId b);

    std::size_t window_size_;
    Vocabulary vocabulary_;
    std::vector<Timestamp> timestamps_;
    std::uint64_t total_windows_ = 0;
    std::vector<std::uint64_t> word_windows_;
    std::unordered_map<std::uint64_t, std::uint64_t> pair_windows_;
};

// Counts windows over all documents. With threads > 1 the documents are
// partitioned and the partial counts merged; the result is identical to a
// sequential pass.
CooccurrenceStats count_cooccurrences(const TimedCorpus& corpus, std::size_t window_size,
                                      unsigned threads = 1);

inline double p_word(const CooccurrenceStats& stats, WordId w) { return stats.p_word(w); }
inline double p_pair(const CooccurrenceStats& stats, WordId a, WordId b) { return stats.p_pair(a, b); }

}  // namespace dtq

#endif
