#include <doctest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "dtq/corpus.hpp"
#include "dtq/errors.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace dtq;

namespace {

TimedCorpus from_text(const std::string& text) {
    std::istringstream in(text);
    return load_corpus(in);
}

void check_against_oracle(const std::vector<std::vector<std::string>>& docs, std::size_t width) {
    const auto corpus = testutil::make_corpus(docs);
    const auto stats = count_cooccurrences(corpus, width);
    const auto expect = oracle::naive_windows(docs, width);
    REQUIRE(stats.total_windows() == expect.total);
    const auto& vocab = stats.vocabulary();
    std::uint64_t nonzero_words = 0;
    for (WordId w = 0; w < vocab.size(); ++w) {
        auto it = expect.word.find(vocab.word(w));
        const std::uint64_t want = it == expect.word.end() ? 0 : it->second;
        REQUIRE(stats.word_windows(w) == want);
        nonzero_words += want > 0;
    }
    CHECK(nonzero_words == expect.word.size());
    for (const auto& [pair, count] : expect.pair) {
        const auto a = vocab.find(pair.first);
        const auto b = vocab.find(pair.second);
        REQUIRE(a.has_value());
        REQUIRE(b.has_value());
        REQUIRE(stats.pair_windows(*a, *b) == count);
    }
    CHECK(stats.observed_pairs() == expect.pair.size());
}

}  // namespace

TEST_CASE("load_corpus builds timestamps and vocabulary") {
    const auto c = from_text(R"({"timestamp":1991,"tokens":["b","c"]}
{"timestamp":1990,"tokens":["a","b"]}
)");
    CHECK(c.size() == 2);
    CHECK(c.timestamps == std::vector<Timestamp>{1990, 1991});
    CHECK(c.vocabulary.size() == 3);
    CHECK(c.documents[0].timestamp == 1991);  // input order kept
    CHECK(c.vocabulary.find("a").has_value());
    CHECK_FALSE(c.vocabulary.find("z").has_value());
}

TEST_CASE("load_corpus skips empty token lists and counts them") {
    const auto c = from_text("{\"timestamp\":1,\"tokens\":[\"a\"]}\n{\"timestamp\":2,\"tokens\":[]}\n");
    CHECK(c.size() == 1);
    CHECK(c.skipped_records == 1);
    CHECK(c.timestamps == std::vector<Timestamp>{1});
}

TEST_CASE("load_corpus errors") {
    SUBCASE("malformed JSON reports the line") {
        try {
            from_text("{\"timestamp\":1,\"tokens\":[\"a\"]}\n{oops\n");
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.line() == 2);
        }
    }
    SUBCASE("missing fields") {
        CHECK_THROWS_AS(from_text("{\"tokens\":[\"a\"]}\n"), ParseError);
        CHECK_THROWS_AS(from_text("{\"timestamp\":\"x\",\"tokens\":[\"a\"]}\n"), ParseError);
        CHECK_THROWS_AS(from_text("{\"timestamp\":1,\"tokens\":[1]}\n"), ParseError);
    }
    SUBCASE("empty stream") { CHECK_THROWS_AS(from_text(""), ValidationError); }
    SUBCASE("missing file is an I/O error") { CHECK_THROWS_AS(load_corpus_file("/nonexistent/corpus.jsonl"), IoError); }
}

TEST_CASE("load_corpus handles a NeurIPS-sized document count") {
    std::ostringstream text;
    for (int i = 0; i < 9679; ++i) {
        text << "{\"timestamp\":" << 1987 + i % 33 << ",\"tokens\":[\"w" << i % 97 << "\",\"x\"]}\n";
    }
    const auto c = from_text(text.str());
    CHECK(c.size() == 9679);
    CHECK(c.timestamps.size() == 33);
}

TEST_CASE("prune_vocabulary thresholds") {
    std::vector<std::vector<std::string>> docs(10, {"common"});
    docs[0].push_back("rare");
    const auto corpus = testutil::make_corpus(docs);

    const auto pruned = prune_vocabulary(corpus, 0.2, 1.0);
    CHECK_FALSE(pruned.vocabulary.find("rare").has_value());
    CHECK(pruned.vocabulary.find("common") == WordId{0});
    CHECK(pruned.documents[0].tokens == std::vector<std::string>{"common"});

    CHECK(prune_vocabulary(corpus, 0.0, 1.0) == corpus);
    CHECK_THROWS_AS(prune_vocabulary(corpus, 0.5, 0.4), ValidationError);
    CHECK_THROWS_AS(prune_vocabulary(corpus, 0.0, 0.05), ValidationError);  // empties the vocabulary
}

TEST_CASE("prune_vocabulary matches brute-force df filter on a Zipfian corpus") {
    std::mt19937_64 rng(11);
    const auto docs = testutil::zipf_docs(rng, 1000, 30, 400);
    const auto corpus = testutil::make_corpus(docs);
    const auto pruned = prune_vocabulary(corpus, 0.05, 0.95);
    const auto expect = oracle::df_filter(docs, 0.05, 0.95);
    std::set<std::string> got(pruned.vocabulary.words().begin(), pruned.vocabulary.words().end());
    CHECK(got == expect);
    CHECK(expect.size() > 5);
    CHECK(expect.size() < 400);
    // dense ids, every remaining token retained
    for (WordId w = 0; w < pruned.vocabulary.size(); ++w) CHECK(pruned.vocabulary.find(pruned.vocabulary.word(w)) == w);
    for (const auto& d : pruned.documents)
        for (const auto& t : d.tokens) CHECK(expect.count(t) == 1);
    CHECK(pruned.size() == corpus.size());
}

TEST_CASE("prune_vocabulary is idempotent") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        const auto corpus = testutil::make_corpus(testutil::zipf_docs(rng, 60, 12, 80));
        const auto once = prune_vocabulary(corpus, 0.1, 0.9);
        CHECK(prune_vocabulary(once, 0.1, 0.9) == once);
    }
}

TEST_CASE("count_cooccurrences worked examples") {
    SUBCASE("document shorter than the window is one window") {
        const auto stats = count_cooccurrences(testutil::make_corpus({{"a", "b"}}), 10);
        const auto a = *stats.vocabulary().find("a");
        const auto b = *stats.vocabulary().find("b");
        CHECK(stats.total_windows() == 1);
        CHECK(stats.pair_windows(a, b) == 1);
    }
    SUBCASE("boolean presence per window") {
        const auto stats = count_cooccurrences(testutil::make_corpus({{"a", "b", "a"}}), 2);
        const auto a = *stats.vocabulary().find("a");
        const auto b = *stats.vocabulary().find("b");
        CHECK(stats.total_windows() == 2);
        CHECK(stats.word_windows(a) == 2);
        CHECK(stats.word_windows(b) == 2);
        CHECK(stats.pair_windows(a, b) == 2);
        CHECK(stats.p_word(a) == 1.0);
        CHECK(stats.p_pair(a, b) == 1.0);
        CHECK(stats.p_pair(b, a) == stats.p_pair(a, b));
    }
    SUBCASE("window size zero is rejected") {
        CHECK_THROWS_AS(count_cooccurrences(testutil::make_corpus({{"a"}}), 0), ValidationError);
    }
}

TEST_CASE("p_word and p_pair edge values") {
    const auto corpus = testutil::four_doc_corpus();
    auto stats = count_cooccurrences(corpus, 10);
    const auto& v = stats.vocabulary();
    CHECK(stats.p_word(*v.find("a")) == doctest::Approx(0.75));
    CHECK(stats.p_pair(*v.find("b"), *v.find("c")) == 0.0);
    CHECK(stats.p_word(WordId{999}) == 0.0);  // unseen id
    CHECK(stats.p_pair(*v.find("b"), *v.find("b")) == stats.p_word(*v.find("b")));

    const auto one = count_cooccurrences(testutil::make_corpus({{"x", "y"}}), 5);
    CHECK(one.p_word(*one.vocabulary().find("x")) == 1.0);
}

TEST_CASE("count_cooccurrences equals the naive window oracle on random corpora") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 30; ++trial) {
        const auto docs = testutil::random_docs(rng, 30, 25, 12);
        for (std::size_t width : {1u, 3u, 5u}) {
            check_against_oracle(docs, width);
        }
    }
}

TEST_CASE("co-occurrence invariants") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 25; ++trial) {
        auto docs = testutil::random_docs(rng, 20, 20, 10);
        const auto corpus = testutil::make_corpus(docs);
        const std::size_t width = 1 + trial % 6;
        const auto stats = count_cooccurrences(corpus, width);
        const auto V = static_cast<WordId>(stats.vocabulary().size());
        for (WordId a = 0; a < V; ++a) {
            CHECK(stats.word_windows(a) <= stats.total_windows());
            CHECK(stats.pair_windows(a, a) == stats.word_windows(a));
            for (WordId b = 0; b < V; ++b) {
                CHECK(stats.pair_windows(a, b) == stats.pair_windows(b, a));
                CHECK(stats.pair_windows(a, b) <= std::min(stats.word_windows(a), stats.word_windows(b)));
                CHECK(stats.p_pair(a, b) <= std::min(stats.p_word(a), stats.p_word(b)));
            }
        }
        // Document order does not matter (same vocabulary ids for comparison).
        auto shuffled = corpus;
        std::shuffle(shuffled.documents.begin(), shuffled.documents.end(), rng);
        CHECK(count_cooccurrences(shuffled, width) == stats);
        // Parallel counting is identical to sequential.
        CHECK(count_cooccurrences(corpus, width, 4) == stats);
    }
}

TEST_CASE("stats cache round trip and version guard") {
    std::mt19937_64 rng(3);
    const auto corpus = testutil::make_corpus(testutil::random_docs(rng, 15, 20, 9));
    const auto stats = count_cooccurrences(corpus, 4);
    std::ostringstream a, b;
    stats.save(a);
    stats.save(b);
    CHECK(a.str() == b.str());
    std::istringstream in(a.str());
    CHECK(CooccurrenceStats::load(in) == stats);

    std::string bumped = a.str();
    const auto pos = bumped.find("\"version\":1");
    REQUIRE(pos != std::string::npos);
    bumped.replace(pos, 11, "\"version\":2");
    std::istringstream bad(bumped);
    CHECK_THROWS_AS(CooccurrenceStats::load(bad), ValidationError);

    std::istringstream junk("{\"format\":\"something-else\"}");
    CHECK_THROWS_AS(CooccurrenceStats::load(junk), ValidationError);
}
