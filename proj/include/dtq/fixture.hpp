#ifndef DTQ_FIXTURE_HPP
#define DTQ_FIXTURE_HPP

#include <cstddef>
#include <cstdint>

#include "dtq/corpus.hpp"
#include "dtq/topics.hpp"

namespace dtq {

// Drifting word chains: topic k owns words c_k0, c_k1, ...; its slice at
// timestamp index t is (c_kt, ..., c_k(t+N-1)), so consecutive slices share
// N-1 words and different topics share none. Each (topic, timestamp) cell
// gets docs_per_slice documents whose tokens are drawn from that slice, with
// a `noise` fraction drawn from a shared background vocabulary and a
// `mixing` fraction drawn from the slice of another topic at the same
// timestamp.
struct FixtureSpec {
    std::size_t n_topics = 10;
    std::size_t n_timestamps = 10;
    std::size_t n_top = kDefaultTopWords;
    std::size_t docs_per_slice = 5;
    std::size_t doc_length = 60;
    std::size_t background_words = 20;
    double noise = 0.05;
    double mixing = 0.3;
    Timestamp first_timestamp = 2000;
    std::uint64_t seed = 1;
};

struct Fixture {
    TimedCorpus corpus;
    DynamicTopics topics;
};

Fixture generate_fixture(const FixtureSpec& spec);

}  // namespace dtq

#endif
