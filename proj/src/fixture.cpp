#include "dtq/fixture.hpp"

#include <string>

#include "dtq/errors.hpp"
#include "dtq/random.hpp"

namespace dtq {

namespace {

std::string chain_word(std::size_t k, std::size_t j) {
    return "topic" + std::to_string(k) + "_w" + std::to_string(j);
}

}  // namespace

Fixture generate_fixture(const FixtureSpec& spec) {
    if (spec.n_topics == 0 || spec.n_timestamps == 0 || spec.n_top == 0 || spec.docs_per_slice == 0 ||
        spec.doc_length == 0) {
        throw ValidationError("fixture dimensions must be positive");
    }
    if (!(spec.noise >= 0.0 && spec.noise < 1.0)) {
        throw ValidationError("fixture noise must lie in [0, 1)");
    }
    if (!(spec.mixing >= 0.0 && spec.mixing < 1.0)) {
        throw ValidationError("fixture mixing must lie in [0, 1)");
    }
    if (spec.noise > 0.0 && spec.background_words == 0) {
        throw ValidationError("noisy fixture needs background words");
    }
    Rng rng(spec.seed);
    std::vector<Timestamp> timestamps;
    for (std::size_t t = 0; t < spec.n_timestamps; ++t) {
        timestamps.push_back(spec.first_timestamp + static_cast<Timestamp>(t));
    }

    std::vector<std::vector<TopicWordList>> grid(spec.n_topics);
    for (std::size_t k = 0; k < spec.n_topics; ++k) {
        for (std::size_t t = 0; t < spec.n_timestamps; ++t) {
            std::vector<std::string> words;
            for (std::size_t i = 0; i < spec.n_top; ++i) {
                words.push_back(chain_word(k, t + i));
            }
            grid[k].emplace_back(std::move(words));
        }
    }

    TimedCorpus corpus;
    corpus.timestamps = timestamps;
    for (std::size_t t = 0; t < spec.n_timestamps; ++t) {
        for (std::size_t k = 0; k < spec.n_topics; ++k) {
            const auto& slice = grid[k][t];
            for (std::size_t d = 0; d < spec.docs_per_slice; ++d) {
                Document doc{timestamps[t], {}};
                doc.tokens.reserve(spec.doc_length);
                for (std::size_t i = 0; i < spec.doc_length; ++i) {
                    if (spec.noise > 0.0 && uniform_unit(rng) < spec.noise) {
                        doc.tokens.push_back("bg" + std::to_string(uniform_below(rng, spec.background_words)));
                    } else if (spec.n_topics > 1 && spec.mixing > 0.0 && uniform_unit(rng) < spec.mixing) {
                        auto other = static_cast<std::size_t>(uniform_below(rng, spec.n_topics - 1));
                        if (other >= k) ++other;
                        const auto& foreign = grid[other][t];
                        doc.tokens.push_back(foreign[static_cast<std::size_t>(uniform_below(rng, foreign.size()))]);
                    } else {
                        doc.tokens.push_back(slice[static_cast<std::size_t>(uniform_below(rng, slice.size()))]);
                    }
                }
                for (const auto& tok : doc.tokens) {
                    corpus.vocabulary.add(tok);
                }
                corpus.documents.push_back(std::move(doc));
            }
        }
    }
    return {std::move(corpus), DynamicTopics(std::move(timestamps), spec.n_top, std::move(grid))};
}

}  // namespace dtq
