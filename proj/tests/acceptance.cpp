// Acceptance suite: one PASS/FAIL line per criterion. Exit status is non-zero
// if any criterion fails, except those listed in kUnattainable, which still
// print FAIL with the reason.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "published_topics.hpp"
#include "dtq/cli.hpp"
#include "dtq/errors.hpp"
#include "dtq/fixture.hpp"
#include "dtq/io.hpp"
#include "dtq/perturbation.hpp"
#include "dtq/static_measures.hpp"
#include "dtq/stats_human.hpp"
#include "dtq/temporal_measures.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace dtq;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

// Criterion 1 includes values that compare against years whose word lists
// were never published; no implementation can recompute them.
const std::set<int> kUnattainable{1};

std::string fmt(const char* f, double v) {
    char b[64];
    std::snprintf(b, sizeof b, f, v);
    return b;
}

Outcome published_fixture() {
    int matched = 0, mismatched = 0;
    std::vector<std::string> missing;
    for (const auto& topic : {published::dlda_topic19(), published::detm_topic8(), published::detm_topic21()}) {
        const auto topics = published::as_dynamic_topics(topic);
        const auto& seq = topics.topic(0);
        for (std::size_t i = 0; i < seq.size(); ++i) {
            const std::size_t other = topic.forward ? i + 1 : i - 1;
            if (other >= seq.size()) {
                missing.push_back(std::string(topic.name) + " " + std::to_string(topic.rows[i].year) + "=" +
                                  fmt("%.1f", topic.rows[i].printed_tts));
                continue;
            }
            const std::vector<TopicWordList> window{seq[std::min(i, other)], seq[std::max(i, other)]};
            if (std::abs(tts(window) - topic.rows[i].printed_tts) < 1e-12) {
                ++matched;
            } else {
                ++mismatched;
            }
        }
    }
    std::string detail = std::to_string(matched) + "/" + std::to_string(matched + mismatched) +
                         " recomputable printed values match";
    if (!missing.empty()) {
        detail += "; not recomputable (partner year not printed):";
        for (const auto& m : missing) detail += " " + m;
    }
    return {mismatched == 0 && missing.empty(), detail};
}

Outcome shuffle_invariance() {
    const auto fx = generate_fixture(FixtureSpec{});
    const auto stats = count_cooccurrences(fx.corpus, 10);
    const auto base = temporal_report(stats, fx.topics);
    bool ok = fx.corpus.size() >= 500 && fx.topics.n_topics() == 10 && fx.topics.n_timestamps() == 10 &&
              fx.topics.n_top() == 10 && base.mean_tts >= 0.9 - 1e-12;
    bool identical = true;
    double worst_tts = 0.0, worst_ratio = 0.0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto shuffled = temporal_shuffle(fx.topics, seed);
        const auto r = temporal_report(stats, shuffled);
        for (std::size_t t = 0; t < 10; ++t) {
            const auto& a = base.yearwise.per_year[t];
            const auto& b = r.yearwise.per_year[t];
            identical = identical && a.tc == b.tc && a.td == b.td && a.tq == b.tq;
        }
        worst_tts = std::max(worst_tts, r.mean_tts);
        worst_ratio = std::max(worst_ratio, r.mean_ttq / base.mean_ttq);
    }
    ok = ok && identical && worst_tts < 0.3 && worst_ratio <= 0.5;
    return {ok, "docs=" + std::to_string(fx.corpus.size()) + " base TTS=" + fmt("%.3f", base.mean_tts) +
                    " TTQ=" + fmt("%.4f", base.mean_ttq) + "; over 10 seeds max shuffled TTS=" +
                    fmt("%.3f", worst_tts) + ", max TTQ ratio=" + fmt("%.3f", worst_ratio) +
                    ", year-wise TC/TD/TQ bit-identical=" + (identical ? "yes" : "no")};
}

Outcome collapse_property() {
    const auto fx = generate_fixture(FixtureSpec{});
    const auto stats = count_cooccurrences(fx.corpus, 10);
    bool ok = true;
    double worst_dtq = 0.0;
    for (std::size_t chosen = 0; chosen < fx.topics.n_topics(); ++chosen) {
        const auto c = collapse_repeat(fx.topics, chosen);
        const auto r = temporal_report(stats, c);
        for (const auto& y : r.yearwise.per_year) ok = ok && y.td == 0.0 && y.tq == 0.0;
        const double original = ttq(stats, fx.topics.topic(chosen), 2);
        for (const auto& t : r.topics) ok = ok && t.ttq == original;
        worst_dtq = std::max(worst_dtq, std::abs(r.dtq - r.mean_ttq / 2));
    }
    ok = ok && worst_dtq <= 1e-12;
    return {ok, "all 10 choices: TD=TQ=0 every year, TTQ equals original, max |DTQ - mean(TTQ)/2|=" +
                    fmt("%.1e", worst_dtq)};
}

Outcome intrusion_monotonicity() {
    const auto fx = generate_fixture(FixtureSpec{});
    const auto stats = count_cooccurrences(fx.corpus, 10);
    std::vector<std::size_t> levels(10);
    std::iota(levels.begin(), levels.end(), std::size_t{1});
    const std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
    const std::size_t target = choose_topic(fx.topics, 1);
    const auto rows = intrusion_sweep(stats, fx.topics, target, levels, seeds);
    const auto c = level_ttq_correlation(rows);
    double worst_target = -1.0;
    for (std::size_t k = 0; k < fx.topics.n_topics(); ++k) {
        worst_target = std::max(worst_target, level_ttq_correlation(intrusion_sweep(stats, fx.topics, k, levels, seeds))
                                                  .seed_mean);
    }
    return {c.seed_mean <= -0.8, "target " + std::to_string(target) + ", 5 seeds: mean per-seed rho=" +
                                     fmt("%.3f", c.seed_mean) + " (all-rows rho=" + fmt("%.3f", c.pooled) +
                                     "); weakest target mean rho=" + fmt("%.3f", worst_target)};
}

Outcome counting_oracle() {
    std::mt19937_64 rng(2024);
    std::size_t comparisons = 0, mismatches = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const auto docs = testutil::random_docs(rng, 50, 40, 3 + trial % 30);
        const auto corpus = testutil::make_corpus(docs);
        for (std::size_t width : {1, 2, 5, 10, 1000}) {
            const auto stats = count_cooccurrences(corpus, width);
            const auto naive = oracle::naive_windows(docs, width);
            ++comparisons;
            bool ok = stats.total_windows() == naive.total && stats.observed_pairs() == naive.pair.size();
            const auto& v = stats.vocabulary();
            for (const auto& [w, n] : naive.word) ok = ok && stats.word_windows(*v.find(w)) == n;
            for (const auto& [p, n] : naive.pair) ok = ok && stats.pair_windows(*v.find(p.first), *v.find(p.second)) == n;
            if (!ok) ++mismatches;
        }
    }
    return {mismatches == 0, std::to_string(comparisons - mismatches) + "/" + std::to_string(comparisons) +
                                 " corpus x window comparisons exact"};
}

Outcome npmi_correctness() {
    const auto stats = count_cooccurrences(testutil::four_doc_corpus(), 10);
    const double eps = kDefaultEpsilon;
    auto hand = [eps](double p12, double p1, double p2) { return std::log((p12 + eps) / (p1 * p2)) / -std::log(p12 + eps); };
    // docs {a b} {a b} {a c} {d e}: one window each
    const std::vector<std::tuple<std::string, std::string, double>> expected{
        {"a", "b", hand(0.5, 0.75, 0.5)}, {"a", "c", hand(0.25, 0.75, 0.25)}, {"b", "c", hand(0.0, 0.5, 0.25)},
        {"d", "e", hand(0.25, 0.25, 0.25)}, {"a", "d", hand(0.0, 0.75, 0.25)}};
    double worst = 0.0;
    for (const auto& [a, b, v] : expected) worst = std::max(worst, std::abs(npmi_pair(stats, a, b).value - v));
    double worst_self = 0.0;
    std::size_t self_checked = 0;
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        const auto s = count_cooccurrences(testutil::make_corpus(testutil::random_docs(rng, 30, 25, 15)), 1 + trial % 7);
        for (const auto& w : s.vocabulary().words()) {
            const double p = s.p_word(*s.vocabulary().find(w));
            if (p <= 0.0 || p >= 1.0) continue;
            ++self_checked;
            worst_self = std::max(worst_self, std::abs(npmi_pair(s, w, w).value - 1.0));
        }
    }
    return {worst <= 1e-9 && worst_self <= 1e-9,
            "max |npmi - hand value|=" + fmt("%.1e", worst) + "; self-pair max |npmi(w,w)-1|=" +
                fmt("%.1e", worst_self) + " over " + std::to_string(self_checked) + " words"};
}

Outcome spearman_oracle() {
    std::mt19937_64 rng(77);
    std::uniform_int_distribution<std::size_t> len(3, 100);
    std::normal_distribution<double> gauss;
    std::size_t done = 0;
    double worst = 0.0, worst_mono = 0.0;
    while (done < 500) {
        const std::size_t n = len(rng);
        std::vector<double> x(n), y(n);
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = gauss(rng);
            y[i] = 0.5 * x[i] + gauss(rng);
        }
        // inject ties by copying values and rounding
        for (std::size_t i = 0; i < n / 3; ++i) x[rng() % n] = x[rng() % n];
        for (auto& v : y) v = std::round(v * 2.0) / 2.0;
        double rho;
        try {
            rho = spearman(x, y);
        } catch (const ValidationError&) {
            continue;
        }
        ++done;
        worst = std::max(worst, std::abs(rho - oracle::rank_then_pearson(x, y)));
        std::vector<double> tx(n), ty(n);
        std::transform(x.begin(), x.end(), tx.begin(), [](double v) { return std::exp(v) + v * v * v; });
        std::transform(y.begin(), y.end(), ty.begin(), [](double v) { return -1.0 / (4.0 + std::atan(v)); });
        worst_mono = std::max(worst_mono, std::abs(spearman(tx, ty) - rho));
    }
    return {worst <= 1e-12 && worst_mono <= 1e-12, "500 tied vectors: max |rho - oracle|=" + fmt("%.1e", worst) +
                                                        ", max monotone-transform drift=" + fmt("%.1e", worst_mono)};
}

Outcome composition_identities() {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    double worst = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        const double q = u(rng), s = u(rng);
        const std::vector<double> tq(1 + rng() % 30, q), tt(1 + rng() % 60, s);
        worst = std::max(worst, std::abs(dtq::dtq(tq, tt) - (q + s) / 2));
    }
    bool bts_ok = true;
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t T = 2 + rng() % 8, N = 1 + rng() % 6;
        std::vector<TopicWordList> seq;
        for (std::size_t t = 0; t < T; ++t) {
            std::vector<std::string> w;
            while (w.size() < N) {
                auto cand = "w" + std::to_string(rng() % (N + 4));
                if (std::find(w.begin(), w.end(), cand) == w.end()) w.push_back(cand);
            }
            seq.emplace_back(w);
        }
        bts_ok = bts_ok && bts(seq) == tts(seq);
    }
    return {worst <= 1e-12 && bts_ok,
            "dtq max error=" + fmt("%.1e", worst) + " over 1000 cases; bts == tts at L=T on 500 sequences: " +
                (bts_ok ? "yes" : "no")};
}

std::map<std::string, std::string> snapshot(const fs::path& dir) {
    std::map<std::string, std::string> files;
    for (const auto& e : fs::recursive_directory_iterator(dir))
        if (e.is_regular_file()) files[fs::relative(e.path(), dir).string()] = read_file(e.path().string());
    return files;
}

Outcome cli_determinism() {
    const auto root = fs::temp_directory_path() / "dtq_acceptance_cli";
    fs::remove_all(root);
    std::ostringstream sink;
    auto run = [&](const std::vector<std::string>& args) { return run_cli(args, sink, sink); };
    if (run({"fixture", "--output-dir", (root / "data").string()}) != 0) return {false, "fixture failed"};
    const auto corpus = (root / "data" / "corpus.jsonl").string();
    const auto topics = (root / "data" / "topics.json").string();

    std::ostringstream ratings;
    ratings << "rater_id,topic_id,relatedness,smoothness,familiarity,duration_seconds,is_control\n";
    for (int r = 0; r < 10; ++r) {
        for (int t = 0; t < 10; ++t)
            ratings << "r" << r << ',' << t << ',' << 1 + (t + r) % 3 << ',' << 1 + (t * r) % 3 << ",1,30,0\n";
        ratings << "r" << r << ",ctl,1,1,0,30,1\n";
    }
    write_file_atomic((root / "data" / "ratings.csv").string(), ratings.str());
    std::ostringstream measures;
    measures << "topic,ttc,tts,ttq,btc,bts\n";
    for (int t = 0; t < 10; ++t)
        measures << t << ',' << 0.1 * t << ',' << 0.05 * ((t * 7) % 10) << ",0.1," << 0.02 * ((t * 3) % 10) << ','
                 << 0.03 * t << '\n';
    write_file_atomic((root / "data" / "measures.csv").string(), measures.str());

    const std::vector<std::pair<std::string, std::vector<std::string>>> commands{
        {"fixture", {"fixture", "--seed", "4"}},
        {"cooccur", {"cooccur", "--corpus-path", corpus, "--threads", "3"}},
        {"eval", {"eval", "--corpus-path", corpus, "--topics-path", topics}},
        {"eval-csv", {"eval", "--corpus-path", corpus, "--topics-path", topics, "--output-format", "csv"}},
        {"perturb", {"perturb", "--kind", "intrude", "--level", "4", "--topics-path", topics, "--seed", "6"}},
        {"intrude", {"intrude", "--corpus-path", corpus, "--topics-path", topics}},
        {"human",
         {"human", "--ratings-path", (root / "data" / "ratings.csv").string(), "--measures-path",
          (root / "data" / "measures.csv").string(), "--control-id", "ctl"}},
    };
    std::size_t identical = 0;
    std::string bad;
    for (const auto& [name, base_args] : commands) {
        auto args = base_args;
        const auto dir = root / name;
        args.insert(args.end(), {"--output-dir", dir.string()});
        if (run(args) != 0) {
            bad += " " + name + "(exit)";
            continue;
        }
        const auto first = snapshot(dir);
        if (run(args) != 0) {
            bad += " " + name + "(exit)";
            continue;
        }
        if (snapshot(dir) == first && !first.empty()) {
            ++identical;
        } else {
            bad += " " + name;
        }
    }
    fs::remove_all(root);
    return {bad.empty(), std::to_string(identical) + "/" + std::to_string(commands.size()) +
                             " commands byte-identical on re-run" + (bad.empty() ? "" : "; differing:" + bad)};
}

}  // namespace

int main() {
    const std::vector<std::tuple<int, std::string, double, std::function<Outcome()>>> criteria{
        {1, "published TTS fixture", 1.0, published_fixture},
        {2, "shuffle invariance", 30.0, shuffle_invariance},
        {3, "collapse property", 0.0, collapse_property},
        {4, "intrusion monotonicity", 30.0, intrusion_monotonicity},
        {5, "counting oracle", 0.0, counting_oracle},
        {6, "NPMI correctness", 0.0, npmi_correctness},
        {7, "Spearman oracle", 0.0, spearman_oracle},
        {8, "composition identities", 0.0, composition_identities},
        {9, "CLI determinism", 0.0, cli_determinism},
    };
    int unexpected = 0;
    for (const auto& [id, name, budget, check] : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = check();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (budget > 0.0 && secs >= budget) {
            o.pass = false;
            o.detail += "; over time budget";
        }
        std::printf("%s %d %s: %s (%.2fs)\n", o.pass ? "PASS" : "FAIL", id, name.c_str(), o.detail.c_str(), secs);
        if (!o.pass && !kUnattainable.count(id)) ++unexpected;
    }
    std::fflush(stdout);
    return unexpected == 0 ? 0 : 1;
}
