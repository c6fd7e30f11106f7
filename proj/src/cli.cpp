#include "dtq/cli.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "dtq/corpus.hpp"
#include "dtq/errors.hpp"
#include "dtq/fixture.hpp"
#include "dtq/io.hpp"
#include "dtq/perturbation.hpp"
#include "dtq/report_io.hpp"
#include "dtq/static_measures.hpp"
#include "dtq/stats_human.hpp"
#include "dtq/temporal_measures.hpp"
#include "dtq/topics.hpp"

namespace dtq {

using nlohmann::json;
namespace fs = std::filesystem;

void RunConfig::validate() const {
    if (window_size < 1) throw ValidationError("window_size must be at least 1");
    if (!(epsilon > 0.0)) throw ValidationError("epsilon must be positive");
    if (window_length < 2) throw ValidationError("window_length (L) must be at least 2");
    if (n_top < 1) throw ValidationError("n_top must be at least 1");
    if (!(min_df >= 0.0 && min_df <= 1.0 && max_df >= 0.0 && max_df <= 1.0))
        throw ValidationError("min_df and max_df must lie in [0, 1]");
    if (min_df > max_df) throw ValidationError("min_df must not exceed max_df");
    if (output_format != "json" && output_format != "csv")
        throw ValidationError("output_format must be json or csv");
    if (threads < 1) throw ValidationError("threads must be at least 1");
}

json RunConfig::to_json() const {
    return {{"corpus_path", corpus_path},
            {"topics_path", topics_path},
            {"stats_cache_path", stats_cache_path},
            {"window_size", window_size},
            {"epsilon", epsilon},
            {"window_length", window_length},
            {"n_top", n_top},
            {"min_df", min_df},
            {"max_df", max_df},
            {"seed", seed},
            {"output_dir", output_dir},
            {"output_format", output_format}};
}

namespace {

// Writes every file to a temporary name first and renames only once all
// writes succeeded.
void write_outputs(const std::vector<std::pair<std::string, std::string>>& files) {
    std::vector<std::string> temps;
    try {
        for (const auto& [path, content] : files) {
            const auto tmp = path + ".partial";
            write_file_atomic(tmp, content);
            temps.push_back(tmp);
        }
    } catch (...) {
        for (const auto& t : temps) std::remove(t.c_str());
        throw;
    }
    for (std::size_t i = 0; i < files.size(); ++i) {
        std::error_code ec;
        fs::rename(temps[i], files[i].first, ec);
        if (ec) {
            for (std::size_t j = i; j < temps.size(); ++j) std::remove(temps[j].c_str());
            throw IoError("cannot rename " + temps[i] + " to " + files[i].first + ": " + ec.message());
        }
    }
}

std::string out_path(const RunConfig& cfg, const std::string& name) {
    return (fs::path(cfg.output_dir) / name).string();
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

void require_path(const std::string& value, const char* flag) {
    if (value.empty()) {
        throw ValidationError(std::string("missing required ") + flag);
    }
}

std::string default_stats_path(const RunConfig& cfg) {
    return cfg.stats_cache_path.empty() ? out_path(cfg, "stats.json") : cfg.stats_cache_path;
}

CooccurrenceStats build_stats(const RunConfig& cfg) {
    auto corpus = load_corpus_file(cfg.corpus_path);
    if (cfg.min_df > 0.0 || cfg.max_df < 1.0) {
        corpus = prune_vocabulary(corpus, cfg.min_df, cfg.max_df);
    }
    return count_cooccurrences(corpus, cfg.window_size, cfg.threads);
}

// Cache when given (or present at the default location), corpus otherwise.
CooccurrenceStats obtain_stats(const RunConfig& cfg) {
    if (!cfg.stats_cache_path.empty()) {
        auto stats = CooccurrenceStats::load_file(cfg.stats_cache_path);
        if (stats.window_size() != cfg.window_size) {
            throw ValidationError("stats cache " + cfg.stats_cache_path + " has window_size " +
                                  std::to_string(stats.window_size()) + ", config asks for " +
                                  std::to_string(cfg.window_size));
        }
        return stats;
    }
    if (!cfg.corpus_path.empty()) {
        return build_stats(cfg);
    }
    throw ValidationError("either --stats-cache-path or --corpus-path is required");
}

// Binds one flag per RunConfig field and replays --config JSON values into
// flags that were not given on the command line.
class ConfigBinder {
public:
    ConfigBinder(CLI::App* app, RunConfig& cfg) : app_(app) {
        app->add_option("--config", config_file_, "JSON file with flag values (command-line flags win)");
        bind("corpus_path", app->add_option("--corpus-path", cfg.corpus_path, "line-delimited JSON corpus"));
        bind("topics_path", app->add_option("--topics-path", cfg.topics_path, "dynamic topics JSON"));
        bind("stats_cache_path", app->add_option("--stats-cache-path", cfg.stats_cache_path, "co-occurrence cache"));
        bind("window_size", app->add_option("--window-size", cfg.window_size, "tokens per co-occurrence window")
                                ->capture_default_str());
        bind("epsilon", app->add_option("--epsilon", cfg.epsilon, "NPMI smoothing constant")->capture_default_str());
        bind("window_length",
             app->add_option("-L,--window-length", cfg.window_length, "temporal window length")->capture_default_str());
        bind("n_top", app->add_option("--n-top", cfg.n_top, "top words per topic slice")->capture_default_str());
        bind("min_df", app->add_option("--min-df", cfg.min_df, "minimum document frequency fraction"));
        bind("max_df", app->add_option("--max-df", cfg.max_df, "maximum document frequency fraction"));
        bind("seed", app->add_option("--seed", cfg.seed, "random seed")->capture_default_str());
        bind("output_dir", app->add_option("--output-dir", cfg.output_dir, "directory for output files"));
        bind("output_format", app->add_option("--output-format", cfg.output_format, "json or csv")
                                  ->check(CLI::IsMember({"json", "csv"})));
        bind("threads", app->add_option("--threads", cfg.threads, "worker threads"));
    }

    void bind(const std::string& key, CLI::Option* opt) { options_[key] = opt; }

    void apply_config_file() {
        if (config_file_.empty()) return;
        json j;
        try {
            j = json::parse(read_file(config_file_));
        } catch (const json::exception& e) {
            throw ValidationError(config_file_ + ": invalid JSON: " + e.what());
        }
        if (!j.is_object()) throw ValidationError(config_file_ + ": config must be a JSON object");
        for (const auto& [key, value] : j.items()) {
            auto it = options_.find(key);
            if (it == options_.end()) {
                // Keys for other subcommands are allowed in a shared config file.
                continue;
            }
            CLI::Option* opt = it->second;
            if (opt->count() > 0) continue;
            std::vector<std::string> values;
            auto to_text = [](const json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); };
            if (value.is_array()) {
                for (const auto& v : value) values.push_back(to_text(v));
            } else {
                values.push_back(to_text(value));
            }
            try {
                for (const auto& v : values) opt->add_result(v);
                opt->run_callback();
            } catch (const CLI::Error& e) {
                throw ValidationError(config_file_ + ": bad value for " + key + ": " + e.what());
            }
        }
    }

private:
    CLI::App* app_;
    std::string config_file_;
    std::map<std::string, CLI::Option*> options_;
};

// ---- cooccur ----

int cmd_cooccur(const RunConfig& cfg, std::ostream& out) {
    require_path(cfg.corpus_path, "--corpus-path");
    const auto stats = build_stats(cfg);
    std::ostringstream buf;
    stats.save(buf);
    const auto path = default_stats_path(cfg);
    write_outputs({{path, buf.str()}});
    out << "V=" << stats.vocabulary().size() << ", windows=" << stats.total_windows() << "\n";
    return kExitOk;
}

// ---- eval ----

int cmd_eval(const RunConfig& cfg, const std::string& mode, std::ostream& out) {
    require_path(cfg.topics_path, "--topics-path");
    const auto topics = load_topics_file(cfg.topics_path, cfg.n_top);
    const auto stats = obtain_stats(cfg);
    check_timestamps_known(topics, stats.timestamps());

    std::vector<std::pair<std::string, std::string>> files;
    const bool csv = cfg.output_format == "csv";
    const json config = cfg.to_json();
    std::ostringstream line;
    auto num = [](double v) {
        char b[32];
        std::snprintf(b, sizeof b, "%.4f", v);
        return std::string(b);
    };

    if (mode == "yearwise") {
        const auto yw = yearwise_report(topics, stats, cfg.epsilon);
        if (csv) {
            files.emplace_back(out_path(cfg, "yearwise.csv"), yearwise_csv(yw));
        } else {
            json j = to_json(yw);
            j["config"] = config;
            files.emplace_back(out_path(cfg, "yearwise.json"), dump(j));
        }
        line << "TC=" << num(yw.mean_tc()) << " TD=" << num(yw.mean_td()) << " TQ=" << num(yw.mean_tq());
    } else {
        const auto report = temporal_report(stats, topics, cfg.window_length, cfg.epsilon, cfg.threads);
        const auto& yw = report.yearwise;
        if (csv) {
            if (mode == "all") files.emplace_back(out_path(cfg, "yearwise.csv"), yearwise_csv(yw));
            files.emplace_back(out_path(cfg, "temporal_series.csv"), temporal_series_csv(report, topics));
            files.emplace_back(out_path(cfg, "temporal_topics.csv"), temporal_topics_csv(report, topics));
            files.emplace_back(out_path(cfg, "temporal_summary.csv"), temporal_summary_csv(report));
        } else {
            if (mode == "all") {
                json y = to_json(yw);
                y["config"] = config;
                files.emplace_back(out_path(cfg, "yearwise.json"), dump(y));
            }
            json t = to_json(report, topics);
            t["config"] = config;
            files.emplace_back(out_path(cfg, "temporal.json"), dump(t));
        }
        if (mode == "all") {
            line << "TC=" << num(yw.mean_tc()) << " TD=" << num(yw.mean_td()) << " TQ=" << num(yw.mean_tq()) << ' ';
        }
        line << "TTC=" << num(report.mean_ttc) << " TTS=" << num(report.mean_tts) << " TTQ=" << num(report.mean_ttq)
             << " DTQ=" << num(report.dtq);
    }
    if (csv) {
        files.emplace_back(out_path(cfg, "run_config.json"), dump(config));
    }
    write_outputs(files);
    out << line.str() << "\n";
    return kExitOk;
}

// ---- perturb ----

struct PerturbArgs {
    std::string kind;
    long long chosen_k = -1;
    long long target_k = -1;
    std::size_t level = 1;
    std::string output;
};

int cmd_perturb(const RunConfig& cfg, const PerturbArgs& args, std::ostream& out) {
    require_path(cfg.topics_path, "--topics-path");
    const auto kind = parse_perturbation_kind(args.kind);
    const auto topics = load_topics_file(cfg.topics_path, cfg.n_top);
    json provenance{{"kind", to_string(kind)}, {"seed", cfg.seed}};
    json result;
    switch (kind) {
        case PerturbationKind::shuffle: {
            auto shuffled = temporal_shuffle_traced(topics, cfg.seed);
            provenance["permutations"] = shuffled.permutations;
            result = topics_to_json(shuffled.topics);
            break;
        }
        case PerturbationKind::collapse: {
            const std::size_t k = args.chosen_k >= 0 ? static_cast<std::size_t>(args.chosen_k)
                                                      : choose_topic(topics, cfg.seed);
            provenance["chosen_k"] = k;
            result = topics_to_json(collapse_repeat(topics, k));
            break;
        }
        case PerturbationKind::intrude: {
            const std::size_t k = args.target_k >= 0 ? static_cast<std::size_t>(args.target_k)
                                                      : choose_topic(topics, cfg.seed);
            const auto r = intrude(topics, k, args.level, cfg.seed);
            provenance["target_k"] = k;
            provenance["level"] = args.level;
            provenance["timestamp"] = topics.timestamps()[r.timestamp_index];
            provenance["positions"] = r.positions;
            provenance["intruders"] = r.intruders;
            result = topics_to_json(r.topics);
            break;
        }
    }
    result["provenance"] = provenance;
    result["config"] = cfg.to_json();
    const auto path = args.output.empty() ? out_path(cfg, "perturbed_topics.json") : args.output;
    write_outputs({{path, dump(result)}});
    out << "wrote " << path << "\n";
    return kExitOk;
}

// ---- intrude ----

struct IntrudeArgs {
    long long target_k = -1;
    std::vector<std::size_t> levels;
    std::vector<std::uint64_t> seeds;
};

int cmd_intrude(const RunConfig& cfg, const IntrudeArgs& args, std::ostream& out, std::ostream& err) {
    require_path(cfg.topics_path, "--topics-path");
    const auto topics = load_topics_file(cfg.topics_path, cfg.n_top);
    const auto stats = obtain_stats(cfg);
    check_timestamps_known(topics, stats.timestamps());

    std::vector<std::size_t> levels = args.levels;
    if (levels.empty()) {
        levels.resize(std::min<std::size_t>(10, topics.n_top()));
        std::iota(levels.begin(), levels.end(), std::size_t{1});
    }
    std::vector<std::uint64_t> seeds = args.seeds;
    if (seeds.empty()) {
        for (std::uint64_t i = 0; i < 5; ++i) seeds.push_back(cfg.seed + i);
    }
    const std::size_t target = args.target_k >= 0 ? static_cast<std::size_t>(args.target_k)
                                                   : choose_topic(topics, cfg.seed);
    const auto rows = intrusion_sweep(stats, topics, target, levels, seeds, cfg.window_length, cfg.epsilon);

    // Plot data: per level mean and population stddev of TTQ across seeds.
    std::map<std::size_t, std::vector<double>> by_level;
    for (const auto& r : rows) by_level[r.level].push_back(r.ttq);
    std::ostringstream plot;
    plot << "level,mean_ttq,stddev_ttq\n";
    for (const auto& [level, v] : by_level) {
        const double m = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
        double ss = 0.0;
        for (double x : v) ss += (x - m) * (x - m);
        plot << level << ',' << format_double(m) << ',' << format_double(std::sqrt(ss / static_cast<double>(v.size())))
             << '\n';
    }

    // Correlations use the requested levels only, not the level-0 reference rows.
    std::ostringstream corr;
    corr << "scope,measure,rho,n,p_value\n";
    std::size_t refused = 0;
    double pooled_ttq_rho = std::nan("");
    auto correlate = [&](const std::string& scope, const std::vector<const SweepRow*>& subset) {
        for (const char* measure : {"ttc", "tts", "ttq"}) {
            std::vector<double> lv, mv;
            for (const auto* r : subset) {
                lv.push_back(static_cast<double>(r->level));
                const std::string m = measure;
                mv.push_back(m == "ttc" ? r->ttc : m == "tts" ? r->tts : r->ttq);
            }
            try {
                const double rho = spearman(lv, mv);
                corr << scope << ',' << measure << ',' << format_double(rho) << ',' << lv.size() << ','
                     << format_double(spearman_pvalue(rho, lv.size())) << '\n';
                if (scope == "pooled" && std::string(measure) == "ttq") pooled_ttq_rho = rho;
            } catch (const ValidationError& e) {
                ++refused;
                err << "correlation refused for " << scope << " " << measure << ": " << e.what() << "\n";
            }
        }
    };
    std::vector<const SweepRow*> pooled;
    for (auto seed : seeds) {
        std::vector<const SweepRow*> subset;
        for (const auto& r : rows) {
            if (r.seed == seed && r.level != 0) subset.push_back(&r);
        }
        pooled.insert(pooled.end(), subset.begin(), subset.end());
        correlate("seed:" + std::to_string(seed), subset);
    }
    correlate("pooled", pooled);
    double seed_mean_rho = std::nan("");
    try {
        seed_mean_rho = level_ttq_correlation(rows).seed_mean;
        corr << "seed_mean,ttq," << format_double(seed_mean_rho) << ',' << seeds.size() << ",\n";
    } catch (const ValidationError&) {
        // already reported per seed above
    }

    json config = cfg.to_json();
    config["target_k"] = target;
    config["levels"] = levels;
    config["seeds"] = seeds;
    write_outputs({{out_path(cfg, "sweep.csv"), sweep_csv(rows)},
                   {out_path(cfg, "intrusion_plot.csv"), plot.str()},
                   {out_path(cfg, "intrusion_correlation.csv"), corr.str()},
                   {out_path(cfg, "run_config.json"), dump(config)}});
    out << "target_k=" << target << " rows=" << rows.size();
    if (!std::isnan(pooled_ttq_rho)) {
        out << " pooled_rho_ttq=" << format_double(pooled_ttq_rho);
    } else {
        out << " pooled_rho_ttq=refused";
    }
    if (!std::isnan(seed_mean_rho)) out << " seed_mean_rho_ttq=" << format_double(seed_mean_rho);
    out << "\n";
    return kExitOk;
}

// ---- human ----

struct HumanArgs {
    std::string ratings_path;
    std::string measures_path;
    std::string control_id;
    int control_threshold = 1;
    double duration_factor = 3.0;
};

int cmd_human(const RunConfig& cfg, const HumanArgs& args, std::ostream& out) {
    require_path(args.ratings_path, "--ratings-path");
    require_path(args.measures_path, "--measures-path");
    const auto ratings = load_ratings_file(args.ratings_path);
    std::istringstream measures_in(read_file(args.measures_path));
    const auto measures = read_topic_measures_csv(measures_in);
    FilterRules rules;
    rules.control_topic_id = args.control_id;
    rules.control_threshold = args.control_threshold;
    rules.duration_factor = args.duration_factor;
    const auto filtered = filter_respondents(ratings, rules);
    const auto aggregates = aggregate_ratings(filtered.valid);
    const auto results = correlate_measures(aggregates, measures);

    std::ostringstream means;
    means << "topic_id,relatedness,smoothness,familiarity,respondents\n";
    for (const auto& a : aggregates) {
        means << a.topic_id << ',' << format_double(a.relatedness) << ',' << format_double(a.smoothness) << ','
              << format_double(a.familiarity) << ',' << a.respondents << '\n';
    }
    json config = cfg.to_json();
    config["ratings_path"] = args.ratings_path;
    config["measures_path"] = args.measures_path;
    config["control_id"] = args.control_id;
    config["control_threshold"] = args.control_threshold;
    config["duration_factor"] = args.duration_factor;
    write_outputs({{out_path(cfg, "exclusions.csv"), exclusions_csv(filtered.excluded)},
                   {out_path(cfg, "rating_means.csv"), means.str()},
                   {out_path(cfg, "correlations.csv"), correlations_csv(results)},
                   {out_path(cfg, "run_config.json"), dump(config)}});
    out << "raters kept=" << filtered.valid.raters().size() << " excluded=" << filtered.excluded.size() << "\n";
    for (const auto& r : results) {
        out << r.pairing << " rho=" << format_double(r.rho) << " p=" << format_double(r.p_value) << "\n";
    }
    return kExitOk;
}

// ---- fixture ----

int cmd_fixture(const RunConfig& cfg, FixtureSpec spec, std::ostream& out) {
    spec.n_top = cfg.n_top;
    spec.seed = cfg.seed;
    const auto fx = generate_fixture(spec);
    std::ostringstream corpus;
    write_corpus(fx.corpus, corpus);
    const auto corpus_path = cfg.corpus_path.empty() ? out_path(cfg, "corpus.jsonl") : cfg.corpus_path;
    const auto topics_path = cfg.topics_path.empty() ? out_path(cfg, "topics.json") : cfg.topics_path;
    write_outputs({{corpus_path, corpus.str()}, {topics_path, dump(topics_to_json(fx.topics))}});
    out << "docs=" << fx.corpus.size() << " K=" << fx.topics.n_topics() << " T=" << fx.topics.n_timestamps()
        << " N=" << fx.topics.n_top() << "\n";
    return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Year-wise and temporal quality measures for dynamic topic models", "dtq"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::vector<std::unique_ptr<ConfigBinder>> binders;
    auto sub = [&](const char* name, const char* help) {
        auto* s = app.add_subcommand(name, help);
        binders.push_back(std::make_unique<ConfigBinder>(s, cfg));
        return std::make_pair(s, binders.back().get());
    };

    auto [cooccur, cooccur_b] = sub("cooccur", "build a co-occurrence stats cache from a corpus");

    auto [eval, eval_b] = sub("eval", "compute year-wise and/or temporal measures");
    std::string mode = "all";
    eval_b->bind("mode", eval->add_option("--mode", mode, "yearwise, temporal or all")
                             ->check(CLI::IsMember({"yearwise", "temporal", "all"})));

    auto [perturb, perturb_b] = sub("perturb", "shuffle, collapse or intrude a topic set");
    PerturbArgs pargs;
    perturb_b->bind("kind", perturb->add_option("--kind", pargs.kind, "shuffle, collapse or intrude")
                                ->check(CLI::IsMember({"shuffle", "collapse", "intrude"})));
    perturb_b->bind("chosen_k", perturb->add_option("--chosen-k", pargs.chosen_k, "topic to repeat (default: seeded)"));
    perturb_b->bind("target_k", perturb->add_option("--target-k", pargs.target_k, "topic to intrude (default: seeded)"));
    perturb_b->bind("level", perturb->add_option("--level", pargs.level, "number of intruder words"));
    perturb_b->bind("output", perturb->add_option("--output", pargs.output, "output topics file"));

    auto [intr, intr_b] = sub("intrude", "word-intrusion sweep with rank correlations");
    IntrudeArgs iargs;
    intr_b->bind("target_k", intr->add_option("--target-k", iargs.target_k, "topic to intrude (default: seeded)"));
    intr_b->bind("levels", intr->add_option("--levels", iargs.levels, "intrusion levels (default 1..10)"));
    intr_b->bind("seeds", intr->add_option("--seeds", iargs.seeds, "sweep seeds (default seed..seed+4)"));

    auto [human, human_b] = sub("human", "filter and aggregate ratings, correlate with measures");
    HumanArgs hargs;
    human_b->bind("ratings_path", human->add_option("--ratings-path", hargs.ratings_path, "ratings CSV"));
    human_b->bind("measures_path",
                  human->add_option("--measures-path", hargs.measures_path, "per-topic measures CSV"));
    human_b->bind("control_id", human->add_option("--control-id", hargs.control_id, "control topic id"));
    human_b->bind("control_threshold",
                  human->add_option("--control-threshold", hargs.control_threshold, "max passing control rating"));
    human_b->bind("duration_factor",
                  human->add_option("--duration-factor", hargs.duration_factor, "duration band factor k"));

    auto [fixture, fixture_b] = sub("fixture", "generate the synthetic drifting-chain corpus and topics");
    FixtureSpec fspec;
    fixture_b->bind("n_topics", fixture->add_option("--n-topics", fspec.n_topics)->capture_default_str());
    fixture_b->bind("n_timestamps", fixture->add_option("--n-timestamps", fspec.n_timestamps)->capture_default_str());
    fixture_b->bind("docs_per_slice",
                    fixture->add_option("--docs-per-slice", fspec.docs_per_slice)->capture_default_str());
    fixture_b->bind("doc_length", fixture->add_option("--doc-length", fspec.doc_length)->capture_default_str());
    fixture_b->bind("noise", fixture->add_option("--noise", fspec.noise)->capture_default_str());
    fixture_b->bind("mixing", fixture->add_option("--mixing", fspec.mixing)->capture_default_str());

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitValidation;
    }

    try {
        for (auto& b : binders) {
            b->apply_config_file();
        }
        cfg.validate();
        if (*cooccur) return cmd_cooccur(cfg, out);
        if (*eval) return cmd_eval(cfg, mode, out);
        if (*perturb) {
            if (pargs.kind.empty()) throw ValidationError("missing required --kind");
            return cmd_perturb(cfg, pargs, out);
        }
        if (*intr) return cmd_intrude(cfg, iargs, out, err);
        if (*human) return cmd_human(cfg, hargs, out);
        if (*fixture) return cmd_fixture(cfg, fspec, out);
    } catch (const IoError& e) {
        err << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << "\n";
        return kExitValidation;
    }
    return kExitValidation;
}

}  // namespace dtq
