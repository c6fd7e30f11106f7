#include "dtq/report_io.hpp"

#include <istream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "dtq/errors.hpp"
#include "dtq/io.hpp"

namespace dtq {

using nlohmann::json;

json to_json(const YearwiseReport& report) {
    json years = json::array();
    for (const auto& y : report.per_year) {
        years.push_back({{"timestamp", y.timestamp},
                         {"tc", y.tc},
                         {"td", y.td},
                         {"tq", y.tq},
                         {"td_unique", y.td_unique},
                         {"coherence", y.coherence},
                         {"diversity", y.diversity},
                         {"coherence_warnings", y.coherence_warnings}});
    }
    return {{"epsilon", report.epsilon},
            {"n_top", report.n_top},
            {"per_year", std::move(years)},
            {"mean", {{"tc", report.mean_tc()}, {"td", report.mean_td()}, {"tq", report.mean_tq()}}}};
}

json to_json(const TemporalReport& report, const DynamicTopics& topics) {
    json per_topic = json::array();
    for (std::size_t k = 0; k < report.topics.size(); ++k) {
        const auto& t = report.topics[k];
        per_topic.push_back({{"id", topics.ids()[k]},
                             {"ttc", t.ttc},
                             {"tts", t.tts},
                             {"ttq", t.ttq},
                             {"btc", t.btc},
                             {"bts", t.bts},
                             {"ttc_warnings", t.ttc_warnings}});
    }
    return {{"window_length", report.window_length},
            {"topics", std::move(per_topic)},
            {"mean", {{"ttc", report.mean_ttc}, {"tts", report.mean_tts}, {"ttq", report.mean_ttq}}},
            {"dtq", report.dtq}};
}

std::string yearwise_csv(const YearwiseReport& report) {
    std::ostringstream out;
    out << "timestamp,tc,td,tq\n";
    for (const auto& y : report.per_year) {
        out << y.timestamp << ',' << format_double(y.tc) << ',' << format_double(y.td) << ','
            << format_double(y.tq) << '\n';
    }
    return out.str();
}

std::string temporal_series_csv(const TemporalReport& report, const DynamicTopics& topics) {
    std::ostringstream out;
    out << "topic,t,ttc,tts\n";
    for (std::size_t k = 0; k < report.topics.size(); ++k) {
        const auto& t = report.topics[k];
        for (std::size_t w = 0; w < t.ttc.size(); ++w) {
            out << topics.ids()[k] << ',' << topics.timestamps()[w] << ',' << format_double(t.ttc[w]) << ','
                << format_double(t.tts[w]) << '\n';
        }
    }
    return out.str();
}

std::string temporal_topics_csv(const TemporalReport& report, const DynamicTopics& topics) {
    std::ostringstream out;
    out << "topic,ttc,tts,ttq,btc,bts\n";
    for (std::size_t k = 0; k < report.topics.size(); ++k) {
        const auto& t = report.topics[k];
        out << topics.ids()[k] << ',' << format_double(t.mean_ttc()) << ',' << format_double(t.mean_tts()) << ','
            << format_double(t.ttq) << ',' << format_double(t.btc) << ',' << format_double(t.bts) << '\n';
    }
    return out.str();
}

std::string temporal_summary_csv(const TemporalReport& report) {
    std::ostringstream out;
    out << "mean_ttc,mean_tts,mean_ttq,dtq\n"
        << format_double(report.mean_ttc) << ',' << format_double(report.mean_tts) << ','
        << format_double(report.mean_ttq) << ',' << format_double(report.dtq) << '\n';
    return out.str();
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::ostringstream out;
    out << "seed,level,ttc,tts,ttq\n";
    for (const auto& r : rows) {
        out << r.seed << ',' << r.level << ',' << format_double(r.ttc) << ',' << format_double(r.tts) << ','
            << format_double(r.ttq) << '\n';
    }
    return out.str();
}

std::string correlations_csv(const std::vector<CorrelationResult>& results) {
    std::ostringstream out;
    out << "pairing,rho,n,p_value\n";
    for (const auto& r : results) {
        out << r.pairing << ',' << format_double(r.rho) << ',' << r.n << ',' << format_double(r.p_value) << '\n';
    }
    return out.str();
}

std::string exclusions_csv(const std::vector<Exclusion>& excluded) {
    std::ostringstream out;
    out << "rater_id,reason\n";
    for (const auto& e : excluded) {
        out << e.rater_id << ',' << e.reason << '\n';
    }
    return out.str();
}

std::map<std::string, TopicMeasureValues> read_topic_measures_csv(std::istream& in) {
    std::string line;
    std::size_t line_no = 1;
    if (!std::getline(in, line)) {
        throw ValidationError("measures file is empty");
    }
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "topic,ttc,tts,ttq,btc,bts") {
        throw ParseError(line_no, "unexpected measures header '" + line + "'");
    }
    std::map<std::string, TopicMeasureValues> out;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::istringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) f.push_back(cell);
        if (f.size() != 6) {
            throw ParseError(line_no, "expected 6 fields");
        }
        try {
            TopicMeasureValues v;
            v.ttc = std::stod(f[1]);
            v.tts = std::stod(f[2]);
            v.btc = std::stod(f[4]);
            v.bts = std::stod(f[5]);
            if (!out.emplace(f[0], v).second) {
                throw ParseError(line_no, "duplicate topic " + f[0]);
            }
        } catch (const std::invalid_argument&) {
            throw ParseError(line_no, "non-numeric measure value");
        } catch (const std::out_of_range&) {
            throw ParseError(line_no, "measure value out of range");
        }
    }
    return out;
}

}  // namespace dtq
