#ifndef DTQ_REPORT_IO_HPP
#define DTQ_REPORT_IO_HPP

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "dtq/perturbation.hpp"
#include "dtq/static_measures.hpp"
#include "dtq/stats_human.hpp"
#include "dtq/temporal_measures.hpp"

namespace dtq {

nlohmann::json to_json(const YearwiseReport& report);
nlohmann::json to_json(const TemporalReport& report, const DynamicTopics& topics);

// timestamp,tc,td,tq
std::string yearwise_csv(const YearwiseReport& report);
// topic,t,ttc,tts  (t is the timestamp at the start of the window)
std::string temporal_series_csv(const TemporalReport& report, const DynamicTopics& topics);
// topic,ttc,tts,ttq,btc,bts  (ttc and tts are means over the topic's windows)
std::string temporal_topics_csv(const TemporalReport& report, const DynamicTopics& topics);
// mean_ttc,mean_tts,mean_ttq,dtq
std::string temporal_summary_csv(const TemporalReport& report);

// seed,level,ttc,tts,ttq
std::string sweep_csv(const std::vector<SweepRow>& rows);
// pairing,rho,n,p_value
std::string correlations_csv(const std::vector<CorrelationResult>& results);
// rater_id,reason
std::string exclusions_csv(const std::vector<Exclusion>& excluded);

// Reads the per-topic CSV written by temporal_topics_csv, keyed by topic id.
std::map<std::string, TopicMeasureValues> read_topic_measures_csv(std::istream& in);

}  // namespace dtq

#endif
