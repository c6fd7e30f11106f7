#ifndef DTQ_CLI_HPP
#define DTQ_CLI_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace dtq {

enum ExitStatus : int { kExitOk = 0, kExitValidation = 1, kExitIo = 2 };

struct RunConfig {
    std::string corpus_path;
    std::string topics_path;
    std::string stats_cache_path;
    std::size_t window_size = 10;
    double epsilon = 1e-12;
    std::size_t window_length = 2;
    std::size_t n_top = 10;
    double min_df = 0.0;
    double max_df = 1.0;
    std::uint64_t seed = 1;
    std::string output_dir = ".";
    std::string output_format = "json";
    unsigned threads = 1;

    // Throws ValidationError for out-of-range values.
    void validate() const;
    nlohmann::json to_json() const;
};

// Entry point shared by the dtq binary and the tests. args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dtq

#endif
