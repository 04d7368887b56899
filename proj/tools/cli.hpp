#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "pai/simulation.hpp"

namespace pai::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

struct GlobalOptions {
    bool mock = false;
    std::string mock_script;
    std::string backend_url = "https://api.openai.com/v1";
    std::string api_key_env = "OPENAI_API_KEY";
    std::string model = "gpt-4";
    std::string config;
    int parallelism = 8;
    double requests_per_second = 0.0;
    std::string run_log;
    std::uint64_t seed = 0;
    bool verbose = false;
};

struct Command {
    std::string name;  // subcommand
    GlobalOptions global;
    SimulationParams params;

    std::string dataset = "dataset";
    bool force = false;

    // generate-profiles / pipeline
    int profiles = 40;
    int batch_size = 50;
    bool no_style = false;

    // simulate / pipeline
    std::vector<std::string> attributes;
    int threads = 1;
    bool inline_tagging = true;

    // serve-review
    std::string host = "127.0.0.1";
    int port = 8080;
    std::string token_env;
    std::string ui_dir;
    std::string cors_origin = "http://localhost:5173";

    // aggregate
    std::string source = "human";
    bool sanitize = true;

    // evaluate
    bool anonymize = false;
    std::string anonymizer_url;
    bool judge = false;
    bool extraction_fallback = true;
    std::string format = "text";
    std::string out;

    // stats
    std::string table = "thread";
    std::string level = "profile";
    std::string judgments;

    // import
    std::string from;
    std::string mapping;
};

struct ParseOutcome {
    std::optional<Command> command;
    int exit_code = kExitOk;  // meaningful when no command was produced
    std::string message;      // help or usage text
};

/// argv without the program name. Flags override config-file values.
ParseOutcome parse_args(const std::vector<std::string>& args);

/// Runs one command; module errors print "error: <Name>: <message>" to
/// `err` and return kExitFailure.
int execute(const Command& cmd, std::ostream& out, std::ostream& err);

/// parse_args + execute with the process streams.
int run(int argc, char** argv);

}  // namespace pai::cli
