#include "cli.hpp"

#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>
#include <spdlog/fmt/fmt.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "pai/analytics.hpp"
#include "pai/anonymize.hpp"
#include "pai/datastore.hpp"
#include "pai/errors.hpp"
#include "pai/evaluation.hpp"
#include "pai/gateway.hpp"
#include "pai/http_backend.hpp"
#include "pai/importer.hpp"
#include "pai/matching.hpp"
#include "pai/mock_backend.hpp"
#include "pai/profiles.hpp"
#include "pai/review_server.hpp"
#include "pai/serialization.hpp"
#include "pai/simulation.hpp"
#include "pai/tagging.hpp"
#include "pai/text.hpp"

namespace pai::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void add_param_flags(CLI::App* app, SimulationParams& flagged, std::vector<std::function<void(SimulationParams&)>>& apply) {
    auto bind = [&](const char* name, auto member, const char* help) {
        auto* opt = app->add_option(name, flagged.*member, help);
        apply.push_back([opt, member, &flagged](SimulationParams& p) {
            if (opt->count()) p.*member = flagged.*member;
        });
    };
    bind("--rounds", &SimulationParams::no_rounds, "Conversation rounds per thread");
    bind("--actions", &SimulationParams::no_actions, "Comment attempts per agent and round");
    bind("--max-comments", &SimulationParams::no_max_comments, "Maximum replies per comment");
    bind("--max-depth", &SimulationParams::max_depth, "Maximum thread depth");
    bind("--profiles-per-thread", &SimulationParams::no_profiles, "Agents per thread after the interest filter");
    bind("--p-critic", &SimulationParams::p_critic, "Probability of a critical persona");
    bind("--p-short", &SimulationParams::p_short, "Probability of a length constraint");
    bind("--min-len", &SimulationParams::min_comment_len, "Minimum words of a constrained comment");
    bind("--max-len", &SimulationParams::max_comment_len, "Maximum words of a constrained comment");
    bind("--sampled-comments", &SimulationParams::no_sampled_comments, "Top-k reply candidates");
    bind("--comment-prob", &SimulationParams::default_comment_prob, "Round-1 comment probability");
    bind("--comment-prob-decay", &SimulationParams::comment_prob_decay, "Per-round probability decay");
    bind("--comment-prob-floor", &SimulationParams::comment_prob_floor, "Probability floor");
}

std::unique_ptr<Gateway> make_gateway(const Command& cmd) {
    std::shared_ptr<ChatBackend> backend;
    if (cmd.global.mock) {
        backend = std::make_shared<MockBackend>(cmd.global.mock_script.empty() ? MockScript{}
                                                                               : MockScript::load(cmd.global.mock_script));
    } else {
        HttpBackendConfig config;
        config.base_url = cmd.global.backend_url;
        config.api_key_env = cmd.global.api_key_env;
        backend = std::make_shared<HttpChatBackend>(config);
    }
    Gateway::Options options;
    options.max_in_flight = std::max(1, cmd.global.parallelism);
    options.model_id = cmd.global.mock ? "mock" : cmd.global.model;
    if (cmd.global.requests_per_second > 0) options.requests_per_second = cmd.global.requests_per_second;
    if (!cmd.global.run_log.empty()) options.run_log = std::make_shared<RunLog>(cmd.global.run_log);
    return std::make_unique<Gateway>(backend, options);
}

std::vector<Attribute> resolve_attributes(const std::vector<std::string>& names) {
    if (names.empty()) return {kAllAttributes.begin(), kAllAttributes.end()};
    std::vector<Attribute> out;
    for (const auto& n : names) {
        auto a = parse_attribute(n);
        if (!a) throw DomainError("unknown attribute '" + n + "'");
        out.push_back(*a);
    }
    return out;
}

void ensure_fresh(const fs::path& dir, bool force) {
    if (!force && fs::exists(dir / kManifestFile)) {
        throw PreconditionError(dir.string() + " already holds a dataset (use --force to overwrite)");
    }
}

DatasetBundle generate(const Command& cmd, Gateway& gateway) {
    ProfileBatchSpec spec;
    spec.count = cmd.profiles;
    spec.seed = cmd.params.seed;
    spec.batch_size = cmd.batch_size;
    spec.few_shot_examples = default_profile_examples();
    DatasetBundle bundle;
    bundle.profiles = generate_profiles(spec, gateway);
    if (!cmd.no_style) bundle.profiles = enrich_all(std::move(bundle.profiles), gateway, mix_seed(cmd.params.seed, 7));
    bundle.manifest.seed = cmd.params.seed;
    bundle.manifest.generator_model = gateway.options().model_id;
    spdlog::info("generated {} profiles", bundle.profiles.size());
    return bundle;
}

void simulate(DatasetBundle& bundle, const Command& cmd, Gateway& gateway) {
    if (bundle.profiles.empty()) throw PreconditionError("dataset has no profiles");
    if (auto errors = validate_params(cmd.params); !errors.empty()) throw DomainError(errors.front());
    const auto attributes = resolve_attributes(cmd.attributes);
    const CommentOracle oracle = cmd.inline_tagging ? model_oracle(gateway) : CommentOracle{};
    const std::size_t offset = bundle.threads.size();
    for (int i = 0; i < cmd.threads; ++i) {
        const auto id = fmt::format("t{:03}", offset + static_cast<std::size_t>(i));
        const auto target = attributes[static_cast<std::size_t>(i) % attributes.size()];
        SimulationStats stats;
        bundle.threads.push_back(run_thread(id, target, bundle.profiles, cmd.params, oracle, gateway,
                                            default_topic_examples(), &stats));
        spdlog::info("thread {} ({}): {} comments, {} skipped turns, {} length violations", id, to_string(target),
                     stats.comments, stats.skipped_turns, stats.length_violations);
    }
}

std::vector<ProfileLabelSet> aggregate(const DatasetBundle& bundle, const Command& cmd, Gateway* gateway) {
    const auto source = cmd.source == "model" ? LabelSource::model : LabelSource::human_verified;
    std::optional<EquivalenceJudge> judge;
    if (cmd.judge && gateway) judge = model_judge(*gateway, cmd.params.seed);
    const EquivalenceFn equivalent = [&](const std::string& truth, const std::string& guess, Attribute a) {
        return match_values(truth, guess, a, judge ? &*judge : nullptr).kind == VerdictKind::correct;
    };
    return aggregate_dataset(current_threads(bundle), bundle.profiles, source, cmd.sanitize ? &equivalent : nullptr);
}

InferenceReport evaluate(const DatasetBundle& bundle, const Command& cmd, Gateway& gateway) {
    if (bundle.labels.empty()) throw PreconditionError("dataset has no profile labels (run aggregate first)");
    const auto dataset = build_eval_profiles(current_threads(bundle), bundle.labels);
    std::optional<EquivalenceJudge> judge;
    if (cmd.judge) judge = model_judge(gateway, cmd.params.seed);
    std::unique_ptr<Anonymizer> anonymizer;
    if (!cmd.anonymizer_url.empty()) {
        ServiceAnonymizer::Config config;
        config.endpoint = cmd.anonymizer_url;
        anonymizer = std::make_unique<ServiceAnonymizer>(config);
    }
    EvalOptions options;
    options.judge = judge ? &*judge : nullptr;
    options.anonymize = cmd.anonymize;
    options.anonymizer = anonymizer.get();
    options.extraction_fallback = cmd.extraction_fallback;
    options.seed = cmd.params.seed;
    return evaluate_dataset(dataset, gateway, options);
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
    if (path.empty()) {
        out << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw PreconditionError("cannot write " + path);
    f << text;
}

json summary_json(const Summary& s) { return {{"mean", s.mean}, {"std", s.std}, {"median", s.median}, {"n", s.n}}; }

json hardness_json(const HardnessTable& t) {
    json out = json::object();
    for (const auto& [attr, row] : t) out[std::string(to_string(attr))] = row;
    return out;
}

std::vector<JudgmentRecord> load_judgments(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw PreconditionError("cannot read judgments " + path);
    std::vector<JudgmentRecord> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        out.push_back(json::parse(line).get<JudgmentRecord>());
    }
    return out;
}

int stats(const Command& cmd, std::ostream& out) {
    const bool csv = cmd.format == "csv", as_json = cmd.format == "json";
    if (cmd.table == "humanstudy") {
        if (cmd.judgments.empty()) throw PreconditionError("--judgments is required for the human-study table");
        const auto m = human_study_metrics(load_judgments(cmd.judgments));
        for (const auto& w : m.warnings) spdlog::warn("{}", w);
        if (as_json) {
            out << json{{"tn", m.confusion.tn}, {"fn", m.confusion.fn}, {"fp", m.confusion.fp},
                        {"tp", m.confusion.tp}, {"accuracy", m.accuracy}, {"fpr", m.fpr},
                        {"fnr", m.fnr}, {"pairwise_agreement", m.pairwise_agreement},
                        {"per_rater_accuracy", m.per_rater_accuracy}}
                       .dump(2)
                << "\n";
        } else {
            out << human_study_text(m);
        }
        return kExitOk;
    }
    const auto bundle = load_bundle(cmd.dataset);
    if (cmd.table == "thread") {
        std::vector<std::string> names;
        for (const auto& p : bundle.profiles) names.push_back(p.username);
        const auto s = thread_stats(bundle.threads, &names);
        if (as_json) {
            out << json{{"comment_length", summary_json(s.comment_length)},
                        {"comments_per_thread", summary_json(s.comments_per_thread)},
                        {"profiles_per_thread", summary_json(s.profiles_per_thread)},
                        {"comments_per_profile", summary_json(s.comments_per_profile)},
                        {"threads", bundle.threads.size()},
                        {"profiles", bundle.profiles.size()}}
                       .dump(2)
                << "\n";
        } else {
            out << (csv ? thread_stats_csv(s) : thread_stats_text(s));
        }
    } else if (cmd.table == "hardness") {
        const auto t = cmd.level == "comment" ? hardness_distribution(collect_comment_tags(current_threads(bundle)))
                                              : hardness_distribution(bundle.labels);
        out << (as_json ? hardness_json(t).dump(2) + "\n" : csv ? hardness_table_csv(t) : hardness_table_text(t));
    } else if (cmd.table == "agreement") {
        const auto m = tag_agreement(collect_comment_tags(current_threads(bundle)));
        if (as_json) {
            out << json{{"tn", m.tn}, {"fn", m.fn}, {"fp", m.fp}, {"tp", m.tp}, {"fnr", m.fnr()}, {"fpr", m.fpr()}}
                       .dump(2)
                << "\n";
        } else {
            out << agreement_text(m);
        }
    } else if (cmd.table == "overlap") {
        const auto h = overlap_histogram(bundle.profiles);
        out << "overlap  per-profile-max  pairwise\n";
        for (std::size_t k = 0; k < h.pairwise.size(); ++k) {
            out << fmt::format("{:>7}{:>17.4f}{:>10.4f}\n", k, h.per_profile_max[k], h.pairwise[k]);
        }
    } else if (cmd.table == "topics") {
        auto gateway = make_gateway(cmd);
        const auto t = classify_thread_topics(bundle.threads, *gateway, cmd.params.seed);
        for (const auto& [id, subs] : t.per_thread) out << id << ": " << text::join(subs, ", ") << "\n";
        out << "unique subreddits: " << t.unique_subreddits << "\n";
    } else {
        throw DomainError("unknown table '" + cmd.table + "'");
    }
    return kExitOk;
}

int dispatch(const Command& cmd, std::ostream& out) {
    if (cmd.name == "generate-profiles") {
        ensure_fresh(cmd.dataset, cmd.force);
        auto gateway = make_gateway(cmd);
        save_bundle(generate(cmd, *gateway), cmd.dataset);
        return kExitOk;
    }
    if (cmd.name == "simulate") {
        auto bundle = load_bundle(cmd.dataset);
        auto gateway = make_gateway(cmd);
        simulate(bundle, cmd, *gateway);
        save_bundle(bundle, cmd.dataset);
        return kExitOk;
    }
    if (cmd.name == "tag") {
        auto bundle = load_bundle(cmd.dataset);
        auto gateway = make_gateway(cmd);
        const int failed = tag_threads(bundle.threads, *gateway, cmd.params.seed);
        save_bundle(bundle, cmd.dataset);
        if (failed) spdlog::warn("{} comments could not be tagged", failed);
        return kExitOk;
    }
    if (cmd.name == "serve-review") {
        auto store = std::make_shared<ReviewStore>(fs::path(cmd.dataset));
        ReviewServerOptions options;
        options.cors_origin = cmd.cors_origin;
        if (!cmd.token_env.empty()) {
            const char* token = std::getenv(cmd.token_env.c_str());
            if (!token || !*token) throw PreconditionError("environment variable " + cmd.token_env + " is empty");
            options.bearer_token = token;
        }
        if (!cmd.ui_dir.empty()) options.static_dir = cmd.ui_dir;
        ReviewServer server(store, options);
        const int port = server.bind(cmd.host, cmd.port);
        if (port < 0) throw PreconditionError(fmt::format("cannot bind {}:{}", cmd.host, cmd.port));
        spdlog::info("review service on http://{}:{}", cmd.host, port);
        return server.listen() ? kExitOk : kExitFailure;
    }
    if (cmd.name == "aggregate") {
        auto bundle = load_bundle(cmd.dataset);
        std::unique_ptr<Gateway> gateway;
        if (cmd.judge) gateway = make_gateway(cmd);
        bundle.labels = aggregate(bundle, cmd, gateway.get());
        save_bundle(bundle, cmd.dataset);
        std::size_t n = 0;
        for (const auto& s : bundle.labels) n += s.labels.size();
        out << "profiles with labels: " << bundle.labels.size() << "\nprofile-level labels: " << n << "\n";
        return kExitOk;
    }
    if (cmd.name == "evaluate") {
        const auto bundle = load_bundle(cmd.dataset);
        auto gateway = make_gateway(cmd);
        const auto report = evaluate(bundle, cmd, *gateway);
        emit(cmd.format == "json" ? report_to_json(report).dump(2) + "\n" : report_to_text(report), cmd.out, out);
        return kExitOk;
    }
    if (cmd.name == "stats") return stats(cmd, out);
    if (cmd.name == "import") {
        ensure_fresh(cmd.dataset, cmd.force);
        ImportReport report;
        const auto mapping = cmd.mapping.empty() ? ImportMapping{} : ImportMapping::load(cmd.mapping);
        const auto bundle = import_published(cmd.from, mapping, &report);
        save_bundle(bundle, cmd.dataset);
        out << "comments: " << report.comments << "\nthreads: " << report.threads << "\nprofiles: " << report.profiles
            << "\nmodel tags: " << report.model_tags << "\nhuman-verified comment labels: " << report.human_labels
            << "\n";
        return kExitOk;
    }
    if (cmd.name == "validate") {
        const auto bundle = load_bundle(cmd.dataset);
        const auto threads = current_threads(bundle);
        int problems = 0;
        for (const auto& p : bundle.profiles) {
            for (const auto& e : validate_profile(p)) {
                out << "profile " << p.username << ": " << e << "\n";
                ++problems;
            }
        }
        std::size_t comments = 0;
        for (const auto& t : threads) comments += t.size() - 1;
        out << "profiles: " << bundle.profiles.size() << "\nthreads: " << threads.size() << "\ncomments: " << comments
            << "\ndecisions: " << bundle.decisions.size() << "\nlabelled profiles: " << bundle.labels.size() << "\n";
        if (problems) throw IntegrityError(std::to_string(problems) + " invalid profiles");
        out << "ok\n";
        return kExitOk;
    }
    if (cmd.name == "pipeline") {
        ensure_fresh(cmd.dataset, cmd.force);
        auto gateway = make_gateway(cmd);
        auto bundle = generate(cmd, *gateway);
        simulate(bundle, cmd, *gateway);
        if (!cmd.inline_tagging) tag_threads(bundle.threads, *gateway, cmd.params.seed);
        bundle.labels = aggregate(bundle, cmd, gateway.get());
        save_bundle(bundle, cmd.dataset);
        if (!bundle.labels.empty()) {
            const auto report = evaluate(bundle, cmd, *gateway);
            emit(report_to_json(report).dump(2) + "\n", (fs::path(cmd.dataset) / "eval_report.json").string(), out);
            out << report_to_text(report);
        }
        return kExitOk;
    }
    throw DomainError("unknown command " + cmd.name);
}

}  // namespace

ParseOutcome parse_args(const std::vector<std::string>& args) {
    CLI::App app{"Synthetic personal-attribute-inference dataset toolkit", "paibench"};
    app.set_version_flag("--version", "paibench 0.3.0");
    Command cmd;
    SimulationParams flagged;
    std::vector<std::function<void(SimulationParams&)>> apply;

    auto& g = cmd.global;
    app.add_flag("--mock", g.mock, "Use the deterministic offline backend");
    app.add_option("--mock-script", g.mock_script, "JSON file of canned mock responses")->check(CLI::ExistingFile);
    app.add_option("--backend-url", g.backend_url, "OpenAI-compatible API base URL");
    app.add_option("--api-key-env", g.api_key_env, "Environment variable holding the API key");
    app.add_option("--model", g.model, "Model identifier sent to the backend");
    app.add_option("--config", g.config, "JSON file with simulation parameters")->check(CLI::ExistingFile);
    app.add_option("--parallelism", g.parallelism, "Maximum concurrent backend requests")->check(CLI::Range(1, 256));
    app.add_option("--rps", g.requests_per_second, "Request rate limit (0 = none)")->check(CLI::NonNegativeNumber);
    app.add_option("--run-log", g.run_log, "Append every backend exchange to this JSONL file");
    auto* seed_opt = app.add_option("--seed", g.seed, "Master random seed");
    app.add_flag("-v,--verbose", g.verbose, "Debug logging");
    app.require_subcommand(1);

    auto dataset = [&](CLI::App* sub) { sub->add_option("--dataset,-d", cmd.dataset, "Dataset directory"); };

    auto* gen = app.add_subcommand("generate-profiles", "Generate synthetic profiles with writing styles");
    dataset(gen);
    gen->add_option("--count,-n", cmd.profiles, "Number of profiles")->check(CLI::PositiveNumber);
    gen->add_option("--batch-size", cmd.batch_size, "Profiles requested per call")->check(CLI::PositiveNumber);
    gen->add_flag("--no-style", cmd.no_style, "Skip writing-style enrichment");
    gen->add_flag("--force", cmd.force, "Overwrite an existing dataset");

    auto* sim = app.add_subcommand("simulate", "Simulate comment threads");
    dataset(sim);
    sim->add_option("--attribute,-a", cmd.attributes, "Target attribute(s); threads cycle through them");
    auto* sim_threads = sim->add_option("--threads,-t", cmd.threads, "Number of threads")->check(CLI::PositiveNumber);
    sim->add_flag("!--no-inline-tagging", cmd.inline_tagging, "Leave comments untagged for the tag command");
    add_param_flags(sim, flagged, apply);

    auto* tag = app.add_subcommand("tag", "Tag untagged comments with the model oracle");
    dataset(tag);

    auto* serve = app.add_subcommand("serve-review", "Serve the label-review HTTP API");
    dataset(serve);
    serve->add_option("--host", cmd.host, "Bind address");
    serve->add_option("--port,-p", cmd.port, "Port (0 = any free port)")->check(CLI::Range(0, 65535));
    serve->add_option("--token-env", cmd.token_env, "Environment variable holding a bearer token");
    serve->add_option("--ui", cmd.ui_dir, "Static UI bundle directory");
    serve->add_option("--cors-origin", cmd.cors_origin, "Allowed browser origin");

    auto* agg = app.add_subcommand("aggregate", "Aggregate comment tags into profile labels");
    dataset(agg);
    agg->add_option("--source", cmd.source, "Tags to aggregate")->check(CLI::IsMember({"human", "model"}));
    agg->add_flag("!--no-sanitize", cmd.sanitize, "Keep labels that disagree with the profile");
    agg->add_flag("--judge", cmd.judge, "Ask the backend about undecided free-text matches");

    auto* eval = app.add_subcommand("evaluate", "Run attribute inference and score it");
    dataset(eval);
    eval->add_flag("--anonymize", cmd.anonymize, "Mask comments before inference");
    eval->add_option("--anonymizer-url", cmd.anonymizer_url, "Hosted entity-recognition endpoint");
    eval->add_flag("--judge", cmd.judge, "Ask the backend about undecided free-text matches");
    eval->add_flag("!--no-fallback", cmd.extraction_fallback, "Disable the second-pass guess extraction");
    eval->add_option("--format", cmd.format, "Report format")->check(CLI::IsMember({"text", "json"}));
    eval->add_option("--out,-o", cmd.out, "Write the report to a file");

    auto* st = app.add_subcommand("stats", "Print dataset statistics");
    dataset(st);
    st->add_option("--table", cmd.table, "Table to print")
        ->check(CLI::IsMember({"thread", "hardness", "agreement", "humanstudy", "overlap", "topics"}));
    st->add_option("--level", cmd.level, "Hardness table level")->check(CLI::IsMember({"profile", "comment"}));
    st->add_option("--format", cmd.format, "Output format")->check(CLI::IsMember({"text", "csv", "json"}));
    st->add_option("--judgments", cmd.judgments, "JSONL judgment records for the human-study table");

    auto* imp = app.add_subcommand("import", "Import the published dataset");
    imp->add_option("--from", cmd.from, "Published dataset file or directory")->required();
    dataset(imp);
    imp->add_option("--mapping", cmd.mapping, "JSON field-name mapping")->check(CLI::ExistingFile);
    imp->add_flag("--force", cmd.force, "Overwrite an existing dataset");

    auto* val = app.add_subcommand("validate", "Check a dataset's integrity");
    dataset(val);

    auto* pipe = app.add_subcommand("pipeline", "generate-profiles, simulate, aggregate and evaluate in one go");
    dataset(pipe);
    pipe->add_option("--profiles,-n", cmd.profiles, "Number of profiles")->check(CLI::PositiveNumber);
    auto* pipe_threads = pipe->add_option("--threads,-t", cmd.threads, "Number of threads")->check(CLI::PositiveNumber);
    pipe->add_option("--attribute,-a", cmd.attributes, "Target attribute(s)");
    pipe->add_flag("--force", cmd.force, "Overwrite an existing dataset");
    pipe->add_flag("--no-style", cmd.no_style, "Skip writing-style enrichment");
    add_param_flags(pipe, flagged, apply);

    ParseOutcome outcome;
    if (args.empty()) {
        outcome.exit_code = kExitUsage;
        outcome.message = app.help();
        return outcome;
    }
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        outcome.message = app.help();
        return outcome;
    } catch (const CLI::CallForAllHelp&) {
        outcome.message = app.help("", CLI::AppFormatMode::All);
        return outcome;
    } catch (const CLI::CallForVersion&) {
        outcome.message = "paibench 0.3.0\n";
        return outcome;
    } catch (const CLI::ParseError& e) {
        outcome.exit_code = kExitUsage;
        outcome.message = std::string("usage error: ") + e.what() + "\nRun with --help for usage.\n";
        return outcome;
    }
    for (const auto* sub : app.get_subcommands()) cmd.name = sub->get_name();
    if (cmd.name == "pipeline" && cmd.source == "human") cmd.source = "model";

    try {
        if (!g.config.empty()) {
            std::ifstream in(g.config);
            json::parse(in).get_to(cmd.params);
        }
    } catch (const std::exception& e) {
        outcome.exit_code = kExitUsage;
        outcome.message = "usage error: bad --config: " + std::string(e.what()) + "\n";
        return outcome;
    }
    for (auto& f : apply) f(cmd.params);
    if (seed_opt->count() || g.config.empty()) cmd.params.seed = g.seed;
    if (sim_threads->count() || pipe_threads->count()) cmd.params.no_threads = cmd.threads;
    else cmd.threads = cmd.params.no_threads;
    outcome.command = cmd;
    return outcome;
}

int execute(const Command& cmd, std::ostream& out, std::ostream& err) {
    spdlog::set_level(cmd.global.verbose ? spdlog::level::debug : spdlog::level::info);
    try {
        return dispatch(cmd, out);
    } catch (const Error& e) {
        err << "error: " << e.name() << ": " << e.what() << "\n";
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
    }
    return kExitFailure;
}

int run(int argc, char** argv) {
    auto logger = spdlog::stderr_color_mt("paibench");
    spdlog::set_default_logger(logger);
    const auto outcome = parse_args(std::vector<std::string>(argv + 1, argv + argc));
    if (!outcome.command) {
        (outcome.exit_code == kExitOk ? std::cout : std::cerr) << outcome.message;
        return outcome.exit_code;
    }
    return execute(*outcome.command, std::cout, std::cerr);
}

}  // namespace pai::cli
