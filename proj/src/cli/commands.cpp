#include "noveltree/cli/commands.hpp"

#include "noveltree/core/parallel.hpp"
#include "noveltree/core/semantics.hpp"
#include "noveltree/domains/game24.hpp"
#include "noveltree/domains/random.hpp"
#include "noveltree/errors.hpp"
#include "noveltree/eval/respondents.hpp"
#include "noveltree/iw/models.hpp"
#include "noveltree/iw/search.hpp"
#include "noveltree/oracles/baselines.hpp"
#include "noveltree/oracles/exact.hpp"
#include "noveltree/oracles/llm_oracles.hpp"
#include "noveltree/pddl/grounding.hpp"
#include "noveltree/pddl/parser.hpp"
#include "noveltree/pddl/printer.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace noveltree::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::uint64_t text_seed(std::string_view text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string padded(std::size_t i, int width = 3) {
    std::ostringstream s;
    s << std::setw(width) << std::setfill('0') << i;
    return s.str();
}

void write_text(const fs::path &path, const std::string &text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << text;
}

std::shared_ptr<const pddl::Lexicon> lexicon_for(const std::string &domain, pddl::Style style) {
    try {
        return std::make_shared<pddl::Lexicon>(
            pddl::Lexicon::load(domains::lexicon_file(domains::domain_from_string(domain))));
    } catch (const ConfigError &) {
        if (style == pddl::Style::natural_language)
            throw ConfigError("no lexicon for domain '" + domain + "'; use the pddl style");
        return std::make_shared<pddl::Lexicon>();
    }
}

} // namespace

fs::path prepare_run_dir(const std::string &out, const std::string &command, const RunConfig &config) {
    fs::path dir = out;
    if (dir.empty()) {
        const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
        std::tm tm{};
        gmtime_r(&now, &tm);
        char stamp[32];
        std::strftime(stamp, sizeof stamp, "%Y%m%d-%H%M%S", &tm);
        dir = fs::path("runs") / (command + "-" + stamp + "-" + config_hash(config));
    }
    fs::create_directories(dir);
    write_text(dir / "config.json", to_json(config).dump(2) + "\n");
    return dir;
}

eval::OracleFactory make_oracle_factory(const RunConfig &config) {
    std::shared_ptr<const oracles::PromptCatalog> catalog;
    if (config.oracle.kind == OracleKind::llm)
        catalog = std::make_shared<oracles::PromptCatalog>(oracles::PromptCatalog::builtin(config.prompts.catalog));
    return [config, catalog](const eval::BenchInstance &inst, const eval::GridCell &cell,
                             std::shared_ptr<oracles::Simulator> sim,
                             std::shared_ptr<oracles::Transcript> transcript) -> tot::OracleSet {
        const int k = config.oracle.novelty_k;
        switch (config.oracle.kind) {
        case OracleKind::exact:
            return oracles::exact_oracles(sim, k);
        case OracleKind::noisy: {
            auto model = config.oracle.errors;
            model.seed = mix_seed(model.seed, text_seed(inst.id));
            return oracles::noisy(oracles::exact_oracles(sim, k), model, sim);
        }
        case OracleKind::duplicate_baseline: {
            auto set = oracles::exact_oracles(sim, k);
            set.novelty = std::make_shared<oracles::DuplicateNoveltyOracle>();
            return set;
        }
        case OracleKind::llm: {
            auto params = config.llm;
            params.thinking = cell.thinking;
            oracles::LLMContext ctx;
            ctx.client = std::make_shared<oracles::LLMClient>(params, transcript);
            ctx.catalog = catalog;
            ctx.domain = sim->domain();
            ctx.style = pddl::to_string(config.prompts.style);
            ctx.goal = sim->goal_text();
            ctx.sim = sim;
            ctx.temperatures = config.tot.temperatures;
            ctx.novelty_template = config.prompts.novelty_template;
            return oracles::llm_oracles(ctx);
        }
        }
        throw ConfigError("unsupported oracle kind");
    };
}

LoadedProblem load_problem_file(const fs::path &path) {
    const std::string text = pddl::read_file(path);
    LoadedProblem out;
    out.id = path.stem().string();
    const auto untyped = pddl::parse_problem(text);
    const auto sibling = path.parent_path() / "domain.pddl";
    out.domain = fs::exists(sibling) ? pddl::load_domain(sibling)
                                     : domains::builtin_domain(domains::domain_from_string(untyped.domain));
    out.problem = pddl::parse_problem(text, out.domain);
    return out;
}

namespace {

template <typename Model, typename Features>
WidthRow width_row(std::string id, const Model &model, Features features, int k_max, std::size_t budget) {
    WidthRow row;
    row.id = std::move(id);
    try {
        const auto s = iw::pruneability_stats(model, features, k_max, budget);
        row.width = s.width;
        row.generated = s.generated;
        row.expanded = s.expanded;
        row.pruned = s.pruned;
        row.duplicate_pruned = s.duplicate_pruned;
        row.pruneable = s.pruneable;
        row.wall_ms = s.wall_ms;
    } catch (const BudgetExceeded &e) {
        row.error = e.what();
    }
    return row;
}

} // namespace

std::vector<WidthRow> analyze_game24(const std::vector<std::array<int, 4>> &instances, int k_max,
                                     std::size_t budget, int jobs) {
    std::vector<WidthRow> rows(instances.size());
    parallel_for(instances.size(), jobs, [&](std::size_t i) {
        const auto state = game24::Game24State::from_integers(instances[i]);
        rows[i] = width_row(state.to_string(), iw::Game24Model(state), iw::Game24Features{}, k_max, budget);
    });
    return rows;
}

std::vector<WidthRow> analyze_strips(const std::vector<LoadedProblem> &problems, int k_max, std::size_t budget,
                                     int jobs) {
    std::vector<WidthRow> rows(problems.size());
    parallel_for(problems.size(), jobs, [&](std::size_t i) {
        const auto ground = pddl::ground(problems[i].domain, problems[i].problem);
        rows[i] = width_row(problems[i].id, iw::StripsModel(ground), iw::AtomFeatures{}, k_max, budget);
    });
    return rows;
}

WidthSummary summarize(const std::vector<WidthRow> &rows) {
    WidthSummary s;
    s.instances = rows.size();
    double width = 0, pruneable = 0, states = 0;
    for (const auto &r : rows) {
        if (!r.error.empty()) {
            ++s.errors;
            continue;
        }
        if (!r.width) continue;
        ++s.solved;
        width += *r.width;
        s.max_width = std::max(s.max_width, *r.width);
        pruneable += r.pruneable;
        states += static_cast<double>(r.generated);
    }
    if (s.solved) {
        const double n = static_cast<double>(s.solved);
        s.mean_width = width / n;
        s.mean_pruneable = pruneable / n;
        s.mean_states = states / n;
    }
    return s;
}

std::string width_csv(const std::vector<WidthRow> &rows) {
    std::ostringstream out;
    out << "instance,width,generated,expanded,pruned,duplicate_pruned,pruneable_pct,wall_ms,error\n";
    for (const auto &r : rows) {
        out << r.id << ',' << (r.width ? std::to_string(*r.width) : "unsolved") << ',' << r.generated << ','
            << r.expanded << ',' << r.pruned << ',' << r.duplicate_pruned << ',' << std::fixed
            << std::setprecision(2) << 100.0 * r.pruneable << ',' << std::setprecision(3) << r.wall_ms << ','
            << r.error << '\n';
        out.unsetf(std::ios::floatfield);
    }
    return out.str();
}

void write_width_report(const fs::path &dir, const std::vector<WidthRow> &rows) {
    fs::create_directories(dir);
    write_text(dir / "widths.csv", width_csv(rows));

    const auto s = summarize(rows);
    write_text(dir / "summary.json", json{{"instances", s.instances},
                                          {"solved", s.solved},
                                          {"errors", s.errors},
                                          {"mean_width", s.mean_width},
                                          {"max_width", s.max_width},
                                          {"mean_pruneable", s.mean_pruneable},
                                          {"mean_states", s.mean_states}}
                                         .dump(2) +
                                         "\n");

    std::map<std::string, std::size_t> widths;
    int max_width = 0;
    std::vector<std::size_t> pruneable(10, 0);
    std::vector<std::size_t> states(8, 0);
    for (const auto &r : rows) {
        if (!r.error.empty()) {
            ++widths["error"];
            continue;
        }
        if (!r.width) {
            ++widths["unsolved"];
            continue;
        }
        ++widths[std::to_string(*r.width)];
        max_width = std::max(max_width, *r.width);
        ++pruneable[std::min<std::size_t>(9, static_cast<std::size_t>(r.pruneable * 10.0))];
        const auto bin = static_cast<std::size_t>(std::floor(std::log10(std::max<double>(1, r.generated))));
        ++states[std::min<std::size_t>(states.size() - 1, bin)];
    }
    std::ostringstream w;
    w << "width,count\n";
    for (int k = 0; k <= max_width; ++k) w << k << ',' << widths[std::to_string(k)] << '\n';
    for (const char *extra : {"unsolved", "error"})
        if (widths.count(extra)) w << extra << ',' << widths[extra] << '\n';
    write_text(dir / "hist_width.csv", w.str());

    std::ostringstream p;
    p << "pct_low,pct_high,count\n";
    for (int b = 0; b < 10; ++b) p << b * 10 << ',' << (b + 1) * 10 << ',' << pruneable[b] << '\n';
    write_text(dir / "hist_pruneable.csv", p.str());

    std::ostringstream t;
    t << "states_low,states_high,count\n";
    for (std::size_t b = 0; b < states.size(); ++b)
        t << static_cast<long long>(std::pow(10, b)) << ',' << static_cast<long long>(std::pow(10, b + 1)) << ','
          << states[b] << '\n';
    write_text(dir / "hist_states.csv", t.str());
}

int cmd_generate(const RunConfig &config, const fs::path &out, std::ostream &log) {
    fs::create_directories(out);
    json manifest{{"domain", domains::to_string(config.domain)}, {"seed", config.seed}, {"count", config.n}};
    if (config.domain == domains::DomainId::game24) {
        const auto instances = game24::generate_instances(config.n, config.seed);
        write_text(out / "instances.txt", game24::format_instances(instances));
        manifest["files"] = json::array({"instances.txt"});
        write_text(out / "manifest.json", manifest.dump(2) + "\n");
        log << "wrote " << instances.size() << " instances to " << (out / "instances.txt").string() << "\n";
        return kSolved;
    }

    write_text(out / "domain.pddl", pddl::read_file(domains::domain_file(config.domain)));
    json entries = json::array();
    const std::string prefix = config.domain == domains::DomainId::blocksworld ? "bw" : "log";
    for (std::size_t i = 0; i < config.n; ++i) {
        domains::InstanceSpec spec;
        spec.domain = config.domain;
        spec.n_blocks = config.n_blocks;
        spec.logistics = config.generator.logistics;
        spec.seed = mix_seed(config.seed, i);
        auto problem = domains::generate_problem(spec);
        const std::string file = prefix + "-" + padded(i + 1) + ".pddl";
        write_text(out / file, pddl::print_problem(problem));
        entries.push_back({{"file", file}, {"name", problem.name}, {"spec", eval::to_json(spec)}});
    }
    manifest["domain_file"] = "domain.pddl";
    manifest["instances"] = entries;
    write_text(out / "manifest.json", manifest.dump(2) + "\n");
    log << "wrote " << config.n << " problems to " << out.string() << "\n";
    return kSolved;
}

int cmd_analyze_width(const RunConfig &config, const std::vector<std::string> &inputs, const std::string &out,
                      int jobs, std::ostream &log) {
    std::vector<std::array<int, 4>> game24_instances;
    std::vector<LoadedProblem> problems;
    auto add_file = [&](const fs::path &path) {
        if (path.extension() == ".txt") {
            const auto more = game24::load_instances(path);
            game24_instances.insert(game24_instances.end(), more.begin(), more.end());
        } else if (path.extension() == ".pddl" && path.filename() != "domain.pddl") {
            problems.push_back(load_problem_file(path));
        }
    };
    if (inputs.empty()) {
        if (config.domain != domains::DomainId::game24)
            throw ConfigError("analyze-width needs instance files unless the domain is game24");
        add_file(domains::data_dir() / "game24" / "instances.txt");
    }
    for (const auto &input : inputs) {
        const fs::path path(input);
        if (!fs::exists(path)) throw ConfigError("no such input " + input);
        if (fs::is_directory(path)) {
            std::vector<fs::path> files;
            for (const auto &entry : fs::directory_iterator(path)) files.push_back(entry.path());
            std::sort(files.begin(), files.end());
            for (const auto &f : files) add_file(f);
        } else {
            add_file(path);
        }
    }
    if (game24_instances.empty() && problems.empty()) throw ConfigError("no instances found");

    auto rows = analyze_game24(game24_instances, config.k_max, config.budget, jobs);
    const auto strips = analyze_strips(problems, config.k_max, config.budget, jobs);
    rows.insert(rows.end(), strips.begin(), strips.end());

    const auto dir = prepare_run_dir(out, "analyze-width", config);
    write_width_report(dir, rows);
    const auto s = summarize(rows);
    log << std::fixed << std::setprecision(3) << "instances " << s.instances << ", solved " << s.solved
        << ", budget exceeded " << s.errors << "\n"
        << "mean width " << s.mean_width << ", max width " << s.max_width << "\n"
        << "mean pruneable " << std::setprecision(1) << 100.0 * s.mean_pruneable << "%, mean states "
        << s.mean_states << "\n"
        << "report in " << dir.string() << "\n";
    return kSolved;
}

namespace {

int finish_solve(const fs::path &dir, json result, bool solved, std::ostream &log) {
    write_text(dir / "result.json", result.dump(2) + "\n");
    log << "run directory " << dir.string() << "\n";
    return solved ? kSolved : kUnsolved;
}

} // namespace

int cmd_solve(const RunConfig &config, const std::string &instance, const std::string &engine, int k,
              const std::string &out, std::ostream &log) {
    if (engine != "iw" && engine != "tot") throw ConfigError("engine must be iw or tot");
    if (k < 0) throw ConfigError("k must be non-negative");
    const bool is_game24 = config.domain == domains::DomainId::game24 || !fs::exists(instance);

    std::optional<LoadedProblem> loaded;
    std::optional<core::GroundProblem> ground;
    std::optional<game24::Game24State> numbers;
    if (is_game24) {
        try {
            numbers = game24::parse_state(instance);
        } catch (const Error &e) {
            throw ConfigError("'" + instance + "' is neither a problem file nor a Game of 24 instance");
        }
    } else {
        loaded = load_problem_file(instance);
        ground = pddl::ground(loaded->domain, loaded->problem);
    }
    const std::string id = loaded ? loaded->id : numbers->to_string();
    const auto dir = prepare_run_dir(out, "solve", config);

    if (engine == "iw") {
        auto run = [&](const auto &model, auto features) {
            std::decay_t<decltype(iw::iw_search(model, features, {}))> outcome;
            std::optional<int> width;
            if (k == 0) {
                auto r = iw::effective_width(model, features, config.k_max, config.budget);
                width = r.width;
                outcome = std::move(r.outcome);
            } else {
                outcome = iw::iw_search(model, features, iw::IWOptions{k, config.budget});
                if (outcome.solved()) width = k;
            }
            return std::make_pair(width, std::move(outcome));
        };
        json result{{"instance", id}, {"engine", "iw"}};
        std::vector<std::string> steps;
        bool valid = false;
        iw::SearchStats stats;
        std::optional<int> width;
        if (ground) {
            auto [w, outcome] = run(iw::StripsModel(*ground), iw::AtomFeatures{});
            width = w;
            stats = outcome.stats;
            if (outcome.plan) {
                core::Plan plan{*outcome.plan};
                for (const auto &a : plan.steps) steps.push_back(a.label());
                valid = core::validate_plan(*ground, plan).valid;
            }
        } else {
            auto [w, outcome] = run(iw::Game24Model(*numbers), iw::Game24Features{});
            width = w;
            stats = outcome.stats;
            if (outcome.plan) {
                for (const auto &a : *outcome.plan) steps.push_back(a.to_string());
                valid = oracles::Game24Simulator(*numbers).validate(steps);
            }
        }
        const bool found = stats.generated > 0 && (width.has_value());
        for (const auto &s : steps) log << s << "\n";
        if (found) log << (valid ? "valid" : "invalid") << "\n";
        else log << (stats.budget_exceeded ? "unsolved: budget exceeded" : "unsolved") << "\n";
        log << "width " << (width ? std::to_string(*width) : "-") << ", generated " << stats.generated
            << ", expanded " << stats.expanded << ", pruned " << stats.pruned << "\n";
        result["plan"] = steps;
        result["solved"] = found;
        result["valid"] = found && valid;
        result["width"] = width ? json(*width) : json(nullptr);
        result["stats"] = {{"generated", stats.generated}, {"expanded", stats.expanded},
                           {"pruned", stats.pruned},       {"duplicate_pruned", stats.duplicate_pruned},
                           {"frontier", stats.frontier},   {"max_depth", stats.max_depth},
                           {"budget_exceeded", stats.budget_exceeded}};
        return finish_solve(dir, result, found && valid, log);
    }

    std::shared_ptr<oracles::Simulator> sim;
    if (ground)
        sim = std::make_shared<oracles::StripsSimulator>(*ground, lexicon_for(ground->domain, config.prompts.style),
                                                         config.prompts.style, config.oracle.action_order);
    else
        sim = std::make_shared<oracles::Game24Simulator>(*numbers, config.oracle.action_order);
    auto transcript = std::make_shared<oracles::Transcript>(dir / "transcript.jsonl");
    eval::GridCell cell{config.tot.traversal, config.tot.mode, config.tot.novelty_pruning, config.llm.thinking};
    const auto oracle_set = make_oracle_factory(config)(eval::BenchInstance{id, {}, -1}, cell, sim, transcript);
    const auto outcome = tot::tot_search({id, sim->root()}, config.tot, oracle_set, transcript.get());

    const bool valid = outcome.solved && sim->validate(outcome.plan);
    for (const auto &s : outcome.plan) log << s << "\n";
    if (outcome.solved) log << (valid ? "valid" : "invalid: the search claimed a goal the simulator rejects") << "\n";
    else log << "unsolved: " << tot::to_string(outcome.reason) << (outcome.error.empty() ? "" : " (" + outcome.error + ")") << "\n";
    const auto &s = outcome.stats;
    log << "generated " << s.generated << ", expanded " << s.expanded << ", pruned " << s.pruned << ", tokens "
        << s.total.total() << "\n";
    json result{{"instance", id},
                {"engine", "tot"},
                {"solved", outcome.solved},
                {"valid", valid},
                {"reason", tot::to_string(outcome.reason)},
                {"error", outcome.error},
                {"plan", outcome.plan},
                {"stats",
                 {{"generated", s.generated},
                  {"expanded", s.expanded},
                  {"pruned", s.pruned},
                  {"failed", s.failed},
                  {"warnings", s.warnings},
                  {"tokens", s.total.total()},
                  {"wall_ms", s.wall_ms}}}};
    const int code = finish_solve(dir, result, valid, log);
    return outcome.reason == tot::FailReason::oracle_error ? kOracleError : code;
}

int cmd_eval(const RunConfig &config, eval::SubTask subtask, bool thinking, const std::string &out, int jobs,
             std::ostream &log) {
    if (config.domain == domains::DomainId::game24) throw ConfigError("sub-task evaluations need a STRIPS domain");
    auto options = config.generator;
    options.domain = config.domain;
    const auto instances = eval::generate_instances(subtask, config.n, config.seed, options);

    eval::EvalContext ctx = eval::EvalContext::builtin(config.domain, config.prompts.style, config.prompts.catalog);
    ctx.novelty_template = config.prompts.novelty_template;

    const auto dir = prepare_run_dir(out, "eval-" + std::string(eval::to_string(subtask)), config);
    auto transcript = std::make_shared<oracles::Transcript>(dir / "transcript.jsonl");
    {
        std::ofstream file(dir / "instances.jsonl");
        for (const auto &inst : instances) file << eval::to_json(inst).dump() << "\n";
    }

    std::unique_ptr<eval::Respondent> respondent;
    switch (config.oracle.kind) {
    case OracleKind::exact: respondent = std::make_unique<eval::ExactRespondent>(); break;
    case OracleKind::duplicate_baseline: respondent = std::make_unique<eval::DuplicateBaselineRespondent>(); break;
    case OracleKind::llm: {
        auto params = config.llm;
        params.thinking = thinking;
        respondent = std::make_unique<eval::LLMRespondent>(std::make_shared<oracles::LLMClient>(params, transcript));
        break;
    }
    case OracleKind::noisy: throw ConfigError("the noisy oracle is not a sub-task respondent");
    }

    eval::EvalOptions eval_options;
    eval_options.thinking = thinking;
    eval_options.jobs = jobs;
    eval_options.transcript = transcript;
    const auto report = eval::run_subtask_eval(instances, *respondent, ctx, eval_options);
    eval::write_report(dir, report);

    log << eval::to_string(subtask) << " " << report.style << " " << report.respondent << ": " << report.score()
        << "\n";
    if (report.optimal_passed)
        log << "optimal: " << *report.optimal_passed << "/" << report.total << "\n";
    log << "ATU " << std::fixed << std::setprecision(2) << report.atu << (report.estimated_tokens ? " (estimated)" : "")
        << "\nrun directory " << dir.string() << "\n";
    return kSolved;
}

int cmd_bench(const RunConfig &config, const std::string &out, bool resume, int jobs, std::ostream &log) {
    if (resume && out.empty()) throw ConfigError("--resume needs --out pointing at the interrupted run");
    std::vector<eval::BenchInstance> instances;
    if (config.domain == domains::DomainId::game24) {
        instances = eval::select_game24(config.n, config.seed);
    } else if (config.domain == domains::DomainId::blocksworld) {
        instances = eval::select_blocksworld(
            config.n, config.seed,
            {config.generator.min_blocks, config.generator.max_blocks, config.max_plan_length});
    } else {
        throw ConfigError("bench supports blocksworld and game24");
    }

    eval::BenchOptions options;
    options.config = config.tot;
    if (!config.grid.empty()) {
        options.grid.clear();
        for (const auto &label : config.grid) options.grid.push_back(eval::cell_from_label(label));
    }
    options.style = config.prompts.style;
    options.order = config.oracle.action_order;
    options.out = prepare_run_dir(out, "bench", config);
    options.resume = resume;
    options.jobs = jobs;
    {
        json manifest = json::array();
        for (const auto &inst : instances)
            manifest.push_back({{"id", inst.id}, {"spec", eval::to_json(inst.spec)}, {"optimal_length", inst.optimal_length}});
        write_text(options.out / "instances.json", manifest.dump(2) + "\n");
    }

    const auto table = eval::run_tot_benchmark(instances, make_oracle_factory(config), options);
    log << eval::benchmark_csv(table) << "run directory " << options.out.string() << "\n";
    return kSolved;
}

} // namespace noveltree::cli
