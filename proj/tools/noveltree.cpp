#include "noveltree/cli/commands.hpp"
#include "noveltree/errors.hpp"

#include "CLI11.hpp"

#include <iostream>

using namespace noveltree;

namespace {

struct Overrides {
    std::string domain, oracle, style, catalog, novelty_template, traversal, mode, pruning, endpoint, model;
    std::string action_order;
    std::uint64_t seed = 0;
    std::size_t n = 0;
    int blocks = 0, min_blocks = 0, max_blocks = 0, max_length = 0, k_max = 0, novelty_k = 0;
    int depth = 0, bf = 0, window = 0, samples = 0;
    double error_rate = 0.0;
    std::size_t budget = 0;
    int cities = 0, locations = 0, packages = 0, trucks = 0, airplanes = 0;
    std::vector<std::string> grid;
    bool thinking = false;
};

// Registers the flags shared by several subcommands. Each option only takes
// effect when given, so a --config file supplies the rest.
void add_common(CLI::App *cmd, Overrides &o, std::vector<CLI::Option *> &opts) {
    opts.push_back(cmd->add_option("--domain", o.domain, "blocksworld, logistics or game24"));
    opts.push_back(cmd->add_option("--seed", o.seed, "Random seed"));
    opts.push_back(cmd->add_option("--oracle,--oracles", o.oracle, "exact, noisy, llm or duplicate-baseline"));
    opts.push_back(cmd->add_option("--style", o.style, "pddl or natural_language"));
    opts.push_back(cmd->add_option("--catalog", o.catalog, "Prompt catalog: base, extended or a path"));
    opts.push_back(cmd->add_option("--novelty-template", o.novelty_template, "Novelty prompt template id"));
    opts.push_back(cmd->add_option("--endpoint", o.endpoint, "OpenAI-compatible base URL"));
    opts.push_back(cmd->add_option("--model", o.model, "Model name"));
    opts.push_back(cmd->add_option("--error-rate", o.error_rate, "Noisy oracle error rate for every sub-task"));
    opts.push_back(cmd->add_option("--novelty-k", o.novelty_k, "k used by the exact novelty oracle"));
    opts.push_back(cmd->add_option("--action-order", o.action_order, "canonical or optimal_first"));
}

void add_tot(CLI::App *cmd, Overrides &o, std::vector<CLI::Option *> &opts) {
    opts.push_back(cmd->add_option("--traversal", o.traversal, "bfs or dfs"));
    opts.push_back(cmd->add_option("--mode", o.mode, "direct or esa"));
    opts.push_back(cmd->add_option("--pruning", o.pruning, "on or off"));
    opts.push_back(cmd->add_option("--depth", o.depth, "Maximum depth"));
    opts.push_back(cmd->add_option("--bf", o.bf, "Branch factor"));
    opts.push_back(cmd->add_option("--window", o.window, "Novelty history window"));
    opts.push_back(cmd->add_option("--samples", o.samples, "Samples per expansion"));
}

bool given(const std::vector<CLI::Option *> &opts, const std::string &name) {
    for (auto *opt : opts)
        if (opt->check_lname(name.substr(2)) && opt->count() > 0) return true;
    return false;
}

cli::RunConfig resolve(const std::string &config_path, const Overrides &o, const std::vector<CLI::Option *> &opts) {
    cli::RunConfig c = config_path.empty() ? cli::RunConfig{} : cli::load_config(config_path);
    auto has = [&](const char *name) { return given(opts, name); };
    if (has("--domain")) c.domain = domains::domain_from_string(o.domain);
    c.generator.domain = c.domain == domains::DomainId::game24 ? domains::DomainId::blocksworld : c.domain;
    if (has("--seed")) c.seed = o.seed;
    if (has("--n")) c.n = o.n;
    if (has("--blocks")) c.n_blocks = o.blocks;
    if (has("--min-blocks")) c.generator.min_blocks = o.min_blocks;
    if (has("--max-blocks")) c.generator.max_blocks = o.max_blocks;
    if (has("--max-length")) c.max_plan_length = o.max_length;
    if (has("--cities")) c.generator.logistics.n_cities = o.cities;
    if (has("--locations")) c.generator.logistics.locations_per_city = o.locations;
    if (has("--packages")) c.generator.logistics.n_packages = o.packages;
    if (has("--trucks")) c.generator.logistics.n_trucks = o.trucks;
    if (has("--airplanes")) c.generator.logistics.n_airplanes = o.airplanes;
    if (has("--k-max")) c.k_max = o.k_max;
    if (has("--budget")) c.budget = o.budget;
    if (has("--oracle")) c.oracle.kind = cli::oracle_kind_from_string(o.oracle);
    if (has("--novelty-k")) c.oracle.novelty_k = o.novelty_k;
    if (has("--action-order")) c.oracle.action_order = oracles::action_order_from_string(o.action_order);
    if (has("--error-rate")) c.oracle.errors = oracles::ErrorModel::uniform(o.error_rate, c.oracle.errors.seed);
    if (has("--style")) c.prompts.style = pddl::style_from_string(o.style);
    if (has("--catalog")) c.prompts.catalog = o.catalog;
    if (has("--novelty-template")) c.prompts.novelty_template = o.novelty_template;
    if (has("--endpoint")) c.llm.endpoint = o.endpoint;
    if (has("--model")) c.llm.model = o.model;
    if (has("--thinking")) c.llm.thinking = o.thinking;
    if (has("--traversal")) c.tot.traversal = tot::traversal_from_string(o.traversal);
    if (has("--mode")) c.tot.mode = tot::mode_from_string(o.mode);
    if (has("--pruning")) {
        if (o.pruning != "on" && o.pruning != "off") throw ConfigError("--pruning takes on or off");
        c.tot.novelty_pruning = o.pruning == "on";
    }
    if (has("--depth")) c.tot.max_depth = o.depth;
    if (has("--bf")) c.tot.branch_factor = o.bf;
    if (has("--window")) c.tot.history_window = o.window;
    if (has("--samples")) c.tot.samples = o.samples;
    if (has("--grid")) c.grid = o.grid;
    c.validate();
    return c;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Width-based novelty pruning for tree-of-thought planning"};
    app.require_subcommand(1);
    std::string config_path, out;
    int jobs = 1;
    app.add_option("--config", config_path, "JSON run configuration")->check(CLI::ExistingFile);
    app.add_option("--jobs", jobs, "Parallel instances")->check(CLI::PositiveNumber);
    app.add_option("--out", out, "Output or run directory");
    app.fallthrough();

    Overrides o;
    std::vector<CLI::Option *> opts;

    auto *generate = app.add_subcommand("generate", "Write problem or Game of 24 instance files");
    std::string gen_domain;
    generate->add_option("domain", gen_domain, "blocksworld, logistics or game24")->required();
    opts.push_back(generate->add_option("--n,--count", o.n, "Number of instances"));
    opts.push_back(generate->add_option("--blocks", o.blocks, "Blocks per problem"));
    opts.push_back(generate->add_option("--seed", o.seed, "Random seed"));
    opts.push_back(generate->add_option("--cities", o.cities));
    opts.push_back(generate->add_option("--locations", o.locations, "Places per city"));
    opts.push_back(generate->add_option("--packages", o.packages));
    opts.push_back(generate->add_option("--trucks", o.trucks));
    opts.push_back(generate->add_option("--airplanes", o.airplanes));

    auto *analyze = app.add_subcommand("analyze-width", "Effective width and pruneable share per instance");
    std::vector<std::string> inputs;
    analyze->add_option("inputs", inputs, "Instance files or directories (default: shipped Game of 24 set)");
    opts.push_back(analyze->add_option("--domain", o.domain));
    opts.push_back(analyze->add_option("--k-max", o.k_max, "Largest width tried"));
    opts.push_back(analyze->add_option("--budget", o.budget, "State budget per search"));

    auto *solve = app.add_subcommand("solve", "Solve one instance with IW or tree-of-thought search");
    std::string instance, engine = "iw";
    int k = 0;
    solve->add_option("instance", instance, "PDDL problem file or four numbers")->required();
    solve->add_option("--engine", engine, "iw or tot")->check(CLI::IsMember({"iw", "tot"}));
    solve->add_option("--k", k, "IW width bound; 0 searches up to --k-max");
    opts.push_back(solve->add_option("--k-max", o.k_max));
    opts.push_back(solve->add_option("--budget", o.budget));
    opts.push_back(solve->add_flag("--thinking", o.thinking, "Enable model thinking"));
    add_common(solve, o, opts);
    add_tot(solve, o, opts);

    auto *evaluate = app.add_subcommand("eval", "Score a sub-task over generated instances");
    std::string subtask;
    evaluate->add_option("subtask", subtask,
                         "action-gen, action-gen-single, successor, successor-separate, plan-verify, novelty, "
                         "novelty-ndap")
        ->required();
    opts.push_back(evaluate->add_option("--n", o.n, "Number of instances"));
    opts.push_back(evaluate->add_option("--min-blocks", o.min_blocks));
    opts.push_back(evaluate->add_option("--max-blocks", o.max_blocks));
    opts.push_back(evaluate->add_flag("--thinking", o.thinking, "Enable model thinking"));
    add_common(evaluate, o, opts);

    auto *bench = app.add_subcommand("bench", "Run the traversal x mode x thinking x pruning grid");
    bool resume = false;
    bench->add_flag("--resume", resume, "Reuse finished per-instance results in --out");
    opts.push_back(bench->add_option("--n", o.n, "Number of instances"));
    opts.push_back(bench->add_option("--min-blocks", o.min_blocks));
    opts.push_back(bench->add_option("--max-blocks", o.max_blocks));
    opts.push_back(bench->add_option("--max-length", o.max_length, "Largest optimal plan length"));
    opts.push_back(bench->add_option("--grid", o.grid, "Cell labels such as dfs-esa-normal-pruning"));
    add_common(bench, o, opts);
    add_tot(bench, o, opts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : cli::kConfigError;
    }

    try {
        if (generate->parsed()) {
            auto config = resolve(config_path, o, opts);
            config.domain = domains::domain_from_string(gen_domain);
            if (out.empty()) throw ConfigError("generate needs --out");
            return cli::cmd_generate(config, out, std::cout);
        }
        const auto config = resolve(config_path, o, opts);
        if (analyze->parsed()) return cli::cmd_analyze_width(config, inputs, out, jobs, std::cout);
        if (solve->parsed()) return cli::cmd_solve(config, instance, engine, k, out, std::cout);
        if (evaluate->parsed())
            return cli::cmd_eval(config, eval::subtask_from_string(subtask), config.llm.thinking, out, jobs,
                                 std::cout);
        if (bench->parsed()) return cli::cmd_bench(config, out, resume, jobs, std::cout);
    } catch (const ConfigError &e) {
        std::cerr << "config error: " << e.what() << "\n";
        return cli::kConfigError;
    } catch (const SyntaxError &e) {
        std::cerr << "input error: " << e.what() << "\n";
        return cli::kConfigError;
    } catch (const AuthError &e) {
        std::cerr << "authentication failed: " << e.what() << "\n";
        return cli::kOracleError;
    } catch (const OracleUnavailable &e) {
        std::cerr << "oracle unavailable: " << e.what() << "\n";
        return cli::kOracleError;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return cli::kInternalError;
    }
    return cli::kInternalError;
}
