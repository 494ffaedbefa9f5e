#include "noveltree/eval/benchmark.hpp"

#include "noveltree/core/parallel.hpp"
#include "noveltree/domains/game24.hpp"
#include "noveltree/domains/random.hpp"
#include "noveltree/errors.hpp"
#include "noveltree/eval/instances.hpp"
#include "noveltree/iw/optimal.hpp"

#include <fstream>
#include <iomanip>
#include <mutex>
#include <numeric>
#include <sstream>

namespace noveltree::eval {

namespace fs = std::filesystem;

std::string GridCell::label() const {
    return std::string(tot::to_string(traversal)) + "-" + tot::to_string(mode) + "-" +
           (thinking ? "thinking" : "normal") + "-" + (pruning ? "pruning" : "base");
}

std::vector<GridCell> table3_grid() {
    std::vector<GridCell> grid;
    for (auto t : {tot::Traversal::dfs, tot::Traversal::bfs})
        for (auto m : {tot::Mode::direct, tot::Mode::esa})
            for (bool thinking : {false, true})
                for (bool pruning : {false, true}) grid.push_back({t, m, pruning, thinking});
    return grid;
}

GridCell cell_from_label(std::string_view label) {
    for (const auto &cell : table3_grid())
        if (cell.label() == label) return cell;
    throw ConfigError("unknown grid cell '" + std::string(label) + "'");
}

std::vector<BenchInstance> select_blocksworld(std::size_t n, std::uint64_t seed, const BenchSelection &sel) {
    if (sel.min_blocks < 1 || sel.max_blocks < sel.min_blocks || sel.max_blocks > 26)
        throw ConfigError("bad block range");
    std::vector<BenchInstance> out;
    const std::uint64_t limit = n * 100 + 100;
    for (std::uint64_t attempt = 0; out.size() < n; ++attempt) {
        if (attempt >= limit) throw GeneratorExhausted("not enough instances within the plan length bound");
        Rng rng(mix_seed(seed, attempt));
        domains::InstanceSpec spec;
        spec.domain = domains::DomainId::blocksworld;
        spec.n_blocks = sel.min_blocks + static_cast<int>(rng.below(sel.max_blocks - sel.min_blocks + 1));
        spec.seed = mix_seed(seed, attempt + 0x7a7a);
        const auto plan = iw::optimal_plan_bfs(ground_problem(spec));
        if (!plan || static_cast<int>(plan->size()) > sel.max_length) continue;
        char id[32];
        std::snprintf(id, sizeof id, "bw-%03zu", out.size() + 1);
        out.push_back({id, spec, static_cast<int>(plan->size())});
    }
    return out;
}

std::vector<BenchInstance> select_game24(std::size_t n, std::uint64_t seed) {
    auto all = game24::load_instances(domains::data_dir() / "game24" / "instances.txt");
    if (n > all.size()) throw GeneratorExhausted("only " + std::to_string(all.size()) + " shipped instances");
    Rng rng(seed);
    rng.shuffle(all);
    std::vector<BenchInstance> out;
    for (std::size_t i = 0; i < n; ++i) {
        BenchInstance b;
        char id[32];
        std::snprintf(id, sizeof id, "g24-%03zu", i + 1);
        b.id = id;
        b.spec.domain = domains::DomainId::game24;
        b.spec.numbers = all[i];
        out.push_back(b);
    }
    return out;
}

std::shared_ptr<oracles::Simulator> make_simulator(const BenchInstance &inst, pddl::Style style,
                                                   oracles::ActionOrder order) {
    if (inst.spec.domain == domains::DomainId::game24)
        return std::make_shared<oracles::Game24Simulator>(game24::Game24State::from_integers(inst.spec.numbers),
                                                          order);
    static std::mutex mutex;
    static std::map<domains::DomainId, std::shared_ptr<const pddl::Lexicon>> lexicons;
    std::shared_ptr<const pddl::Lexicon> lex;
    {
        std::lock_guard lock(mutex);
        auto &slot = lexicons[inst.spec.domain];
        if (!slot) slot = std::make_shared<pddl::Lexicon>(pddl::Lexicon::load(domains::lexicon_file(inst.spec.domain)));
        lex = slot;
    }
    return std::make_shared<oracles::StripsSimulator>(ground_problem(inst.spec), lex, style, order);
}

nlohmann::json to_json(const InstanceResult &r) {
    return {{"id", r.id},
            {"solved", r.solved},
            {"claimed", r.claimed},
            {"reason", r.reason},
            {"generated", r.generated},
            {"expanded", r.expanded},
            {"pruned", r.pruned},
            {"plan_length", r.plan_length},
            {"usage",
             {{"prompt", r.usage.prompt},
              {"completion", r.usage.completion},
              {"reasoning", r.usage.reasoning},
              {"estimated", r.usage.estimated}}},
            {"wall_ms", r.wall_ms}};
}

InstanceResult instance_result_from_json(const nlohmann::json &j) {
    InstanceResult r;
    r.id = j.at("id").get<std::string>();
    r.solved = j.at("solved").get<bool>();
    r.claimed = j.at("claimed").get<bool>();
    r.reason = j.at("reason").get<std::string>();
    r.generated = j.at("generated").get<std::size_t>();
    r.expanded = j.at("expanded").get<std::size_t>();
    r.pruned = j.at("pruned").get<std::size_t>();
    r.plan_length = j.at("plan_length").get<std::size_t>();
    const auto &u = j.at("usage");
    r.usage.prompt = u.at("prompt").get<std::int64_t>();
    r.usage.completion = u.at("completion").get<std::int64_t>();
    r.usage.reasoning = u.at("reasoning").get<std::int64_t>();
    r.usage.estimated = u.at("estimated").get<bool>();
    r.wall_ms = j.at("wall_ms").get<double>();
    return r;
}

std::size_t CellResult::solved() const {
    std::size_t s = 0;
    for (const auto &r : results) s += r.solved ? 1 : 0;
    return s;
}

std::string CellResult::perf() const { return std::to_string(solved()) + "/" + std::to_string(results.size()); }

double CellResult::atu() const {
    if (results.empty()) return 0.0;
    std::int64_t sum = 0;
    for (const auto &r : results) sum += r.usage.total();
    return static_cast<double>(sum) / static_cast<double>(results.size());
}

double CellResult::mean_generated() const {
    if (results.empty()) return 0.0;
    std::size_t sum = 0;
    for (const auto &r : results) sum += r.generated;
    return static_cast<double>(sum) / static_cast<double>(results.size());
}

namespace {

InstanceResult run_instance(const BenchInstance &inst, const GridCell &cell, const OracleFactory &factory,
                            const BenchOptions &options, const fs::path &cell_dir) {
    auto sim = make_simulator(inst, options.style, options.order);
    std::shared_ptr<oracles::Transcript> transcript;
    if (cell_dir.empty()) {
        transcript = std::make_shared<oracles::Transcript>();
    } else {
        const auto path = cell_dir / (inst.id + ".jsonl");
        fs::remove(path);
        transcript = std::make_shared<oracles::Transcript>(path);
    }
    auto oracle_set = factory(inst, cell, sim, transcript);

    tot::ToTConfig config = options.config;
    config.traversal = cell.traversal;
    config.mode = cell.mode;
    config.novelty_pruning = cell.pruning;
    const auto outcome = tot::tot_search({inst.id, sim->root()}, config, oracle_set, transcript.get());

    InstanceResult r;
    r.id = inst.id;
    r.claimed = outcome.solved;
    r.solved = outcome.solved && sim->validate(outcome.plan);
    r.reason = r.solved ? "solved" : outcome.solved ? "invalid_plan" : tot::to_string(outcome.reason);
    r.generated = outcome.stats.generated;
    r.expanded = outcome.stats.expanded;
    r.pruned = outcome.stats.pruned;
    r.plan_length = outcome.plan.size();
    r.usage = outcome.stats.total;
    r.wall_ms = outcome.stats.wall_ms;
    transcript->write({{"type", "result"}, {"result", to_json(r)}});
    return r;
}

} // namespace

BenchmarkTable run_tot_benchmark(const std::vector<BenchInstance> &instances, const OracleFactory &factory,
                                 const BenchOptions &options) {
    options.config.validate();
    BenchmarkTable table;
    for (const auto &cell : options.grid) {
        CellResult cr;
        cr.cell = cell;
        cr.results.resize(instances.size());
        fs::path cell_dir;
        if (!options.out.empty()) {
            cell_dir = options.out / "cells" / cell.label();
            fs::create_directories(cell_dir);
        }

        std::vector<char> done(instances.size(), 0);
        if (options.resume && !cell_dir.empty()) {
            for (std::size_t i = 0; i < instances.size(); ++i) {
                const auto path = cell_dir / (instances[i].id + ".result.json");
                if (!fs::exists(path)) continue;
                std::ifstream in(path);
                try {
                    cr.results[i] = instance_result_from_json(nlohmann::json::parse(in));
                    done[i] = 1;
                } catch (const std::exception &) {
                    // Partial file from an interrupted write; rerun the instance.
                }
            }
        }

        std::mutex error_mutex;
        auto run_one = [&](std::size_t i) {
            if (done[i]) return;
            try {
                cr.results[i] = run_instance(instances[i], cell, factory, options, cell_dir);
                if (!cell_dir.empty()) {
                    const auto path = cell_dir / (instances[i].id + ".result.json");
                    const auto tmp = path.string() + ".tmp";
                    std::ofstream(tmp) << to_json(cr.results[i]).dump(2) << "\n";
                    fs::rename(tmp, path);
                }
            } catch (const std::exception &e) {
                std::lock_guard lock(error_mutex);
                if (cr.error.empty()) cr.error = instances[i].id + ": " + e.what();
                cr.results[i].id = instances[i].id;
                cr.results[i].reason = "error";
            }
        };

        parallel_for(instances.size(), options.jobs, run_one);
        table.cells.push_back(std::move(cr));
    }

    if (!options.out.empty()) {
        // Merge per-instance transcripts in grid and instance order.
        std::ofstream merged(options.out / "transcript.jsonl");
        for (const auto &cell : options.grid)
            for (const auto &inst : instances) {
                std::ifstream in(options.out / "cells" / cell.label() / (inst.id + ".jsonl"));
                std::string line;
                while (std::getline(in, line)) {
                    if (line.empty()) continue;
                    auto rec = nlohmann::json::parse(line, nullptr, false);
                    if (rec.is_discarded()) continue;
                    rec["cell"] = cell.label();
                    rec["instance"] = inst.id;
                    merged << rec.dump() << "\n";
                }
            }
        write_benchmark(options.out, table);
    }
    return table;
}

std::string benchmark_csv(const BenchmarkTable &table) {
    std::ostringstream out;
    out << "traversal,mode,thinking,pruning,solved,total,perf,atu,mean_generated,error\n";
    for (const auto &c : table.cells) {
        std::string error = c.error;
        for (auto &ch : error)
            if (ch == ',' || ch == '\n' || ch == '"') ch = ' ';
        out << tot::to_string(c.cell.traversal) << ',' << tot::to_string(c.cell.mode) << ','
            << (c.cell.thinking ? "thinking" : "normal") << ',' << (c.cell.pruning ? "pruning" : "base") << ','
            << c.solved() << ',' << c.results.size() << ',' << c.perf() << ',' << std::fixed << std::setprecision(2)
            << c.atu() << ',' << c.mean_generated() << ',' << error << '\n';
        out.unsetf(std::ios::floatfield);
    }
    return out.str();
}

nlohmann::json to_json(const BenchmarkTable &table) {
    nlohmann::json cells = nlohmann::json::array();
    for (const auto &c : table.cells) {
        nlohmann::json results = nlohmann::json::array();
        for (const auto &r : c.results) results.push_back(to_json(r));
        cells.push_back({{"cell", c.cell.label()},
                         {"traversal", tot::to_string(c.cell.traversal)},
                         {"mode", tot::to_string(c.cell.mode)},
                         {"thinking", c.cell.thinking},
                         {"pruning", c.cell.pruning},
                         {"perf", c.perf()},
                         {"solved", c.solved()},
                         {"total", c.results.size()},
                         {"atu", c.atu()},
                         {"mean_generated", c.mean_generated()},
                         {"error", c.error},
                         {"results", results}});
    }
    return {{"cells", cells}};
}

void write_benchmark(const fs::path &dir, const BenchmarkTable &table) {
    fs::create_directories(dir);
    std::ofstream(dir / "bench.csv") << benchmark_csv(table);
    std::ofstream(dir / "bench.json") << to_json(table).dump(2) << "\n";
}

} // namespace noveltree::eval
