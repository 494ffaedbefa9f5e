#include "noveltree/domains/instances.hpp"

#include "noveltree/domains/blocksworld.hpp"
#include "noveltree/errors.hpp"
#include "noveltree/pddl/grounding.hpp"
#include "noveltree/pddl/parser.hpp"

#include <cstdlib>
#include <mutex>
#include <optional>

#ifndef NOVELTREE_DATA_DIR
#define NOVELTREE_DATA_DIR "data"
#endif

namespace noveltree::domains {

const char *to_string(DomainId id) {
    switch (id) {
    case DomainId::blocksworld: return "blocksworld";
    case DomainId::logistics: return "logistics";
    case DomainId::game24: return "game24";
    }
    return "?";
}

DomainId domain_from_string(std::string_view name) {
    if (name == "blocksworld" || name == "blocks") return DomainId::blocksworld;
    if (name == "logistics") return DomainId::logistics;
    if (name == "game24" || name == "game-of-24") return DomainId::game24;
    throw ConfigError("unknown domain '" + std::string(name) + "'");
}

std::filesystem::path data_dir() {
    if (const char *env = std::getenv("NOVELTREE_DATA_DIR"); env && *env) return env;
    return NOVELTREE_DATA_DIR;
}

std::filesystem::path domain_file(DomainId id) {
    if (id == DomainId::game24) throw ConfigError("game24 has no PDDL domain file");
    return data_dir() / "domains" / (std::string(to_string(id)) + ".pddl");
}

std::filesystem::path lexicon_file(DomainId id) {
    if (id == DomainId::game24) throw ConfigError("game24 has no lexicon");
    return data_dir() / "lexicons" / (std::string(to_string(id)) + ".json");
}

const pddl::DomainDef &builtin_domain(DomainId id) {
    static std::mutex mutex;
    static std::optional<pddl::DomainDef> cache[2];
    std::lock_guard lock(mutex);
    auto &slot = cache[id == DomainId::blocksworld ? 0 : 1];
    if (!slot) slot = pddl::load_domain(domain_file(id));
    return *slot;
}

pddl::ProblemDef generate_problem(const InstanceSpec &spec) {
    switch (spec.domain) {
    case DomainId::blocksworld: return blocksworld_generate(spec.n_blocks, spec.seed);
    case DomainId::logistics: return logistics_generate(spec.logistics, spec.seed);
    case DomainId::game24: break;
    }
    throw ConfigError("game24 instances are not PDDL problems");
}

core::GroundProblem generate_ground(const InstanceSpec &spec) {
    return pddl::ground(builtin_domain(spec.domain), generate_problem(spec));
}

} // namespace noveltree::domains
