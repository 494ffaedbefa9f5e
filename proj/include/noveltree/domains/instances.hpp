#pragma once

#include "noveltree/core/types.hpp"
#include "noveltree/domains/logistics.hpp"
#include "noveltree/pddl/defs.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>

namespace noveltree::domains {

inline constexpr int kMaxRedraws = 1000;

enum class DomainId { blocksworld, logistics, game24 };

const char *to_string(DomainId id);
DomainId domain_from_string(std::string_view name);

struct InstanceSpec {
    DomainId domain = DomainId::blocksworld;
    int n_blocks = 4;
    LogisticsSpec logistics;
    std::array<int, 4> numbers{};
    std::uint64_t seed = 0;
};

std::filesystem::path data_dir();
std::filesystem::path domain_file(DomainId id);
std::filesystem::path lexicon_file(DomainId id);

// Cached parse of the shipped domain file.
const pddl::DomainDef &builtin_domain(DomainId id);

// STRIPS domains only.
pddl::ProblemDef generate_problem(const InstanceSpec &spec);
core::GroundProblem generate_ground(const InstanceSpec &spec);

} // namespace noveltree::domains
