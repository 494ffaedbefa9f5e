#pragma once

#include "noveltree/pddl/defs.hpp"

#include <filesystem>
#include <string>
#include <string_view>

namespace noveltree::pddl {

// Supported fragment: :strips and :typing. Anything else raises UnsupportedFeature.
DomainDef parse_domain(std::string_view text);

// Without a domain only internal consistency (one arity per predicate) is checked.
ProblemDef parse_problem(std::string_view text);
// Also checks predicate arities and object types against `domain`.
ProblemDef parse_problem(std::string_view text, const DomainDef &domain);

std::string read_file(const std::filesystem::path &path);
void write_file(const std::filesystem::path &path, std::string_view content);

DomainDef load_domain(const std::filesystem::path &path);
ProblemDef load_problem(const std::filesystem::path &path);

} // namespace noveltree::pddl
