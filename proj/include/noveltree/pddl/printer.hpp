#pragma once

#include "noveltree/pddl/defs.hpp"

#include <string>

namespace noveltree::pddl {

std::string print_domain(const DomainDef &domain);
std::string print_problem(const ProblemDef &problem);

} // namespace noveltree::pddl
