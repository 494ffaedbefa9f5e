#pragma once

#include "noveltree/core/types.hpp"
#include "noveltree/pddl/defs.hpp"

namespace noveltree::pddl {

// Instantiates every schema with all type-consistent assignments of distinct
// objects to distinct parameters. Reachability is not considered.
core::GroundProblem ground(const DomainDef &domain, const ProblemDef &problem);

} // namespace noveltree::pddl
