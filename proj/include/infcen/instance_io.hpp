#pragma once

#include <iosfwd>

#include "infcen/exact.hpp"

namespace infcen {

// Explicit-instance JSON:
//   {"n": 3, "rows": [{"S": 0, "dist": {"0": 1.0}}, ...], "weights": [...]}
// Row masks and target masks are integers (targets as string object keys);
// "weights" is present only for weighted instances.
void write_instance_json(std::ostream& out, const ExplicitInstance& inst);
ExplicitInstance read_instance_json(std::istream& in);

}  // namespace infcen
