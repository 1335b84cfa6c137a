#pragma once

#include <string>
#include <vector>

#include "core/types.hpp"

namespace xarjudge {

/// One broken invariant. Violations are data, not faults: an invalid pool is
/// a legitimate value to inspect, it just cannot be evaluated.
struct Violation {
    std::string window_id; // empty for pool- or roster-level violations
    std::string path;      // field path, e.g. "cases[3].window.duration_seconds"
    std::string message;

    bool operator==(const Violation&) const = default;
};

/// Checks every type invariant of the pool and returns all violations found.
/// Empty result means the pool is valid. Pure function, idempotent.
std::vector<Violation> validate_pool(const EvaluationPool& pool);

} // namespace xarjudge
