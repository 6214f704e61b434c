#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "bessel/report.hpp"

namespace bessel {

struct AcceptanceOptions {
    std::uint64_t seed = 42;
    int workers = 0;
    std::function<void(const std::string&)> progress; // optional, called per criterion
};

/**
 * One acceptance criterion: a fixed battery of checks with every parameter
 * and tolerance pinned in code. `met` is true when all member reports pass,
 * counting soft (inconclusive) outcomes only where the criterion explicitly
 * allows them; `soft` marks a criterion met through such an outcome.
 */
struct AcceptanceItem {
    int criterion = 0;
    std::string title;
    std::vector<VerificationReport> reports;
    bool met = false;
    bool soft = false;
};

/** Runs the full 15-criterion battery. Deterministic given (seed, config). */
std::vector<AcceptanceItem> run_acceptance(const AcceptanceOptions& opt);

/** All reports of all items, in declaration order, for CSV/JSONL output. */
std::vector<VerificationReport> flatten_reports(const std::vector<AcceptanceItem>& items);

/** True when every criterion is met. */
bool all_met(const std::vector<AcceptanceItem>& items);

} // namespace bessel
