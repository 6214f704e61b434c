#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bessel/statistics.hpp"

namespace bessel {

/**
 * One verified claim. `analytic` is the closed-form or quadrature value,
 * `oracle` an independent reference, `mc` the Monte-Carlo estimate; absent
 * fields simply do not apply to the check. `inconclusive` marks soft
 * outcomes (for example a tail-index estimate with too few exceedances)
 * that must not be counted as quantitative failures.
 */
struct VerificationReport {
    std::string name;
    std::map<std::string, double> inputs;   // delta, x, T, n, dt and friends
    std::optional<double> analytic;
    std::optional<double> oracle;
    std::optional<McEstimate> mc;
    std::string tolerance_spec;
    bool passed = false;
    bool inconclusive = false;
    std::string note;
    std::map<std::string, double> witness;  // offending grid point, margins

    double input_or(const std::string& key, double fallback) const {
        auto it = inputs.find(key);
        return it == inputs.end() ? fallback : it->second;
    }
};

/** "true", "false" or "inconclusive". */
std::string report_status(const VerificationReport& r);

/**
 * CSV with the fixed column set
 *   name,delta,x,T,n,dt,analytic,oracle,mc_mean,mc_se,passed
 * Doubles are written with 17 significant digits; absent fields are empty.
 * An empty report list still produces the header line.
 */
void write_report_csv(std::ostream& os, const std::vector<VerificationReport>& reports);

/** One self-contained JSON object per line, 17-significant-digit floats. */
void write_report_jsonl(std::ostream& os, const std::vector<VerificationReport>& reports);

/** Inverse of write_report_jsonl; round-trips every field bit-exactly. */
std::vector<VerificationReport> read_report_jsonl(std::istream& is);

/** 17-significant-digit decimal form that parses back to the same double. */
std::string format_double(double v);

/** Exit code policy: 0 all passed, 2 any hard failure, 3 inconclusive only. */
int exit_code_for(const std::vector<VerificationReport>& reports);

} // namespace bessel
