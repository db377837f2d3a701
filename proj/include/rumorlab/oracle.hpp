#pragma once

#include <string>
#include <vector>

namespace rumorlab {

struct OracleCheck {
    std::string name;
    std::int64_t cases = 0;
    bool pass = true;
    std::string counterexample;  // empty when pass
};

struct OracleReport {
    int n_max = 0;
    bool pass = true;
    std::vector<OracleCheck> checks;
};

/// Brute-force verification layer over every instance up to n_max:
///  - coupling, splitting, and both monotonicity checks over all 2^k success
///    patterns (all-ones tails), k <= n_max;
///  - direct simulation vs tree height, pointwise and as per-weight round
///    multisets over all failure sets;
///  - prefix-failure round count f + ceil(log2(n-f)) exactly;
///  - request count n-1 on every failure set, with full trace validation.
/// n_max is capped at 14 (the enumeration is 2^(n-1) per n).
OracleReport exhaustive_oracle(int n_max);

std::string oracle_report_to_json(const OracleReport& rep);

}  // namespace rumorlab
