#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "masslab/rng.hpp"

namespace masslab {

/// The built-in verification matrix: for each (m, k) cell it runs the
/// inequality experiments, the resolvent cross-check, the spectral
/// identities, homogeneity, and the interior maximum-principle scan, writing
/// one CSV per check plus a JSON summary.
struct VerifyOptions {
    std::string out_dir;
    std::uint64_t seed = kDefaultSeed;
    std::vector<std::pair<int, int>> cells = {{1, 1}, {2, 2}, {2, 1}};
    bool break_comb = false; // test-only fault injection into the shift identity
};

struct VerifyCheck {
    std::string name;
    bool pass = false;
    double worst_margin = 0.0;
};

struct VerifySummary {
    std::vector<VerifyCheck> checks;

    bool all_pass() const;
};

VerifySummary run_verify(const VerifyOptions& options);

/// Renders the summary as the JSON artifact written by run_verify.
std::string summary_to_json(const VerifySummary& summary);

} // namespace masslab
