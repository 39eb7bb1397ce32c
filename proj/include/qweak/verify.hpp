#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "qweak/fockspace.hpp"
#include "qweak/photonstats.hpp"

namespace qweak::cli {

struct VerifyOptions {
    double tolerance = 1e-8;
    std::uint64_t seed = 42;
    std::size_t count = 200;
    // Printed transcriptions instead of the corrected closed forms; the run is
    // expected to fail, which exercises the harness itself.
    FormVariant forms = FormVariant::Corrected;
};

struct VerifyReport {
    VerifyOptions options;
    std::size_t configs = 0;
    std::size_t checks = 0;
    std::size_t max_dim = 0;
    std::map<std::string, double> max_deltas;
    std::vector<std::string> failures;

    bool passed() const { return failures.empty(); }
    std::string to_json() const;
};

// Samples `count` in-domain configurations from `seed` (q in [0.1, 1], g in [0, 1],
// squared moduli up to 0.9 of the radius) and checks every closed form against
// the truncated-Fock oracle plus the structural invariants. Throws ConfigError
// for tolerance <= 0.
VerifyReport run_verify(const VerifyOptions& options, const fock::DimPolicy& policy);

}  // namespace qweak::cli
