#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ecov {

/// A concrete counterexample or extremal sample: a label plus the numbers
/// needed to reproduce it (points, scales, measured values).
struct Witness {
    std::string label;
    std::vector<double> data;
};

/// Result of one validator or certifier run. `constants` is an ordered list
/// so serialized reports are deterministic.
struct CertReport {
    std::string check;
    std::string subject;
    bool pass = false;
    std::uint64_t seed = 0;
    std::uint64_t samples = 0;
    int workers = 1;
    std::vector<std::pair<std::string, double>> constants;
    std::vector<Witness> witnesses;
    std::string notes;

    void set(std::string name, double value);
    bool has(std::string_view name) const;
    /// Looks up a named constant; throws contract_error if absent.
    double at(std::string_view name) const;
};

} // namespace ecov
