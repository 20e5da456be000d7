#pragma once

#include <string>
#include <vector>

namespace seplab {

struct SelftestCheck {
    std::string module;
    std::string name;
    bool pass = false;
    double deviation = 0.0;
    double tolerance = 0.0;
};

struct SelftestReport {
    std::vector<SelftestCheck> checks;
    bool all_pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return !checks.empty();
    }
};

/// Runs every dense-oracle agreement check at minimal sizes plus the core
/// invariant suite (< 60 s). mutate_modcomm perturbs the modular-commutator
/// constant first, to prove the dense cross-check catches a wrong formula.
SelftestReport selftest(bool mutate_modcomm = false);

}  // namespace seplab
