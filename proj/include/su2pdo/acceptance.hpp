#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace su2pdo {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

struct AcceptanceConfig {
    std::uint64_t seed = 20261016;
};

constexpr int kCriteriaCount = 12;

// runs criterion 1..12; exceptions are reported as a failure with the message
CriterionResult run_criterion(int id, const AcceptanceConfig& cfg = {});
std::vector<CriterionResult> run_acceptance(const AcceptanceConfig& cfg = {});

}  // namespace su2pdo
