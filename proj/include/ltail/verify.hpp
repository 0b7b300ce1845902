#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "ltail/schedule.hpp"

namespace ltail {

struct VerifyOptions {
    std::string curve = "11a1";
    double X = 1e6;  // desk family cap for the moments suite
    double alpha = 0.3;
    EffectiveConstants constants = EffectiveConstants::desk();
    std::uint64_t seed = 1;
    // theta1..theta4 injected into the quadform suite
    std::optional<std::array<double, 4>> theta;
};

struct CheckResult {
    std::string suite;
    std::string name;
    double value = 0;
    double bound = 0;
    double margin = 0;  // >= 0 on pass
    bool pass = false;
};

extern const std::vector<std::string> kVerifySuites;

// runs one suite ("all" runs every suite), printing one line per invariant
std::vector<CheckResult> run_verify(const std::string& suite, const VerifyOptions& opt, std::ostream& log);
// 0 when every check passes
int cmd_verify(const std::string& suite, const VerifyOptions& opt, std::ostream& log);

}  // namespace ltail
