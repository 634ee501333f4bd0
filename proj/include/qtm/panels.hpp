// panels.hpp — seeded spec panels and the verification suites behind `selftest`

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qtm/sweep.hpp"

namespace qtm {

// Deterministic sampler; identical seeds give identical panels on every run.
class SpecSampler {
public:
    explicit SpecSampler(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ULL) {}
    double uniform(double lo, double hi);
    double log_uniform(double lo, double hi);

private:
    std::uint64_t next();
    std::uint64_t state_;
};

// Random fridges across the full tested parameter box:
// E1, E3 in [0.2, 2], ordered temperatures, p_i in [1e-4, 1e-1],
// g in [1e-4, 0.1 min(E1, E3)].
std::vector<FridgeSettings> fridge_identity_panel(std::uint64_t seed, int count);

// Random fridges with faster resets (p_i in [0.05, 0.15]) so the long-time
// integration route converges within a few hundred reset times.
std::vector<FridgeSettings> fridge_oracle_panel(std::uint64_t seed, int count);

// Constructible stand-ins for the analytic limit cases: vanishing coupling and
// coinciding temperatures, at which the steady state is the thermal product.
FridgeSettings vanishing_coupling_case();
FridgeSettings equal_temperature_case();

struct SuiteResult {
    std::string name;
    bool passed = false;
    double worst = 0.0;       // worst observed deviation, in the suite's own measure
    double tolerance = 0.0;
    std::string detail;       // short stats or the failure description
};

struct SelftestReport {
    std::uint64_t seed = 0;
    std::vector<SuiteResult> suites;
    bool passed = false;
};

SelftestReport run_selftest(std::uint64_t seed);

} // namespace qtm
