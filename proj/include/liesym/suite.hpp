#pragma once

#include <string>
#include <vector>

#include "liesym/model.hpp"
#include "liesym/ode.hpp"
#include "liesym/report.hpp"

namespace liesym {

/// One profile of the scaling first integral, integrated twice.
struct ProfileRun {
    std::string run;
    double n = 0;
    Trajectory adaptive;  // adaptive-rk45 at the run's tolerance
    Trajectory fixed;     // fixed-rk4 with step 1e-4
    double max_endpoint_gap = 0;
};

struct ProfileSet {
    std::string grouping;  // "default", "regrouped", or "none" for a single run
    std::vector<ProfileRun> runs;
};

/// Runs fig1-n{2,3,5} (or fig1-regrouped-n{2,3,5}) from the model.
ProfileSet run_profiles(const Model& m, const std::string& grouping = "default");

/// Integrates one run block with adaptive-rk45 at its tolerance and with fixed-rk4 at step 1e-4.
ProfileRun run_twice(const Model& m, const std::string& run);

/// CSV per run (adaptive trajectory) plus one SVG; returns written paths.
std::vector<std::string> write_profiles(const ProfileSet& set, const std::string& dir);

/// One numerics case per run: adaptive and fixed endpoints within 1e-6, no step underflow.
std::vector<CaseResult> profile_cases(const ProfileSet& set);

/// Endpoint error ratio of fixed-rk4 on y' = y over [0, 1] for steps h and h/2.
double rk4_convergence_ratio(double h = 0.1);

/// Every built-in check, run concurrently and sorted by label.
Report run_paper_suite(bool parallel = true);

}  // namespace liesym
