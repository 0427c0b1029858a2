// Command execution: solve / sweep / verify / benchmark.  Outputs (CSV files,
// manifest, verdict) are written to a temp directory and swapped in whole, so
// a failed run never leaves partial results.
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "stefanlab/config.hpp"
#include "stefanlab/limit_analysis.hpp"
#include "stefanlab/stefan_verify.hpp"

namespace stefanlab {

// A completed sweep plus the free-boundary post-processing shared by the
// verify command and the acceptance suite.
struct SweepArtifacts {
    SweepReport report;
    FreeBoundary fb;                                  // from the finest run
    LatentHeatField latent;
    std::vector<std::vector<double>> weak_residuals;  // [K][n_eta]
    std::vector<long> violations;                     // [K]
    std::vector<OdeCleanResult> ode;                  // [K]
    double wlimit_residual = 0.0;
};

SweepArtifacts build_sweep_artifacts(const Config& cfg);
SweepArtifacts analyze_sweep(const Config& cfg, SweepReport&& report);

struct ClauseVerdict {
    std::string clause;  // "(i)" .. "(v)"
    bool applicable = true;
    bool pass = false;
    double value = 0.0;
    double threshold = 0.0;
    std::string detail;

    bool ok() const { return !applicable || pass; }
};

struct VerifyOutcome {
    std::vector<ClauseVerdict> clauses;
    bool all_pass() const;
};

// Evaluates the five limit-theorem clauses on a completed sweep.
VerifyOutcome evaluate_theorem_clauses(const Config& cfg, const SweepArtifacts& art);

std::string render_verdict(const VerifyOutcome& outcome);

// Exit codes: 0 pass, 1 verdict failure, 2 usage/config error, 3 solver error.
int run(const Config& cfg, std::ostream& log);

}  // namespace stefanlab
