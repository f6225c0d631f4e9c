// Batches of independent runs, executed on a worker pool.
#pragma once

#include <vector>

#include "wban/config.hpp"
#include "wban/engine.hpp"
#include "wban/metrics.hpp"

namespace wban {

/// Runs every configuration and returns the reports in input order. Runs share
/// no mutable state, so the result does not depend on `threads`. The first
/// failure is rethrown after all workers stop.
std::vector<MetricsReport> run_all(const std::vector<ScenarioConfig>& jobs, unsigned threads = 0);

/// Same as run_all but keeps counters and diagnostics of every run.
std::vector<RunResult> run_batch(const std::vector<ScenarioConfig>& jobs, unsigned threads = 0);

/// Seed-averaged report: metrics are averaged over the reports that define
/// them, packet counts are summed. Descriptive fields come from the first report.
MetricsReport mean_report(const std::vector<MetricsReport>& reports);

}  // namespace wban
