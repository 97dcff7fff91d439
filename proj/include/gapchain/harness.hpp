#pragma once

#include "gapchain/config.hpp"
#include "gapchain/report.hpp"

namespace gapchain {

/// Runs the pipeline selected by config.mode. Module errors propagate as
/// gapchain::Error with the mode prefixed to the message.
Report run_experiment(const ExperimentConfig& config);

}  // namespace gapchain
