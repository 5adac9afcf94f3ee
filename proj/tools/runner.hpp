#pragma once

#include <filesystem>
#include <ostream>

#include "config.hpp"

namespace viscsgn::cli {

enum ExitCode { kOk = 0, kConfigError = 2, kRuntimeAbort = 3 };

/// The state stopped being finite during a run.
class RuntimeAbort : public Error {
public:
    using Error::Error;
};

/**
 * Executes the configured mode and writes its artifacts into out_dir:
 *
 *   simulate  series.csv, eta_t<t>.csv, ubar_t<t>.csv, ubl_t<t>.csv per
 *             output time, summary.json
 *   verify    verify/<tag>.json and verify/<tag>.csv per study,
 *             verify/summary.json
 *
 * Every file is written to a temporary name and renamed. A runtime failure
 * flushes the last good snapshot and a summary with status "aborted".
 * Returns an ExitCode; configuration problems surface as ConfigError.
 */
int run(const RunConfig& config, const std::filesystem::path& out_dir, std::ostream& log);

}  // namespace viscsgn::cli
