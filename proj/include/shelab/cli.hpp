#pragma once

#include <filesystem>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "shelab/config.hpp"
#include "shelab/csv.hpp"

namespace shelab {

inline constexpr int kExitPass = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitVerdictFailed = 2;

const std::vector<std::string>& subcommands();

/// What one subcommand produced, before anything touches the disk.
struct RunOutput {
    bool pass = false;
    SummaryRecord summary;
    std::map<std::string, CsvTable> tables;  // file stem -> table
};

RunOutput execute(const std::string& subcommand, const RunConfig& config);

// Writes config.txt, summary.txt and <stem>.csv under config.out.
void write_outputs(const RunConfig& config, const std::string& subcommand, const RunOutput& output);

// Runs a subcommand and writes its artifacts; returns the exit status.
int run(const std::string& subcommand, const RunConfig& config, std::ostream& log);

// argv entry point: shelab <subcommand> [--config f] [--seed n] [--replicas n]
// [--out dir] [--set key=value ...]
int cli_main(int argc, char** argv);

}  // namespace shelab
