#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mlab/errors.hpp"
#include "mlab/identities.hpp"

namespace mlab {

// Process exit codes of the batch driver.
inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitHypothesis = 2;
inline constexpr int kExitUsage = 64;

// A scenario that does not validate; pointer() is a JSON pointer into it.
class ScenarioError : public ConfigError {
 public:
  ScenarioError(std::string pointer, const std::string& what)
      : ConfigError(pointer.empty() ? what : pointer + ": " + what),
        pointer_(std::move(pointer)) {}
  const std::string& pointer() const noexcept { return pointer_; }

 private:
  std::string pointer_;
};

struct CheckOutcome {
  int index = 0;  // 1-based
  std::string check_id;
  std::string file;     // report file name inside the output directory
  std::string verdict;  // pass, fail, hypothesis_violation or error
  int exit_code = kExitPass;
  nlohmann::ordered_json report;
  std::string primary_name;
  double primary = 0.0;
  std::string secondary_name;
  double secondary = 0.0;
  std::string note;
};

struct RunOptions {
  int threads = 1;
  double tol_scale = 1.0;
};

struct RunResult {
  int exit_code = kExitPass;
  std::vector<CheckOutcome> checks;
  std::string message;  // validation error text when exit_code is 64
};

// A validated scenario. Construction validates the whole document (every
// check included) before anything is computed.
class Scenario {
 public:
  // `base_dir` resolves relative paths such as external mesh files.
  Scenario(nlohmann::json doc, std::filesystem::path base_dir = {});
  static Scenario load(const std::filesystem::path& path);

  const nlohmann::json& document() const { return doc_; }
  const std::filesystem::path& base_dir() const { return base_dir_; }
  std::size_t size() const;
  std::filesystem::path output_dir() const;  // "output.dir", may be empty

  // Runs every check; no files are written.
  RunResult run(const RunOptions& opts = {}) const;

 private:
  nlohmann::json doc_;
  std::filesystem::path base_dir_;
};

// Writes NN_<check_id>.json per check, reports.csv and metadata.json.
void write_reports(const RunResult& result, const std::filesystem::path& dir,
                   const nlohmann::json& metadata);

// Highest-priority code: 64 over 1 over 2 over 0.
int combine_exit(int a, int b);

// Loads, runs and writes. Validation failures return 64 with the message in
// `message` and write nothing.
RunResult run_file(const std::filesystem::path& config, const std::filesystem::path& out,
                   const RunOptions& opts = {});

// One run per value of the numeric field at `axis`, reports under
// out/value_NN/ and one row per (value, check) in out/sweep.csv.
RunResult sweep_file(const std::filesystem::path& config, const std::string& axis,
                     const std::vector<double>& values, const std::filesystem::path& out,
                     const RunOptions& opts = {});

std::string list_checks();
std::string list_surfaces();

}  // namespace mlab
