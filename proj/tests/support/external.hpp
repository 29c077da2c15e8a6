#pragma once

// Child processes: the command-line tool and an external DRAT checker.

#include "ringsat/formula.hpp"

#include <filesystem>
#include <optional>
#include <string>

namespace external {

struct Run {
  int exit_code = -1;
  std::string out;
  std::string err;
};

// Runs 'command' through the shell and captures both streams.
Run run(const std::string &command);

std::string cli_path();

// Scratch directory removed on destruction.
class TempDir {
public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir &) = delete;
  TempDir &operator=(const TempDir &) = delete;
  const std::filesystem::path &path() const { return path_; }
  std::string file(const std::string &name) const { return (path_ / name).string(); }
  std::string write(const std::string &name, const std::string &contents) const;

private:
  std::filesystem::path path_;
};

bool drat_checker_available();

// nullopt if no external checker is installed; otherwise its verdict.
std::optional<bool> drat_check(const ringsat::InputFormula &formula, const std::string &proof, bool binary);

} // namespace external
