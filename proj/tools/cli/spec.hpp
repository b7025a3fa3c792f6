#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "unisgd/method.hpp"
#include "unisgd/problem.hpp"

namespace unisgd::cli {

struct ProblemSpec {
  enum class Source { libsvm, synthetic };
  enum class Labels { ones, consistent, signs };

  Source source = Source::synthetic;
  std::filesystem::path path;
  std::optional<std::size_t> dimension;
  Loss loss = Loss::squared;
  double lambda = 0.0;
  bool rescale = false;
  std::uint64_t rescale_seed = 1;
  int synthetic_type = 1;
  std::size_t n = 0;
  std::size_t d = 0;
  bool normalize_rows = false;
  Labels labels = Labels::ones;
  std::uint64_t data_seed = 1;
  Regularizer regularizer = Regularizer::none();
};

struct MethodEntry {
  std::string label;
  MethodConfig config;
  std::optional<double> step;
  std::optional<double> lyapunov_weight;
  bool standalone = true;
  double scale_A = 1.0;  // multiplies A before an assumption check
};

struct CheckSpec {
  std::size_t samples = 100000;
  std::size_t states = 20;
  std::uint64_t seed = 1;
};

struct ExperimentSpec {
  ProblemSpec problem;
  std::vector<MethodEntry> methods;
  std::size_t iterations = 1000;
  std::vector<std::uint64_t> seeds{1};
  std::size_t record_every = 0;
  bool diagnostics = true;
  std::filesystem::path output = "out";
  std::size_t threads = 0;
  CheckSpec check;
};

// Sections: [problem], [run], [check] and one [method <label>] per method.
// Relative paths resolve against base_dir. Throws ConfigError or ParseError.
ExperimentSpec parse_spec(std::istream& in, const std::filesystem::path& base_dir = ".");
ExperimentSpec load_spec(const std::filesystem::path& file);

Problem build_problem(const ProblemSpec& spec);

std::vector<std::uint64_t> parse_seed_list(const std::string& text);

}  // namespace unisgd::cli
