#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace unisgd {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NumericalError : public std::runtime_error {
 public:
  NumericalError(std::size_t step, double norm, const std::string& what)
      : std::runtime_error(what + " at step " + std::to_string(step)), step_(step), norm_(norm) {}
  std::size_t step() const { return step_; }
  double norm() const { return norm_; }

 private:
  std::size_t step_;
  double norm_;
};

}  // namespace unisgd
