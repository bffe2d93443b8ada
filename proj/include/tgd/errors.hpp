#pragma once

#include <stdexcept>
#include <string>

namespace tgd {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidSubstitution : Error {
  using Error::Error;
};

struct InvalidRule : Error {
  using Error::Error;
};

struct ParseError : Error {
  ParseError(const std::string& msg, int line, int column)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + msg),
        line(line),
        column(column),
        message(msg) {}
  int line;
  int column;
  std::string message;
};

// raised by chase_step for duplicate or inapplicable triggers
struct TriggerRejected : Error {
  using Error::Error;
};

}  // namespace tgd
