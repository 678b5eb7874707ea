#pragma once

#include <stdexcept>
#include <string>

namespace ragomp {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidInput : public Error {
 public:
  using Error::Error;
};

class CorpusEmpty : public Error {
 public:
  using Error::Error;
};

// Data that contradicts another artifact it references (unknown chunk ids, duplicate ids).
class IntegrityError : public Error {
 public:
  using Error::Error;
};

// Host problems: missing compiler, unwritable directory, exec failure.
class EnvironmentError : public Error {
 public:
  using Error::Error;
};

class TimeoutError : public Error {
 public:
  using Error::Error;
};

class UsageError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(what + " (line " + std::to_string(line) + ")"), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// Failure of a remote service. status is the HTTP status, or 0 for transport failures.
class ProviderError : public Error {
 public:
  ProviderError(const std::string& what, int status) : Error(what), status_(status) {}
  int status() const noexcept { return status_; }

 private:
  int status_;
};

class ReplayMiss : public Error {
 public:
  ReplayMiss(const std::string& what, std::string case_id)
      : Error(what), case_id_(std::move(case_id)) {}
  const std::string& case_id() const noexcept { return case_id_; }

 private:
  std::string case_id_;
};

class FetchError : public Error {
 public:
  FetchError(const std::string& what, int status, std::string advice)
      : Error(what), status_(status), advice_(std::move(advice)) {}
  int status() const noexcept { return status_; }
  const std::string& advice() const noexcept { return advice_; }

 private:
  int status_;
  std::string advice_;
};

class BenchError : public Error {
 public:
  using Error::Error;
};

class LockHeld : public Error {
 public:
  using Error::Error;
};

}  // namespace ragomp
