#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rwspell {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class EmptyInputError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class AlignmentError : public Error {
 public:
  AlignmentError(std::size_t sentence_id, const std::string& what)
      : Error("sentence " + std::to_string(sentence_id) + ": " + what), sentence_id_(sentence_id) {}

  std::size_t sentence_id() const noexcept { return sentence_id_; }

 private:
  std::size_t sentence_id_;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace rwspell
