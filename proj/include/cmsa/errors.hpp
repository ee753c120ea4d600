#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cmsa {

// Base class of every error thrown by the toolkit.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed input document. byte_offset is the position reported by the
// JSON parser, 0 when unknown.
class ParseError : public Error {
 public:
  explicit ParseError(const std::string& msg, std::size_t byte_offset = 0)
      : Error(msg), byte_offset(byte_offset) {}
  std::size_t byte_offset;
};

// Sentiment value outside {-1, 0, 1}, or a labeled record where none is
// allowed (and vice versa). id is the offending sample id when known.
class LabelError : public Error {
 public:
  explicit LabelError(const std::string& msg, long long id = 0)
      : Error(msg), id(id) {}
  long long id;
};

class DuplicateIdError : public Error {
 public:
  explicit DuplicateIdError(const std::string& msg, long long id = 0)
      : Error(msg), id(id) {}
  long long id;
};

class SplitError : public Error {
 public:
  using Error::Error;
};

// Length mismatch between paired lists.
class ArityError : public Error {
 public:
  using Error::Error;
};

class FitError : public Error {
 public:
  using Error::Error;
};

// Malformed non-JSON input (embedding files, truncated artifacts). line is
// 1-based when known, 0 otherwise.
class FormatError : public Error {
 public:
  explicit FormatError(const std::string& msg, std::size_t line = 0)
      : Error(msg), line(line) {}
  std::size_t line;
};

// Training data does not contain the classes a trainer requires.
class DegenerateLabelsError : public Error {
 public:
  using Error::Error;
};

// Feature dimension mismatch between a model and its input.
class DimError : public Error {
 public:
  using Error::Error;
};

class DegenerateNodeError : public Error {
 public:
  using Error::Error;
};

class EmptySequenceError : public Error {
 public:
  using Error::Error;
};

class NonFiniteLossError : public Error {
 public:
  using Error::Error;
};

class EmptyEvalError : public Error {
 public:
  using Error::Error;
};

class PresetError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class ArtifactError : public Error {
 public:
  using Error::Error;
};

// Prediction file does not cover the evaluated ids; the rendered
// validation report is part of the message.
class ValidationError : public Error {
 public:
  using Error::Error;
};

}  // namespace cmsa
