#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace rinkloc {

// Base for everything the library throws. InputError subclasses are caused by
// bad files or arguments; the rest signal numerical or geometric failures.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InputError : public Error {
 public:
  using Error::Error;
};

class DegenerateConfiguration : public Error {
 public:
  explicit DegenerateConfiguration(const std::string& what,
                                   std::optional<std::int64_t> frame = std::nullopt)
      : Error(frame ? what + " (frame " + std::to_string(*frame) + ")" : what), frame_(frame) {}
  std::optional<std::int64_t> frame() const { return frame_; }

 private:
  std::optional<std::int64_t> frame_;
};

class NumericalFailure : public Error {
 public:
  using Error::Error;
};

class PointAtInfinity : public Error {
 public:
  explicit PointAtInfinity(const std::string& what, int point_index = -1)
      : Error(point_index >= 0 ? what + " (point " + std::to_string(point_index) + ")" : what),
        point_index_(point_index) {}
  int point_index() const { return point_index_; }

 private:
  int point_index_;
};

class IllConditioned : public Error {
 public:
  using Error::Error;
};

class DegenerateQuad : public Error {
 public:
  using Error::Error;
};

class StaticTrajectory : public Error {
 public:
  using Error::Error;
};

class InvalidStats : public Error {
 public:
  using Error::Error;
};

class InvalidWindow : public InputError {
 public:
  using InputError::InputError;
};

class ImageTooSmall : public InputError {
 public:
  using InputError::InputError;
};

class ShapeMismatch : public InputError {
 public:
  using InputError::InputError;
};

class IoError : public InputError {
 public:
  using InputError::InputError;
};

// Frame decoding failure; carries the stream index of the offending frame.
class DecodeError : public InputError {
 public:
  DecodeError(const std::string& what, std::int64_t frame)
      : InputError("frame " + std::to_string(frame) + ": " + what), frame_(frame) {}
  std::int64_t frame() const { return frame_; }

 private:
  std::int64_t frame_;
};

class ParseError : public InputError {
 public:
  ParseError(const std::string& what, std::size_t line)
      : InputError("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class NonContiguousFrames : public InputError {
 public:
  NonContiguousFrames(const std::string& what, std::size_t line)
      : InputError("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class NonFinitePoint : public InputError {
 public:
  NonFinitePoint(const std::string& what, std::size_t line)
      : InputError("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

}  // namespace rinkloc
