#pragma once

#include <stdexcept>
#include <string>

namespace qhw {

enum class ErrorCode {
  SyntaxError,
  DuplicateName,
  UnknownVertex,
  UnknownArrow,
  QuiverMismatch,
  VertexIsSink,
  HasSink,
  NotComposable,
  WindowTooSmall,
  DegreeOutsideWindow,
  NotAModule,
  InvalidStage,
  StageNotStronglyGraded,
  WindowNotGenerated,
  NotSemisimple,
  NotGorensteinProjective,
  DimensionMismatch,
  InvariantViolated,
};

inline const char* to_string(ErrorCode c) {
  switch (c) {
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::DuplicateName: return "DuplicateName";
    case ErrorCode::UnknownVertex: return "UnknownVertex";
    case ErrorCode::UnknownArrow: return "UnknownArrow";
    case ErrorCode::QuiverMismatch: return "QuiverMismatch";
    case ErrorCode::VertexIsSink: return "VertexIsSink";
    case ErrorCode::HasSink: return "HasSink";
    case ErrorCode::NotComposable: return "NotComposable";
    case ErrorCode::WindowTooSmall: return "WindowTooSmall";
    case ErrorCode::DegreeOutsideWindow: return "DegreeOutsideWindow";
    case ErrorCode::NotAModule: return "NotAModule";
    case ErrorCode::InvalidStage: return "InvalidStage";
    case ErrorCode::StageNotStronglyGraded: return "StageNotStronglyGraded";
    case ErrorCode::WindowNotGenerated: return "WindowNotGenerated";
    case ErrorCode::NotSemisimple: return "NotSemisimple";
    case ErrorCode::NotGorensteinProjective: return "NotGorensteinProjective";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::InvariantViolated: return "InvariantViolated";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

/// Parse failure with a 1-based source position.
class SyntaxError : public Error {
 public:
  SyntaxError(int line, int column, const std::string& what)
      : Error(ErrorCode::SyntaxError,
              "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

}  // namespace qhw
