#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace thickknot {

/// Base of every error raised by the library.
class KnotError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Index of the record in a multi-record file, when the polygon came from one.
inline constexpr std::size_t kNoRecord = static_cast<std::size_t>(-1);

inline std::string record_prefix(std::size_t record) {
    return record == kNoRecord ? std::string() : "record " + std::to_string(record) + ": ";
}

class TooFewVertices : public KnotError {
  public:
    explicit TooFewVertices(std::size_t n, std::size_t record_index = kNoRecord)
        : KnotError(record_prefix(record_index) + "polygon needs at least 3 vertices, got " + std::to_string(n)),
          count(n), record(record_index) {}
    std::size_t count;
    std::size_t record;
};

class EdgeLengthViolation : public KnotError {
  public:
    EdgeLengthViolation(std::size_t index, double dev, std::size_t record_index = kNoRecord)
        : KnotError(record_prefix(record_index) + "edge " + std::to_string(index) +
                    " deviates from unit length by " + std::to_string(dev)),
          edge(index), deviation(dev), record(record_index) {}
    std::size_t edge;
    double deviation;
    std::size_t record;
};

class DegenerateAngle : public KnotError {
  public:
    using KnotError::KnotError;
};

class PointNotOnKnot : public KnotError {
  public:
    using KnotError::KnotError;
};

class DegenerateAxis : public KnotError {
  public:
    using KnotError::KnotError;
};

class NotCoplanarizable : public KnotError {
  public:
    NotCoplanarizable(const std::string& what, double res) : KnotError(what), residual(res) {}
    double residual;
};

class AlreadyRegular : public KnotError {
  public:
    AlreadyRegular() : KnotError("polygon is already regular") {}
};

class NotApplicable : public KnotError {
  public:
    using KnotError::KnotError;
};

class NoSignChange : public KnotError {
  public:
    using KnotError::KnotError;
};

/// A canonicalization phase failed to make progress within its iteration cap.
class PipelineStall : public KnotError {
  public:
    PipelineStall(std::string stage_name, const std::string& what)
        : KnotError(stage_name + ": " + what), stage(std::move(stage_name)) {}
    std::string stage;
};

class ConfigError : public KnotError {
  public:
    using KnotError::KnotError;
};

class IntegrityFailure : public KnotError {
  public:
    using KnotError::KnotError;
};

class TooFewSamples : public KnotError {
  public:
    using KnotError::KnotError;
};

class NoGenericProjection : public KnotError {
  public:
    using KnotError::KnotError;
};

class ParseError : public KnotError {
  public:
    ParseError(std::size_t line_no, const std::string& what)
        : KnotError("line " + std::to_string(line_no) + ": " + what), line(line_no) {}
    std::size_t line;
};

}  // namespace thickknot
