#pragma once

#include <stdexcept>
#include <string>

namespace qstar {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input and validation failures.
class ParseError : public Error {
 public:
  using Error::Error;
};

class NotManifold : public Error {
 public:
  using Error::Error;
};

class NotConvex : public Error {
 public:
  NotConvex(const std::string& what, int vertex, int face, double distance)
      : Error(what), vertex_(vertex), face_(face), distance_(distance) {}
  int vertex() const { return vertex_; }
  int face() const { return face_; }
  /// Signed distance of the worst vertex above the supporting plane of `face`.
  double distance() const { return distance_; }

 private:
  int vertex_;
  int face_;
  double distance_;
};

class DegenerateFace : public Error {
 public:
  using Error::Error;
};

class IndexOutOfRange : public Error {
 public:
  using Error::Error;
};

class MismatchedLocus : public Error {
 public:
  using Error::Error;
};

// Geodesic machinery.
class NonAdjacentFaces : public Error {
 public:
  using Error::Error;
};

class StalledTrace : public Error {
 public:
  using Error::Error;
};

// Loop construction.
class NoIntersection : public Error {
 public:
  NoIntersection(const std::string& what, double length) : Error(what), length_(length) {}
  double traced_length() const { return length_; }

 private:
  double length_;
};

class StartAtVertex : public Error {
 public:
  using Error::Error;
};

/// The branches met, but the resulting closed curve is not a quasigeodesic loop.
class LoopConstructionError : public Error {
 public:
  using Error::Error;
};

class SubdivisionFailure : public Error {
 public:
  using Error::Error;
};

class PropagationFailure : public Error {
 public:
  using Error::Error;
};

/// A structural invariant of the unfolding pipeline failed. Carries a JSON
/// witness (serialized) describing the offending geometry.
class InvariantViolation : public Error {
 public:
  InvariantViolation(const std::string& what, std::string witness_json = "{}")
      : Error(what), witness_(std::move(witness_json)) {}
  const std::string& witness() const { return witness_; }

 private:
  std::string witness_;
};

class NonDiskResult : public InvariantViolation {
 public:
  using InvariantViolation::InvariantViolation;
};

class OverlapDetected : public InvariantViolation {
 public:
  using InvariantViolation::InvariantViolation;
};

class NoSupportingSegment : public InvariantViolation {
 public:
  using InvariantViolation::InvariantViolation;
};

class LemmaViolation : public InvariantViolation {
 public:
  using InvariantViolation::InvariantViolation;
};

}  // namespace qstar
