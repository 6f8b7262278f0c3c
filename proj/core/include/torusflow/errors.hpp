#pragma once

#include <stdexcept>
#include <string>

namespace torusflow {

/// Base class for all torusflow failures. Carries a formatted message;
/// subclasses keep the structured context as public members.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// A metric failed the pointwise SPD test (det <= 1e-12 or g_11 <= 0).
class NonSPDMetric : public Error {
public:
  NonSPDMetric(int ix, int iy, double min_eigenvalue)
      : Error("metric not SPD at point (" + std::to_string(ix) + "," + std::to_string(iy) +
              "), min eigenvalue " + std::to_string(min_eigenvalue)),
        ix(ix), iy(iy), min_eigenvalue(min_eigenvalue) {}
  int ix, iy;
  double min_eigenvalue;
};

/// Flow variant needs psi/phi and the state does not carry it.
class MissingAuxiliaryField : public Error {
public:
  explicit MissingAuxiliaryField(const std::string& which)
      : Error("flow variant requires auxiliary field '" + which + "' which is absent") {}
};

/// A field became non-finite, or the time step violates the stability bound.
class StabilityFailure : public Error {
public:
  StabilityFailure(double time, const std::string& what_failed)
      : Error("numerical stability lost at time " + std::to_string(time) + ": " + what_failed),
        time(time) {}
  double time;
};

/// Heat solution lost strict positivity.
class PositivityLoss : public Error {
public:
  PositivityLoss(double tau, int ix, int iy, double value)
      : Error("positivity lost at tau=" + std::to_string(tau) + " point (" + std::to_string(ix) +
              "," + std::to_string(iy) + "), f=" + std::to_string(value)),
        tau(tau), ix(ix), iy(iy), value(value) {}
  double tau;
  int ix, iy;
  double value;
};

/// A tau index without both neighbours was passed to a centered-in-time evaluation.
class BoundaryTime : public Error {
public:
  explicit BoundaryTime(int tau_index)
      : Error("tau index " + std::to_string(tau_index) + " has no interior neighbours"),
        tau_index(tau_index) {}
  int tau_index;
};

/// alpha == beta (or alpha == 0) in a Harnack form that forbids it.
class DegenerateParams : public Error {
public:
  explicit DegenerateParams(const std::string& msg) : Error("degenerate parameters: " + msg) {}
};

/// An operation specific to one flow variant was called on another.
class WrongVariant : public Error {
public:
  explicit WrongVariant(const std::string& msg) : Error("wrong flow variant: " + msg) {}
};

/// Heat solution parameters do not match the theorem being checked.
class WrongHeatParams : public Error {
public:
  explicit WrongHeatParams(const std::string& msg) : Error("wrong heat parameters: " + msg) {}
};

/// Space-time path endpoints are not time ordered (or the path is otherwise unusable).
class PathInfeasible : public Error {
public:
  explicit PathInfeasible(const std::string& msg) : Error("infeasible space-time path: " + msg) {}
};

/// Order fitting needs at least 3 refinement levels.
class InsufficientLevels : public Error {
public:
  explicit InsufficientLevels(int got)
      : Error("convergence order fit needs >= 3 levels, got " + std::to_string(got)), got(got) {}
  int got;
};

/// Configuration file could not be parsed or validated.
class ConfigError : public Error {
public:
  ConfigError(int line, const std::string& field, const std::string& msg)
      : Error("config error (line " + std::to_string(line) + ", field '" + field + "'): " + msg),
        line(line), field(field) {}
  int line;
  std::string field;
};

/// A cached stage artifact does not match the hash of the producing config section.
class StaleCache : public Error {
public:
  explicit StaleCache(const std::string& msg) : Error("stale cache: " + msg) {}
};

} // namespace torusflow
