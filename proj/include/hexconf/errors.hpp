#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace hexconf {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Malformed input file (not valid JSON or wrong shape).
class ParseError : public Error {
public:
  using Error::Error;
};

/// Input parsed but violates a combinatorial invariant.
class ValidationError : public Error {
public:
  using Error::Error;
};

/// An edge weight at or below -1.
class EtaOutOfRange : public ValidationError {
public:
  EtaOutOfRange(const std::string& msg, int edge_id, double eta)
      : ValidationError(msg), edge_id_(edge_id), eta_(eta) {}
  int edge_id() const noexcept { return edge_id_; }
  double eta() const noexcept { return eta_; }

private:
  int edge_id_;
  double eta_;
};

/// A length or angle argument outside its mathematical domain.
class DomainError : public Error {
public:
  using Error::Error;
};

/// A conformal factor outside the admissible polytope.
/// `margin` is cos(a_i + a_j) + eta for the offending edge (<= floor).
class NotAdmissible : public Error {
public:
  NotAdmissible(const std::string& msg, double margin, int edge_id = -1)
      : Error(msg), margin_(margin), edge_id_(edge_id) {}
  double margin() const noexcept { return margin_; }
  int edge_id() const noexcept { return edge_id_; }

private:
  double margin_;
  int edge_id_;
};

class LengthMismatch : public Error {
public:
  using Error::Error;
};

/// Matrix expected symmetric positive definite is not.
class NotSPD : public Error {
public:
  NotSPD(const std::string& msg, double min_eigenvalue)
      : Error(msg), min_eigenvalue_(min_eigenvalue) {}
  double min_eigenvalue() const noexcept { return min_eigenvalue_; }

private:
  double min_eigenvalue_;
};

/// Curvature Jacobian lost positive definiteness during a flow or solve.
class JacobianNotPD : public NotSPD {
public:
  using NotSPD::NotSPD;
};

}  // namespace hexconf
