#pragma once

#include <stdexcept>
#include <string>

namespace casimir {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Evaluation at a point where the model diverges (e.g. Drude with gamma = 0 at zeta = 0).
class SingularityError : public Error {
public:
    using Error::Error;
};

class UnsupportedOperation : public Error {
public:
    using Error::Error;
};

/// Quadrature or series did not reach the requested tolerance.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, double residual)
        : Error(what + " (achieved residual " + std::to_string(residual) + ")"), residual_(residual) {}
    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

/// Tabulated data queried outside its range.
class RangeError : public Error {
public:
    using Error::Error;
};

/// Local separation between the surfaces is not positive.
class ContactError : public Error {
public:
    ContactError(const std::string& what, double x_nm, double y_nm)
        : Error(what + " at (x, y) = (" + std::to_string(x_nm) + ", " + std::to_string(y_nm) + ") nm"),
          x_nm_(x_nm), y_nm_(y_nm) {}
    double x_nm() const noexcept { return x_nm_; }
    double y_nm() const noexcept { return y_nm_; }

private:
    double x_nm_;
    double y_nm_;
};

/// Sampling grid too coarse for a finite-difference operation.
class PrecisionError : public Error {
public:
    using Error::Error;
};

/// Laplace relaxation did not converge.
class RelaxationError : public Error {
public:
    RelaxationError(const std::string& what, double residual)
        : Error(what + " (max residual " + std::to_string(residual) + ")"), residual_(residual) {}
    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

/// Least-squares design matrix is rank deficient.
class RankError : public Error {
public:
    using Error::Error;
};

class FitError : public Error {
public:
    FitError(const std::string& what, double residual)
        : Error(what + " (final residual " + std::to_string(residual) + ")"), residual_(residual) {}
    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

/// Deflection feedback fixed point diverged (snap to contact).
class InstabilityError : public Error {
public:
    InstabilityError(const std::string& what, double z_nm)
        : Error(what + " near z = " + std::to_string(z_nm) + " nm"), z_nm_(z_nm) {}
    double z_nm() const noexcept { return z_nm_; }

private:
    double z_nm_;
};

/// Independent traces disagree beyond their noise.
class ConsistencyError : public Error {
public:
    using Error::Error;
};

/// Malformed or incomplete configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace casimir
