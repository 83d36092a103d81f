#pragma once

#include <stdexcept>
#include <string>

namespace apptsched {

// Invalid parameter values or violated preconditions.
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

// Schedule / realization / instance lengths disagree.
struct SizeMismatch : DomainError {
  using DomainError::DomainError;
};

// A cumulative control does not carry the required total mass.
struct MassMismatch : DomainError {
  using DomainError::DomainError;
};

// Analytics that are only defined under p*alpha > mu*H.
struct NotOverloaded : DomainError {
  using DomainError::DomainError;
};

// sigma == 0, so the diffusion constants are undefined.
struct DegenerateNoise : DomainError {
  using DomainError::DomainError;
};

// Quadrature did not converge, or a result came out non-finite.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace apptsched
