#pragma once

#include <stdexcept>

namespace infbin {

// Grammar violation in one of the text formats. CLI exit status 2.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Semantically invalid request (bad move, impossible index, ...). CLI exit status 3,
// except InvalidParams which the CLI treats as a usage error (exit 2).
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An enumeration or search budget was exceeded. CLI exit status 4.
class ResourceCapError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class MoveTooLarge : public DomainError {
 public:
  using DomainError::DomainError;
};

class ProjectionTooLarge : public DomainError {
 public:
  using DomainError::DomainError;
};

class InvalidParams : public DomainError {
 public:
  using DomainError::DomainError;
};

class IndexOutOfRange : public DomainError {
 public:
  using DomainError::DomainError;
};

class InvalidDistribution : public DomainError {
 public:
  using DomainError::DomainError;
};

class LetterTooLarge : public DomainError {
 public:
  using DomainError::DomainError;
};

class NotSynchronizable : public DomainError {
 public:
  using DomainError::DomainError;
};

class UniverseTooLarge : public ResourceCapError {
 public:
  using ResourceCapError::ResourceCapError;
};

class SubsetSpaceTooLarge : public ResourceCapError {
 public:
  using ResourceCapError::ResourceCapError;
};

}  // namespace infbin
