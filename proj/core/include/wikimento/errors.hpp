#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace wikimento {

// Base for everything this library throws on purpose.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class MalformedDate : public Error {
public:
  using Error::Error;
};

class MalformedTimeMap : public Error {
public:
  using Error::Error;
};

class MalformedExport : public Error {
public:
  MalformedExport(const std::string& what, std::size_t byte_offset)
      : Error(what + " (byte " + std::to_string(byte_offset) + ")"),
        byte_offset_(byte_offset) {}

  std::size_t byte_offset() const { return byte_offset_; }

private:
  std::size_t byte_offset_;
};

class MalformedEpisodeList : public Error {
public:
  MalformedEpisodeList(const std::string& what, std::size_t row)
      : Error(what + " (row " + std::to_string(row) + ")"), row_(row) {}

  std::size_t row() const { return row_; }

private:
  std::size_t row_;
};

class MalformedLogLine : public Error {
public:
  using Error::Error;
};

class HttpError : public Error {
public:
  HttpError(int status, const std::string& uri)
      : Error("HTTP " + std::to_string(status) + " fetching " + uri),
        status_(status) {}

  int status() const { return status_; }

private:
  int status_;
};

class NetworkError : public Error {
public:
  using Error::Error;
};

class EmptyCandidates : public Error {
public:
  EmptyCandidates() : Error("candidate list is empty") {}
};

class OrderViolation : public Error {
public:
  using Error::Error;
};

class NoCapturedMemento : public Error {
public:
  NoCapturedMemento() : Error("no memento maps to any revision") {}
};

class ZoneTooLarge : public Error {
public:
  using Error::Error;
};

class IoError : public Error {
public:
  using Error::Error;
};

}  // namespace wikimento
