// scorelens/include/scorelens/error.h
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#ifndef SCORELENS_ERROR_H_
#define SCORELENS_ERROR_H_

#include <stdexcept>
#include <string>

namespace scorelens {

// Error categories map onto CLI exit codes: config/io -> 2, stat -> 1.
enum class ErrorKind { kConfig, kIo, kStat };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string &msg)
      : std::runtime_error(msg), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

inline Error ConfigError(const std::string &msg) {
  return Error(ErrorKind::kConfig, msg);
}
inline Error IoError(const std::string &msg) {
  return Error(ErrorKind::kIo, msg);
}
inline Error StatError(const std::string &msg) {
  return Error(ErrorKind::kStat, msg);
}

}  // namespace scorelens

#endif  // SCORELENS_ERROR_H_
