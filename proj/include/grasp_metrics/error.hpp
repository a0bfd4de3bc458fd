/* Copyright 2026 The grasp_metrics Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace grasp_metrics {

enum class Errc {
  WrongPointCount,
  NonFiniteCoordinate,
  Io,
  Parse,
  InvalidParameter,
  UnknownDescriptor,
  UnsupportedDescriptor,
  EigenFailure,
  NotPsd,
  DimensionMismatch,
  DescriptorMismatch,
  EmptyPopulation,
  LengthMismatch,
  NumericalFailure,
};

inline std::string_view errc_name(Errc code) {
  switch (code) {
    case Errc::WrongPointCount: return "WrongPointCount";
    case Errc::NonFiniteCoordinate: return "NonFiniteCoordinate";
    case Errc::Io: return "IoError";
    case Errc::Parse: return "ParseError";
    case Errc::InvalidParameter: return "InvalidParameter";
    case Errc::UnknownDescriptor: return "UnknownDescriptor";
    case Errc::UnsupportedDescriptor: return "UnsupportedDescriptor";
    case Errc::EigenFailure: return "EigenFailure";
    case Errc::NotPsd: return "NotPsd";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::DescriptorMismatch: return "DescriptorMismatch";
    case Errc::EmptyPopulation: return "EmptyPopulation";
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::NumericalFailure: return "NumericalFailure";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what),
        code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

/// Process exit status for a failure: 1 usage/configuration, 2 data
/// validation, 3 numerical.
inline int exit_code_for(Errc code) {
  switch (code) {
    case Errc::InvalidParameter:
    case Errc::UnknownDescriptor:
    case Errc::UnsupportedDescriptor:
    case Errc::DescriptorMismatch:
      return 1;
    case Errc::WrongPointCount:
    case Errc::NonFiniteCoordinate:
    case Errc::Io:
    case Errc::Parse:
    case Errc::EmptyPopulation:
    case Errc::LengthMismatch:
      return 2;
    case Errc::EigenFailure:
    case Errc::NotPsd:
    case Errc::DimensionMismatch:
    case Errc::NumericalFailure:
      return 3;
  }
  return 3;
}

}  // namespace grasp_metrics
