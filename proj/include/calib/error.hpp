/*
 * Copyright 2026 The calib Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef CALIB_ERROR_HPP
#define CALIB_ERROR_HPP

#include <stdexcept>
#include <string>

namespace calib {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define CALIB_DEFINE_ERROR(Name)        \
  class Name : public Error {           \
   public:                              \
    using Error::Error;                 \
  }

CALIB_DEFINE_ERROR(ParseError);
CALIB_DEFINE_ERROR(ValidationError);
CALIB_DEFINE_ERROR(IoError);
CALIB_DEFINE_ERROR(DimensionMismatch);
CALIB_DEFINE_ERROR(IndexOutOfRange);
CALIB_DEFINE_ERROR(MonotonicityViolation);
CALIB_DEFINE_ERROR(EmptyJournal);
CALIB_DEFINE_ERROR(TooLarge);
CALIB_DEFINE_ERROR(Infeasible);
CALIB_DEFINE_ERROR(InfeasibleSolution);
CALIB_DEFINE_ERROR(DegenerateVariance);
CALIB_DEFINE_ERROR(UnknownClassifier);
CALIB_DEFINE_ERROR(UnreachableRecall);
CALIB_DEFINE_ERROR(EmptyPositives);
CALIB_DEFINE_ERROR(InvalidSpec);
CALIB_DEFINE_ERROR(InvalidArgument);

#undef CALIB_DEFINE_ERROR

}  // namespace calib

#endif  // CALIB_ERROR_HPP
