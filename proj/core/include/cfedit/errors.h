// Copyright 2026 The cfedit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CFEDIT_ERRORS_H_
#define CFEDIT_ERRORS_H_

#include <stdexcept>
#include <string>

namespace cfedit {

// Base class for every error raised by the library. Each subclass names one
// failure mode so callers (and the CLI exit-code mapping) can dispatch on it.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define CFEDIT_DEFINE_ERROR(Name)  \
  class Name : public Error {      \
   public:                         \
    using Error::Error;            \
  }

// assignment
CFEDIT_DEFINE_ERROR(InstanceTooLarge);
CFEDIT_DEFINE_ERROR(NoFeasibleAssignment);
CFEDIT_DEFINE_ERROR(ShapeError);
CFEDIT_DEFINE_ERROR(IndexError);
CFEDIT_DEFINE_ERROR(InfeasiblePair);
CFEDIT_DEFINE_ERROR(InvalidGraph);

// gnn
CFEDIT_DEFINE_ERROR(DimensionMismatch);
CFEDIT_DEFINE_ERROR(IsolatedNode);
CFEDIT_DEFINE_ERROR(DivergenceError);
CFEDIT_DEFINE_ERROR(InvalidConfig);

// lexicon
CFEDIT_DEFINE_ERROR(UnknownWord);
CFEDIT_DEFINE_ERROR(EmptyGraph);

// classifier / editor / metrics
CFEDIT_DEFINE_ERROR(DegenerateDataset);
CFEDIT_DEFINE_ERROR(ScorerUnavailable);
CFEDIT_DEFINE_ERROR(EmptyInput);
CFEDIT_DEFINE_ERROR(DegenerateLoss);

// file formats
CFEDIT_DEFINE_ERROR(ParseError);
CFEDIT_DEFINE_ERROR(IoError);

#undef CFEDIT_DEFINE_ERROR

}  // namespace cfedit

#endif  // CFEDIT_ERRORS_H_
