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

#ifndef CFEDIT_TESTS_TEST_PATHS_H_
#define CFEDIT_TESTS_TEST_PATHS_H_

#include <filesystem>
#include <string>

namespace cfedit::test {

inline std::filesystem::path DataPath(const std::string& name) {
  return std::filesystem::path(CFEDIT_TEST_DATA_DIR) / name;
}

inline std::filesystem::path FixturePath(const std::string& name) {
  return std::filesystem::path(CFEDIT_TEST_FIXTURE_DIR) / name;
}

}  // namespace cfedit::test

#endif  // CFEDIT_TESTS_TEST_PATHS_H_
