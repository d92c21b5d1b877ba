// Copyright 2026 The AGED Authors.
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

#ifndef AGED_CLI_H_
#define AGED_CLI_H_

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace aged {

// Runs one subcommand. args excludes the program name. Returns 0 on
// success, 1 on validation errors (including usage errors), 2 on runtime
// failures.
int Dispatch(const std::vector<std::string> &args, std::ostream &out,
             std::ostream &err);
int Dispatch(int argc, char **argv);

// Lowercase hex SHA-256 of a file's bytes.
std::string FileDigest(const std::filesystem::path &path);

}  // namespace aged

#endif  // AGED_CLI_H_
