// Copyright 2026 The audiorf Authors. All Rights Reserved.
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

#ifndef AUDIORF_CLI_H_
#define AUDIORF_CLI_H_

#include <iosfwd>
#include <string>
#include <vector>

namespace audiorf {

// Exit codes: 0 success, 2 bad arguments, 1 runtime failure.
int cli_main(int argc, const char* const* argv);
// args excludes the program name.
int cli_main(const std::vector<std::string>& args, std::ostream& out,
             std::ostream& err);

}  // namespace audiorf

#endif  // AUDIORF_CLI_H_
