/*
 Copyright 2026 The flipopt Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#pragma once

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace test {

namespace fs = std::filesystem;

/// Fresh empty directory under the build tree.
inline fs::path scratch(const std::string& name) {
    const fs::path p = fs::path(FLIPOPT_TEST_TMP) / name;
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

inline std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void spit(const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    out << text;
}

struct Proc {
    int code = -1;
    std::string output;  ///< stdout and stderr interleaved
};

/// Runs a shell command line and captures its output and exit status.
inline Proc run(const std::string& cmdline) {
    Proc p;
    FILE* f = ::popen((cmdline + " 2>&1").c_str(), "r");
    if (!f) return p;
    std::array<char, 4096> buf{};
    std::size_t n;
    while ((n = std::fread(buf.data(), 1, buf.size(), f)) > 0) p.output.append(buf.data(), n);
    const int status = ::pclose(f);
    p.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return p;
}

inline std::string cli() { return std::string("\"") + FLIPOPT_CLI + "\""; }

inline std::string q(const fs::path& p) { return "\"" + p.string() + "\""; }

}  // namespace test
