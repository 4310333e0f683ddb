#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

// Helpers for integration tests that drive the installed binary.

namespace testsupport {

namespace fs = std::filesystem;

struct CliResult {
    int exit_code = -1;
    std::string output;  // stdout + stderr
};

inline CliResult run_cli(const std::string& args) {
    static int counter = 0;
    fs::path log = fs::temp_directory_path() /
                   ("ivnow_cli_out_" + std::to_string(counter++) + ".log");
    std::string cmd =
        std::string(IVNOW_BIN) + " " + args + " > " + log.string() + " 2>&1";
    int status = std::system(cmd.c_str());
    CliResult result;
    if (status >= 0)
        result.exit_code = WEXITSTATUS(status);
    std::ifstream in(log);
    std::ostringstream buf;
    buf << in.rdbuf();
    result.output = buf.str();
    fs::remove(log);
    return result;
}

inline std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline void write_file(const fs::path& path, const std::string& content) {
    fs::create_directories(path.parent_path());
    std::ofstream out(path);
    out << content;
}

inline fs::path fresh_dir(const std::string& name) {
    fs::path dir = fs::temp_directory_path() / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

}  // namespace testsupport
