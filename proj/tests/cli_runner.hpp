#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

namespace slr::test {

namespace fs = std::filesystem;

inline std::string shell_quote(const std::string& s) {
    std::string out = "'";
    for (char c : s) out += c == '\'' ? std::string("'\\''") : std::string(1, c);
    return out + "'";
}

// Runs the CLI with stdout and stderr captured into files; returns its exit status.
inline int run_cli(const std::string& args, const fs::path& log_dir, const std::string& env = "") {
    fs::create_directories(log_dir);
    const std::string cmd = env + (env.empty() ? "" : " ") + shell_quote(SLR_CLI_PATH) + " " + args + " >" +
                            shell_quote((log_dir / "stdout.txt").string()) + " 2>" +
                            shell_quote((log_dir / "stderr.txt").string());
    const int raw = std::system(cmd.c_str());
    return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

inline std::string read_file(const fs::path& path) {
    std::ifstream f(path, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

inline void write_file(const fs::path& path, const std::string& text) {
    fs::create_directories(path.parent_path());
    std::ofstream(path, std::ios::binary) << text;
}

inline std::map<std::string, std::string> directory_contents(const fs::path& dir) {
    std::map<std::string, std::string> out;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.is_regular_file()) out[entry.path().filename().string()] = read_file(entry.path());
    return out;
}

inline fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("slr_test_" + std::to_string(::getpid()) + "_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

// Every subcommand over one corpus, all outputs into `out`. Returns the first non-zero status.
inline int run_full_pipeline(const fs::path& pubs, const fs::path& inst, const fs::path& out, const std::string& lambda,
                             const std::string& env = "") {
    const std::string common = "--pubs " + shell_quote(pubs.string()) + " --inst " + shell_quote(inst.string()) +
                               " --out " + shell_quote(out.string());
    const fs::path logs = out.parent_path() / (out.filename().string() + "_logs");
    const std::string steps[] = {
        "validate", "validate --format json", "build --lambda " + lambda, "build --format json --lambda " + lambda,
        "eval --lambda " + lambda, "powerlaw", "kde --rows 18 --cols 36 --lambda " + lambda,
    };
    for (const auto& step : steps)
        if (int rc = run_cli(step + " " + common, logs, env); rc != 0) return rc;
    for (const char* metric : {"spatialleaderrank", "leaderrank", "pagerank", "indegree", "betweenness", "closeness",
                               "publication"})
        if (int rc = run_cli(std::string("rank --metric ") + metric + " --lambda " + lambda + " " + common, logs, env);
            rc != 0)
            return rc;
    return 0;
}

}  // namespace slr::test
