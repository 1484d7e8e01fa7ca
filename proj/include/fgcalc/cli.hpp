#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "fgcalc/errors.hpp"

namespace fgcalc {

struct RunConfig {
    std::string subcommand;  // diff, invert, expand, corpus, kernel-check
    std::string pair;
    std::string nodes = "geometric:q=0.5";
    std::string params = "geometric:A=0.3,p=0.4";
    std::string function = "inv1mcx:c=0.3";
    std::string method = "direct";
    int order = 6;
    int size = 14;
    int max_order = 40;
    std::string probe = "0.1";
    double tolerance = 0;  // 0 picks the subcommand default
    std::uint64_t seed = 1;
    int samples = 1000;
    int sweep = 0;
    std::string case_id;
    std::vector<std::string> overrides;  // k=v lists for corpus --set
    bool verify = false;
    bool fg = false;
    bool list = false;
    int digits = 0;  // 0 picks the subcommand default
    std::string json_path, csv_path;
};

// Exit codes: 0 pass, 1 numeric check failed, 2 usage, 3 numeric-domain error.
int exit_code_for(ErrorKind kind);

// Throws FgError(Usage) on bad arguments. `help` receives the help text
// when --help is given; the returned config then has an empty subcommand.
RunConfig parse_args(const std::vector<std::string>& argv, std::string* help = nullptr);

// Runs one subcommand. Reports go to `out`, diagnostics to `err`.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

// parse_args + run with every error mapped to its exit code.
int main_entry(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err);

}  // namespace fgcalc
