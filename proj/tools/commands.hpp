#pragma once

#include <string>

namespace pathsum::cli {

struct RunConfig {
    std::string command;
    std::string spec_path;
    std::string preset;
    std::string out;
    std::string gbf_table;  // kernel: optional l,re,im,modulus table
    std::string engine = "series";
    std::string frame = "lab";
    std::string res = "81x81";
    int grid = 513;  // points per period
    double tol = 1e-8;
    int kmax = 40;
    double t_max = 1.0;  // periods
    int threads = 0;
    int l = 0;
    bool l_set = false;
    bool paper_sign = false;
    bool paper_rabi_scale = false;
};

// Returns the process exit status. Errors are printed as one JSON line on stderr.
int run(const RunConfig& cfg);

}  // namespace pathsum::cli
