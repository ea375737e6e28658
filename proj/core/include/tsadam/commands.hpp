#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace tsadam::commands {

// Each command validates its arguments, writes CSV (and optional SVG)
// artifacts under out_dir, and returns a process exit status: 0 for success,
// 1 when a certification run does not hold. Everything else is signalled by
// the typed exceptions in errors.hpp.

struct ModulationArgs {
    std::vector<double> beta1{0.8, 0.9, 0.95};
    double beta2 = 0.999;
    long long t_max = 100000;
    bool emit_svg = true;
    std::string out_dir = "out";

    std::map<std::string, std::string> describe() const;
};
int cmd_modulation(const ModulationArgs& args);

struct CertifyArgs {
    long horizon = 5000;
    std::vector<double> deltas{0.0, 0.01, 0.05};
    std::vector<int> dims{1, 10};
    int seeds = 3;
    std::uint64_t seed_base = 9001;
    double curvature = 1.0;
    double grad_bound = 1.0;
    // Replaces the grid with a heavy-drift run whose bound is fed one tenth
    // of the true drift; certification must then fail (exit 1).
    bool negative_control = false;
    bool detail_csv = true;  // per-run (t, regret, bound, margin) files
    std::string out_dir = "out";

    std::map<std::string, std::string> describe() const;
};
int cmd_certify(const CertifyArgs& args);

struct TrainArgs {
    std::string config_path;
    // Overrides for the parsed config; empty string / 0 means keep.
    std::string seeds;
    std::vector<std::string> optimizers;
    std::string schedule;
    std::string noise;
    int batch = 0;
    bool emit_svg = true;
    std::string out_dir = "out";

    std::map<std::string, std::string> describe() const;
};
int cmd_train(const TrainArgs& args);

struct SynthArgs {
    std::string config_path;  // [series] section source
    std::string data_path;    // decomposition mode when nonempty
    int period = 24;          // decomposition period for --data mode
    int channel = -1;         // -1 = last channel
    // Generator overrides (applied over the config / defaults); negative
    // numbers mean keep.
    long length = -1;
    long long seed = -1;
    std::string out_dir = "out";

    std::map<std::string, std::string> describe() const;
};
int cmd_synth(const SynthArgs& args);

struct FlopsArgs {
    long long n = 10000000;
    std::string out_dir = "out";

    std::map<std::string, std::string> describe() const;
};
int cmd_flops(const FlopsArgs& args);

}  // namespace tsadam::commands
