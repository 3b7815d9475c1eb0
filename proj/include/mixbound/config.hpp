#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "mixbound/bounds.hpp"
#include "mixbound/estimators.hpp"
#include "mixbound/isoperimetry.hpp"
#include "mixbound/targets.hpp"

namespace mixbound {

// Thrown by parse_config with every schema violation listed.
class ConfigError : public std::runtime_error {
  public:
    explicit ConfigError(std::vector<std::string> violations);
    const std::vector<std::string>& violations() const { return violations_; }

  private:
    std::vector<std::string> violations_;
};

struct TargetConfig {
    std::string kind;  // gaussian | diag_gaussian | logistic | pcn_gaussian
    int d = 0;
    double sigma0_sq = 1.0;
    Vec variances;
    std::vector<Vec> covariates;
    std::vector<int> responses;
    std::string data_csv;
    std::string psi = "zero";  // pcn_gaussian: zero | quadratic
    double L_psi = 0.0;
};

struct KernelCfgSpec {
    std::string kind;  // rwm | pcn
    double sigma = 0.0;
    double rho = 0.0;
    double varsigma = 0.0;
};

struct TransferCfg {
    std::string kind;  // lipschitz | density | osc
    double value = 0.0;
};

struct MinorantConfig {
    std::string kind;  // strongly_logconcave | laplace | subbotin | poincare | logsobolev
    double m = 0.0, gamma = 0.0, lambda = 0.0, q = 2.0, c_q = 0.0;
    double alpha = 0.0, k_alpha = 0.0;
    std::vector<TransferCfg> transfers;
};

struct ExperimentConfig {
    std::string command;  // bound | sample | verify | scan
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::string out_dir = ".";

    TargetConfig target;
    bool has_target = false;
    KernelCfgSpec kernel;
    bool has_kernel = false;
    MinorantConfig minorant;
    bool has_minorant = false;

    double u0 = kNaN;
    std::string warm_start_kind;
    double eps_mix = 1.0;
    long long n = 100000;
    int variant = 1;
    std::string suite;
    std::vector<int> dims;
    std::string metric = "gap";
    std::vector<std::string> functionals;
    std::string init = "mode";  // mode | exact
    long long thin = 0;
    int jobs = 1;
};

ExperimentConfig parse_config(const std::string& text);

// Builders used by run_experiment and the tests.
TargetSpec build_target(const TargetConfig& cfg);
PcnTarget build_pcn_target(const TargetConfig& cfg);
IsoMinorant build_minorant(const MinorantConfig& cfg);
Functional build_functional(const std::string& name);

// Dispatches the configured command; writes JSON/CSV artifacts into out_dir.
// Returns the process exit code: 0 pass, 1 verification failure, 2 config
// error, 3 I/O failure.
int run_experiment(const ExperimentConfig& config);

}  // namespace mixbound
