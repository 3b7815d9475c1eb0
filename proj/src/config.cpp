#include "mixbound/config.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "mixbound/samplers.hpp"

namespace mixbound {

using nlohmann::ordered_json;

namespace {

std::string join(const std::vector<std::string>& parts) {
    std::string out = "invalid config:";
    for (const std::string& p : parts) out += "\n  - " + p;
    return out;
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> violations)
    : std::runtime_error(join(violations)), violations_(std::move(violations)) {}

namespace {

bool in(const std::string& v, std::initializer_list<const char*> set) {
    for (const char* s : set)
        if (v == s) return true;
    return false;
}

double num_field(const ordered_json& j, const char* key, double fallback,
                 std::vector<std::string>& errs) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_number()) {
        errs.push_back(std::string(key) + ": expected a number");
        return fallback;
    }
    return j[key].get<double>();
}

TargetConfig parse_target(const ordered_json& j, std::vector<std::string>& errs) {
    TargetConfig t;
    if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) {
        errs.push_back("target: object with string field 'kind' required");
        return t;
    }
    t.kind = j["kind"].get<std::string>();
    if (!in(t.kind, {"gaussian", "diag_gaussian", "logistic", "pcn_gaussian"})) {
        errs.push_back("target.kind: unknown kind '" + t.kind + "'");
        return t;
    }
    if (t.kind == "gaussian") {
        t.d = static_cast<int>(num_field(j, "d", 0, errs));
        t.sigma0_sq = num_field(j, "sigma0_sq", 1.0, errs);
        if (t.d < 1) errs.push_back("target.d: must be >= 1");
        if (!(t.sigma0_sq > 0)) errs.push_back("target.sigma0_sq: must be > 0");
    } else if (t.kind == "diag_gaussian" || t.kind == "pcn_gaussian") {
        if (!j.contains("variances") || !j["variances"].is_array() || j["variances"].empty()) {
            errs.push_back("target.variances: non-empty array required");
        } else {
            for (const auto& v : j["variances"]) {
                if (!v.is_number() || !(v.get<double>() > 0)) {
                    errs.push_back("target.variances: entries must be numbers > 0");
                    break;
                }
                t.variances.push_back(v.get<double>());
            }
            t.d = static_cast<int>(t.variances.size());
        }
        if (t.kind == "pcn_gaussian") {
            t.L_psi = num_field(j, "L_psi", 0.0, errs);
            if (t.L_psi < 0) errs.push_back("target.L_psi: must be >= 0");
            if (j.contains("psi")) {
                t.psi = j["psi"].is_string() ? j["psi"].get<std::string>() : "?";
                if (!in(t.psi, {"zero", "quadratic"}))
                    errs.push_back("target.psi: expected 'zero' or 'quadratic'");
            }
        }
    } else {  // logistic
        t.sigma0_sq = num_field(j, "sigma0_sq", 1.0, errs);
        if (!(t.sigma0_sq > 0)) errs.push_back("target.sigma0_sq: must be > 0");
        if (j.contains("data_csv")) {
            if (j["data_csv"].is_string()) t.data_csv = j["data_csv"].get<std::string>();
            else errs.push_back("target.data_csv: expected a string path");
        } else if (j.contains("covariates") && j.contains("responses")) {
            for (const auto& row : j["covariates"]) {
                Vec r;
                for (const auto& v : row) r.push_back(v.get<double>());
                t.covariates.push_back(std::move(r));
            }
            for (const auto& y : j["responses"]) t.responses.push_back(y.get<int>());
            if (t.covariates.size() != t.responses.size() || t.covariates.empty()) {
                errs.push_back("target: covariates/responses must be non-empty and equal length");
            }
        } else {
            errs.push_back("target: logistic needs 'data_csv' or 'covariates'+'responses'");
        }
    }
    return t;
}

KernelCfgSpec parse_kernel(const ordered_json& j, std::vector<std::string>& errs) {
    KernelCfgSpec k;
    if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) {
        errs.push_back("kernel: object with string field 'kind' required");
        return k;
    }
    k.kind = j["kind"].get<std::string>();
    if (k.kind == "rwm") {
        k.sigma = num_field(j, "sigma", 0.0, errs);
        k.varsigma = num_field(j, "varsigma", 0.0, errs);
        if (!(k.sigma > 0) && !(k.varsigma > 0))
            errs.push_back("kernel: rwm needs sigma > 0 or varsigma > 0");
    } else if (k.kind == "pcn") {
        k.rho = num_field(j, "rho", 0.0, errs);
        k.varsigma = num_field(j, "varsigma", 0.0, errs);
        if (!(k.rho > 0 && k.rho < 1) && !(k.varsigma > 0))
            errs.push_back("kernel: pcn needs rho in (0,1) or varsigma > 0");
    } else {
        errs.push_back("kernel.kind: unknown kind '" + k.kind + "'");
    }
    return k;
}

MinorantConfig parse_minorant(const ordered_json& j, std::vector<std::string>& errs) {
    MinorantConfig m;
    if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) {
        errs.push_back("minorant: object with string field 'kind' required");
        return m;
    }
    m.kind = j["kind"].get<std::string>();
    if (m.kind == "strongly_logconcave") {
        m.m = num_field(j, "m", 0.0, errs);
        if (!(m.m > 0)) errs.push_back("minorant.m: must be > 0");
    } else if (m.kind == "laplace") {
        // no parameters
    } else if (m.kind == "subbotin") {
        m.alpha = num_field(j, "alpha", 0.0, errs);
        m.k_alpha = num_field(j, "k_alpha", 0.0, errs);
        if (!(m.alpha > 1 && m.alpha < 2)) errs.push_back("minorant.alpha: must lie in (1,2)");
        if (!(m.k_alpha > 0)) errs.push_back("minorant.k_alpha: must be > 0");
    } else if (m.kind == "poincare") {
        m.gamma = num_field(j, "gamma", 0.0, errs);
        if (!(m.gamma > 0)) errs.push_back("minorant.gamma: must be > 0");
    } else if (m.kind == "logsobolev") {
        m.lambda = num_field(j, "lambda", 0.0, errs);
        m.q = num_field(j, "q", 2.0, errs);
        m.c_q = num_field(j, "c_q", 0.0, errs);
        if (!(m.lambda > 0)) errs.push_back("minorant.lambda: must be > 0");
        if (!(m.q > 0 && m.q <= 2)) errs.push_back("minorant.q: must lie in (0,2]");
        if (m.q != 2.0 && !(m.c_q > 0)) errs.push_back("minorant.c_q: must be > 0 when q != 2");
    } else {
        errs.push_back("minorant.kind: unknown kind '" + m.kind + "'");
    }
    if (j.contains("transfers")) {
        if (!j["transfers"].is_array()) {
            errs.push_back("minorant.transfers: expected an array");
        } else {
            for (const auto& tj : j["transfers"]) {
                TransferCfg t;
                t.kind = tj.value("kind", std::string());
                t.value = tj.value("value", 0.0);
                if (!in(t.kind, {"lipschitz", "density", "osc"})) {
                    errs.push_back("minorant.transfers: unknown kind '" + t.kind + "'");
                    continue;
                }
                if (t.kind == "lipschitz" && !(t.value > 0))
                    errs.push_back("minorant.transfers: lipschitz value must be > 0");
                if (t.kind == "density" && !(t.value > 0 && t.value <= 1))
                    errs.push_back("minorant.transfers: density value must lie in (0,1]");
                if (t.kind == "osc" && !(t.value >= 0))
                    errs.push_back("minorant.transfers: osc value must be >= 0");
                m.transfers.push_back(t);
            }
        }
    }
    return m;
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
    std::vector<std::string> errs;
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const std::exception& e) {
        throw ConfigError({std::string("JSON parse failure: ") + e.what()});
    }
    if (!j.is_object()) throw ConfigError({"top level: expected a JSON object"});

    ExperimentConfig c;
    c.command = j.value("command", std::string());
    if (!c.command.empty() && !in(c.command, {"bound", "sample", "verify", "scan"}))
        errs.push_back("command: unknown command '" + c.command + "'");
    if (j.contains("seed")) {
        if (j["seed"].is_number_unsigned() || (j["seed"].is_number_integer() && j["seed"].get<long long>() >= 0)) {
            c.seed = j["seed"].get<std::uint64_t>();
            c.seed_set = true;
        } else {
            errs.push_back("seed: expected a non-negative integer");
        }
    }
    if (j.contains("out")) c.out_dir = j.value("out", std::string("."));
    if (j.contains("target")) {
        c.target = parse_target(j["target"], errs);
        c.has_target = true;
    }
    if (j.contains("kernel")) {
        c.kernel = parse_kernel(j["kernel"], errs);
        c.has_kernel = true;
    }
    if (j.contains("minorant")) {
        c.minorant = parse_minorant(j["minorant"], errs);
        c.has_minorant = true;
    }
    c.u0 = num_field(j, "u0", kNaN, errs);
    if (j.contains("u0") && !(c.u0 > 0)) errs.push_back("u0: must be > 0");
    if (j.contains("warm_start")) {
        if (j["warm_start"].is_string()) c.warm_start_kind = j["warm_start"].get<std::string>();
        if (!in(c.warm_start_kind, {"gaussian-mode", "accepted-proposal", "pcn-gaussian"}))
            errs.push_back("warm_start: unknown kind");
    }
    c.eps_mix = num_field(j, "eps_mix", 1.0, errs);
    if (!(c.eps_mix > 0)) errs.push_back("eps_mix: must be > 0");
    c.n = static_cast<long long>(num_field(j, "n", 100000, errs));
    if (c.n < 1) errs.push_back("n: must be >= 1");
    c.variant = static_cast<int>(num_field(j, "variant", 1, errs));
    if (c.variant < 1 || c.variant > 3) errs.push_back("variant: must be 1, 2 or 3");
    c.suite = j.value("suite", std::string());
    if (!c.suite.empty() &&
        !in(c.suite, {"acceptance-floor", "gap-sandwich", "flow-sandwich", "scaling-slope"}))
        errs.push_back("suite: unknown suite '" + c.suite + "'");
    if (j.contains("dims")) {
        if (!j["dims"].is_array()) {
            errs.push_back("dims: expected an array of integers");
        } else {
            for (const auto& v : j["dims"]) {
                int d = v.is_number() ? v.get<int>() : 0;
                if (d < 1) {
                    errs.push_back("dims: entries must be integers >= 1");
                    break;
                }
                c.dims.push_back(d);
            }
        }
    }
    c.metric = j.value("metric", std::string("gap"));
    if (!in(c.metric, {"gap", "flow", "acceptance"}))
        errs.push_back("metric: expected gap, flow or acceptance");
    if (j.contains("functionals")) {
        for (const auto& f : j["functionals"]) {
            std::string name = f.is_string() ? f.get<std::string>() : "?";
            bool coord = name.size() > 1 && name[0] == 'x' &&
                         name.find_first_not_of("0123456789", 1) == std::string::npos;
            if (!coord && name != "norm" && name != "norm_sq")
                errs.push_back("functionals: unknown functional '" + name + "'");
            c.functionals.push_back(name);
        }
    }
    c.init = j.value("init", std::string("mode"));
    if (!in(c.init, {"mode", "exact"})) errs.push_back("init: expected 'mode' or 'exact'");
    c.thin = static_cast<long long>(num_field(j, "thin", 0, errs));
    if (c.thin < 0) errs.push_back("thin: must be >= 0");
    c.jobs = static_cast<int>(num_field(j, "jobs", 1, errs));
    if (c.jobs < 1) errs.push_back("jobs: must be >= 1");

    if (!errs.empty()) throw ConfigError(std::move(errs));
    return c;
}

namespace {

// Reads "y,a1,...,ad" rows; a single non-numeric header row is skipped.
void load_logistic_csv(const std::string& path, std::vector<Vec>& covariates,
                       std::vector<int>& responses) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open data file: " + path);
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        std::vector<double> row;
        bool numeric = true;
        while (std::getline(ss, cell, ',')) {
            try {
                std::size_t pos = 0;
                double v = std::stod(cell, &pos);
                if (pos == 0) throw std::invalid_argument(cell);
                row.push_back(v);
            } catch (const std::exception&) {
                numeric = false;
                break;
            }
        }
        if (!numeric) {
            if (first) {
                first = false;
                continue;
            }
            throw std::runtime_error("non-numeric row in " + path);
        }
        first = false;
        if (row.size() < 2) throw std::runtime_error("row with fewer than 2 columns in " + path);
        responses.push_back(static_cast<int>(row[0]));
        covariates.emplace_back(row.begin() + 1, row.end());
    }
    if (covariates.empty()) throw std::runtime_error("no data rows in " + path);
}

}  // namespace

TargetSpec build_target(const TargetConfig& cfg) {
    if (cfg.kind == "gaussian") return gaussian_target(cfg.d, cfg.sigma0_sq);
    if (cfg.kind == "diag_gaussian") return diagonal_gaussian_target(cfg.variances);
    if (cfg.kind == "logistic") {
        if (!cfg.data_csv.empty()) {
            std::vector<Vec> covariates;
            std::vector<int> responses;
            load_logistic_csv(cfg.data_csv, covariates, responses);
            return logistic_posterior_target(covariates, responses, cfg.sigma0_sq);
        }
        return logistic_posterior_target(cfg.covariates, cfg.responses, cfg.sigma0_sq);
    }
    throw std::invalid_argument("build_target: '" + cfg.kind + "' is not a TargetSpec kind");
}

PcnTarget build_pcn_target(const TargetConfig& cfg) {
    if (cfg.kind != "pcn_gaussian")
        throw std::invalid_argument("build_pcn_target: kind must be pcn_gaussian");
    double L = cfg.L_psi;
    std::function<double(const Vec&)> psi;
    std::function<Vec(const Vec&)> psi_grad;
    if (cfg.psi == "zero") {
        psi = [](const Vec&) { return 0.0; };
        psi_grad = [](const Vec& x) { return Vec(x.size(), 0.0); };
        L = 0.0;
    } else {  // quadratic: Psi(x) = (L/2)|x|^2
        psi = [L](const Vec& x) { return 0.5 * L * norm_sq(x); };
        psi_grad = [L](const Vec& x) {
            Vec g(x.size());
            for (std::size_t i = 0; i < x.size(); ++i) g[i] = L * x[i];
            return g;
        };
    }
    return make_pcn_target(cfg.variances, std::move(psi), std::move(psi_grad), L);
}

IsoMinorant build_minorant(const MinorantConfig& cfg) {
    IsoMinorant m = [&] {
        if (cfg.kind == "strongly_logconcave") return strongly_logconcave_minorant(cfg.m);
        if (cfg.kind == "laplace") return laplace_profile();
        if (cfg.kind == "subbotin") return subbotin_minorant(cfg.alpha, cfg.k_alpha);
        if (cfg.kind == "poincare") return minorant_from_poincare(cfg.gamma);
        if (cfg.kind == "logsobolev")
            return minorant_from_logsobolev(cfg.lambda, cfg.q, cfg.c_q);
        throw std::invalid_argument("build_minorant: unknown kind '" + cfg.kind + "'");
    }();
    for (const TransferCfg& t : cfg.transfers) {
        if (t.kind == "lipschitz") m = lipschitz_pushforward(m, t.value);
        else if (t.kind == "density") m = density_perturbation(m, t.value);
        else m = osc_perturbation(m, t.value);
    }
    return m;
}

Functional build_functional(const std::string& name) {
    if (name == "norm_sq") return [](const Vec& x) { return norm_sq(x); };
    if (name == "norm") return [](const Vec& x) { return norm(x); };
    if (name.size() > 1 && name[0] == 'x') {
        std::size_t k = std::stoul(name.substr(1));
        if (k < 1) throw std::invalid_argument("build_functional: coordinates are 1-based");
        return [k](const Vec& x) {
            if (k > x.size()) throw std::out_of_range("functional coordinate beyond dimension");
            return x[k - 1];
        };
    }
    throw std::invalid_argument("build_functional: unknown functional '" + name + "'");
}

namespace {

ordered_json report_json(const BoundReport& r) {
    ordered_json j;
    auto put = [&j](const char* key, double v) {
        if (std::isnan(v)) j[key] = nullptr;
        else j[key] = v;
    };
    put("phi_star_lower", r.phi_star_lower);
    put("phi_star_upper", r.phi_star_upper);
    put("phi_star_upper_weak", r.phi_star_upper_weak);
    put("gap_lower", r.gap_lower);
    put("gap_upper", r.gap_upper);
    put("alpha0_lower", r.alpha0_lower);
    put("v_star", r.v_star);
    j["mixing_n"] = r.mixing_n;
    put("mixing_sufficient", r.mixing_sufficient);
    j["mixing_phase_terms"] = r.mixing_phase_terms;
    ordered_json in;
    auto put_in = [&in](const char* key, double v) {
        if (!std::isnan(v)) in[key] = v;
    };
    put_in("m", r.m);
    put_in("L", r.L);
    if (r.d > 0) in["d"] = r.d;
    put_in("varsigma", r.varsigma);
    put_in("sigma", r.sigma);
    put_in("rho", r.rho);
    put_in("eta", r.eta);
    put_in("trace_c", r.trace_c);
    put_in("u0", r.u0);
    put_in("eps_mix", r.eps_mix);
    in["variant"] = r.variant;
    j["inputs"] = in;
    return j;
}

ordered_json stats_json(const ChainStats& s, const std::vector<std::string>& names) {
    ordered_json j;
    j["n_steps"] = s.n_steps;
    j["n_accepted"] = s.n_accepted;
    j["n_nonfinite"] = s.n_nonfinite;
    j["acceptance_rate"] = s.acceptance_rate();
    j["seed"] = s.seed;
    j["final_state"] = s.final_state;
    ordered_json fs = ordered_json::object();
    for (std::size_t k = 0; k < s.functionals.size(); ++k) {
        const FunctionalStats& f = s.functionals[k];
        double count = static_cast<double>(s.n_steps) + 1.0;
        double mean = f.sum_f / count;
        ordered_json fj;
        fj["mean"] = mean;
        fj["variance"] = f.sum_f_sq / count - mean * mean;
        fj["lag1_sum"] = f.sum_lag1;
        fj["sq_increment_sum"] = f.sum_sq_inc;
        fj["initial"] = f.f_init;
        fj["final"] = f.f_final;
        fs[names[k]] = fj;
    }
    j["functionals"] = fs;
    return j;
}

// nlohmann emits shortest-round-trip doubles, so values survive re-parsing
// bit for bit.
void write_json(const std::filesystem::path& path, const ordered_json& j) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
    out << j.dump(2) << "\n";
    if (!out) throw std::runtime_error("write failure: " + path.string());
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
    out << text;
    if (!out) throw std::runtime_error("write failure: " + path.string());
}

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double resolve_u0(const ExperimentConfig& c, const TargetSpec* target, double varsigma,
                  double trace_c) {
    if (!std::isnan(c.u0)) return c.u0;
    if (c.warm_start_kind.empty()) return 10.0;
    WarmStartParams p;
    if (target) {
        p.kappa = target->kappa();
        p.d = target->d;
        p.L = target->L;
        p.dist0_sq = 0.0;
    }
    p.varsigma = varsigma;
    p.trace_c = trace_c;
    if (c.warm_start_kind == "pcn-gaussian" && target) p.L = target->L;
    return warm_start_u0(c.warm_start_kind, p);
}

int run_bound(const ExperimentConfig& c, const std::filesystem::path& out) {
    if (!c.has_kernel || !c.has_target) {
        throw ConfigError({"bound: both 'target' and 'kernel' are required"});
    }
    ordered_json j;
    if (c.kernel.kind == "rwm") {
        TargetSpec target = build_target(c.target);
        double varsigma = c.kernel.varsigma;
        if (!(varsigma > 0)) varsigma = c.kernel.sigma * std::sqrt(target.L * target.d);
        double u0 = resolve_u0(c, &target, varsigma, kNaN);
        BoundReport r = rwm_mixing_time(target.m, target.L, target.d, varsigma, u0,
                                        c.eps_mix, c.variant);
        j = report_json(r);
        if (c.has_minorant) {
            IsoMinorant minorant = build_minorant(c.minorant);
            CloseCoupling cc = rwm_close_coupling(r.alpha0_lower, r.sigma);
            BoundReport iso = mixing_time_iso(minorant, cc, u0, c.eps_mix);
            j["iso"] = report_json(iso);
        }
    } else {
        if (c.target.kind != "pcn_gaussian")
            throw ConfigError({"bound: pcn kernel requires a pcn_gaussian target"});
        double trace_c = 0.0;
        for (double v : c.target.variances) trace_c += v;
        double L = c.target.psi == "zero" ? 0.0 : c.target.L_psi;
        if (!(L > 0)) throw ConfigError({"bound: pcn bound requires quadratic psi with L_psi > 0"});
        double varsigma = c.kernel.varsigma;
        if (!(varsigma > 0)) {
            double eta = std::sqrt(1.0 - c.kernel.rho * c.kernel.rho);
            varsigma = eta * std::sqrt(L * trace_c);
        }
        double u0 = std::isnan(c.u0)
                        ? (c.warm_start_kind == "pcn-gaussian" ? warm_start_pcn_gaussian(L, trace_c)
                                                               : resolve_u0(c, nullptr, varsigma, trace_c))
                        : c.u0;
        BoundReport r = pcn_mixing_time(L, trace_c, varsigma, u0, c.eps_mix, c.variant);
        j = report_json(r);
    }
    write_json(out / "bound_report.json", j);
    return 0;
}

int run_sample(const ExperimentConfig& c, const std::filesystem::path& out) {
    if (!c.has_kernel || !c.has_target) {
        throw ConfigError({"sample: both 'target' and 'kernel' are required"});
    }
    std::vector<Functional> fns;
    for (const std::string& name : c.functionals) fns.push_back(build_functional(name));
    ChainStats stats;
    std::vector<Vec> trajectory;
    if (c.kernel.kind == "rwm") {
        TargetSpec target = build_target(c.target);
        KernelConfig kc = c.kernel.varsigma > 0
                              ? KernelConfig::rwm_varsigma(c.kernel.varsigma, target.L, target.d)
                              : KernelConfig::rwm_sigma(c.kernel.sigma);
        RngStream init_rng = RngStream(c.seed).split(0x1717ull);
        Vec init = (c.init == "exact" && target.exact_sampler) ? target.exact_sampler(init_rng)
                                                               : target.mode;
        if (c.thin > 0) {
            // Re-run in thin-sized segments to record the trajectory.
            Vec x = init;
            stats = ChainStats{};
            long long done = 0;
            bool started = false;
            trajectory.push_back(x);
            while (done < c.n) {
                long long chunk = std::min(c.thin, c.n - done);
                ChainStats part = run_chain(kc, target, x, chunk, c.seed, fns, done);
                x = part.final_state;
                trajectory.push_back(x);
                if (!started) {
                    stats = part;
                    started = true;
                } else {
                    stats.merge(part);
                }
                done += chunk;
            }
        } else {
            stats = run_chain(kc, target, init, c.n, c.seed, fns);
        }
    } else {
        if (c.target.kind != "pcn_gaussian")
            throw ConfigError({"sample: pcn kernel requires a pcn_gaussian target"});
        PcnTarget target = build_pcn_target(c.target);
        KernelConfig kc =
            c.kernel.varsigma > 0
                ? KernelConfig::pcn_varsigma(c.kernel.varsigma, target.L_psi, target.trace_c)
                : KernelConfig::pcn_rho(c.kernel.rho);
        Vec init(target.d, 0.0);
        stats = run_chain(kc, target, init, c.n, c.seed, fns);
    }
    ordered_json j = stats_json(stats, c.functionals);
    write_json(out / "chain_stats.json", j);
    if (!trajectory.empty()) {
        std::string csv;
        for (const Vec& x : trajectory) {
            for (std::size_t i = 0; i < x.size(); ++i) {
                if (i) csv += ",";
                csv += fmt17(x[i]);
            }
            csv += "\n";
        }
        write_text(out / "trajectory.csv", csv);
    }
    return 0;
}

int run_verify(const ExperimentConfig& c, const std::filesystem::path& out) {
    if (c.suite.empty()) throw ConfigError({"verify: 'suite' is required"});
    ordered_json j;
    j["suite"] = c.suite;
    bool pass = true;
    std::vector<int> dims = c.dims.empty() ? std::vector<int>{2, 4, 8, 16, 32} : c.dims;
    double varsigma = c.kernel.varsigma > 0 ? c.kernel.varsigma : 1.0;
    if (c.suite == "acceptance-floor") {
        int d = c.has_target && c.target.d >= 1 ? c.target.d : 10;
        TargetSpec target = c.has_target ? build_target(c.target) : gaussian_target(d, 1.0);
        d = target.d;
        KernelConfig kc = KernelConfig::rwm_varsigma(varsigma, target.L, d);
        RngStream init_rng = RngStream(c.seed).split(0x1717ull);
        Vec init = target.exact_sampler ? target.exact_sampler(init_rng) : target.mode;
        ChainStats stats = run_chain(kc, target, init, c.n, c.seed);
        double p = stats.acceptance_rate();
        double se = std::sqrt(std::max(p * (1.0 - p), 1e-12) / c.n);
        double floor = rwm_alpha0_lower(target.L, kc.sigma, d);
        pass = p >= floor - 3.0 * se;
        j["estimate"] = p;
        j["std_error"] = se;
        j["lower_bound"] = floor;
    } else if (c.suite == "gap-sandwich" || c.suite == "flow-sandwich") {
        ScanMetric metric = c.suite == "gap-sandwich" ? ScanMetric::gap : ScanMetric::flow;
        ScanResult scan = dimension_scan(dims, varsigma, metric, c.n, c.seed, c.jobs);
        ordered_json rows = ordered_json::array();
        for (const ScanRow& r : scan.rows) {
            bool row_ok = r.estimate >= r.lower_bound - 3.0 * r.std_error &&
                          r.estimate <= r.upper_bound + 3.0 * r.std_error;
            pass = pass && row_ok;
            ordered_json rj;
            rj["d"] = r.d;
            rj["estimate"] = r.estimate;
            rj["std_error"] = r.std_error;
            rj["lower_bound"] = r.lower_bound;
            rj["upper_bound"] = r.upper_bound;
            rj["pass"] = row_ok;
            rows.push_back(rj);
        }
        j["rows"] = rows;
    } else {  // scaling-slope
        ScanMetric metric = c.metric == "flow" ? ScanMetric::flow
                            : c.metric == "acceptance" ? ScanMetric::acceptance
                                                       : ScanMetric::gap;
        ScanResult scan = dimension_scan(dims, varsigma, metric, c.n, c.seed, c.jobs);
        double expected = metric == ScanMetric::gap ? -1.0
                          : metric == ScanMetric::flow ? -0.5
                                                       : 0.0;
        double tol = metric == ScanMetric::acceptance ? 0.05 : 0.15;
        pass = std::abs(scan.slope - expected) <= tol;
        j["metric"] = c.metric;
        j["slope"] = scan.slope;
        j["slope_se"] = scan.slope_se;
        j["expected_slope"] = expected;
        j["tolerance"] = tol;
    }
    j["pass"] = pass;
    write_json(out / ("verify_" + c.suite + ".json"), j);
    return pass ? 0 : 1;
}

int run_scan(const ExperimentConfig& c, const std::filesystem::path& out) {
    std::vector<int> dims = c.dims.empty() ? std::vector<int>{2, 4, 8, 16, 32} : c.dims;
    double varsigma = c.kernel.varsigma > 0 ? c.kernel.varsigma : 1.0;
    ScanMetric metric = c.metric == "flow" ? ScanMetric::flow
                        : c.metric == "acceptance" ? ScanMetric::acceptance
                                                   : ScanMetric::gap;
    ScanResult scan = dimension_scan(dims, varsigma, metric, c.n, c.seed, c.jobs);
    std::string csv = "d,estimate,std_error,lower_bound,upper_bound\n";
    ordered_json rows = ordered_json::array();
    for (const ScanRow& r : scan.rows) {
        csv += std::to_string(r.d) + "," + fmt17(r.estimate) + "," + fmt17(r.std_error) + "," +
               fmt17(r.lower_bound) + "," + fmt17(r.upper_bound) + "\n";
        ordered_json rj;
        rj["d"] = r.d;
        rj["estimate"] = r.estimate;
        rj["std_error"] = r.std_error;
        rj["lower_bound"] = r.lower_bound;
        rj["upper_bound"] = r.upper_bound;
        rows.push_back(rj);
    }
    ordered_json j;
    j["metric"] = c.metric;
    j["rows"] = rows;
    j["slope"] = scan.slope;
    j["slope_se"] = scan.slope_se;
    write_text(out / "scan.csv", csv);
    write_json(out / "scan.json", j);
    return 0;
}

}  // namespace

int run_experiment(const ExperimentConfig& config) {
    std::filesystem::path out(config.out_dir);
    try {
        std::error_code ec;
        std::filesystem::create_directories(out, ec);
        if (ec) {
            std::fprintf(stderr, "error: cannot create output directory %s\n", out.string().c_str());
            return 3;
        }
        if (config.command == "bound") return run_bound(config, out);
        if (config.command == "sample") return run_sample(config, out);
        if (config.command == "verify") return run_verify(config, out);
        if (config.command == "scan") return run_scan(config, out);
        throw ConfigError({"command: one of bound, sample, verify, scan is required"});
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::runtime_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
}

}  // namespace mixbound
