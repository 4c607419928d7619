// cfdim: continued-fraction digit statistics, Gauss-measure arithmetic,
// Markov digit chains, dimension estimation, deviation experiments, and
// f-expansions, exposed as scriptable subcommands.

#include <CLI11.hpp>

#include <cstdio>
#include <ctime>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>

#include "cfdim/deviations.hpp"
#include "cfdim/dimension.hpp"
#include "cfdim/fexp.hpp"
#include "cfdim/gauss.hpp"
#include "cfdim/process.hpp"
#include "cfdim/repro.hpp"
#include "cfdim/serialize.hpp"
#include "cfdim/version.hpp"

using namespace cfdim;

namespace {

struct GlobalOpts {
    std::uint64_t seed = 0;
    bool seed_explicit = false;
    unsigned workers = 1;
    std::string format = "json";
    std::string output;
    bool no_timestamp = false;
    std::string config_path;
};

// one emitted artifact: JSON object, or CSV body with a fixed header row
struct Artifact {
    Json result;
    std::string csv_header;  // empty: render scalars generically
    std::string csv_body;
};

std::string iso_timestamp() {
    char buf[64];
    const std::time_t now = std::time(nullptr);
    std::tm tm_utc{};
    gmtime_r(&now, &tm_utc);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    return buf;
}

Rational parse_rational(const std::string& text) {
    // accepts "p/q" or a decimal literal; decimals are exact
    if (text.find('/') != std::string::npos) {
        Rational r;
        if (mpq_set_str(r.get_mpq_t(), text.c_str(), 10) != 0)
            throw ValidationError("cannot parse rational: " + text);
        r.canonicalize();
        return r;
    }
    const auto dot = text.find('.');
    if (dot == std::string::npos) {
        Rational r(text);
        r.canonicalize();
        return r;
    }
    const std::string digits = text.substr(0, dot) + text.substr(dot + 1);
    const std::size_t frac_digits = text.size() - dot - 1;
    BigInt num(digits);
    BigInt den = 1;
    for (std::size_t i = 0; i < frac_digits; ++i) den *= 10;
    Rational r(num, den);
    r.canonicalize();
    return r;
}

RealPoint parse_point(const std::string& text, unsigned prec_bits) {
    if (text.rfind("sqrt:", 0) == 0) {
        const unsigned long n = std::stoul(text.substr(5));
        BigInt shifted(n);
        mpz_mul_2exp(shifted.get_mpz_t(), shifted.get_mpz_t(), 2 * prec_bits);
        BigInt root;
        mpz_sqrt(root.get_mpz_t(), shifted.get_mpz_t());
        BigInt whole;
        mpz_sqrt(whole.get_mpz_t(), BigInt(n).get_mpz_t());
        if (whole * whole == BigInt(n))
            throw ValidationError("sqrt:" + std::to_string(n) + " is rational");
        BigInt frac = root;
        mpz_mul_2exp(whole.get_mpz_t(), whole.get_mpz_t(), prec_bits);
        frac -= whole;
        return RealPoint::with_precision(frac, prec_bits);
    }
    return RealPoint::exact(parse_rational(text));
}

SubsequenceSpec parse_subsequence(const std::string& text, double l_witness) {
    if (text == "identity") return SubsequenceSpec::identity();
    if (text.rfind("arith:", 0) == 0)
        return SubsequenceSpec::arithmetic(std::stoull(text.substr(6)));
    if (text.rfind("list:", 0) == 0) {
        std::vector<std::uint64_t> idx;
        std::stringstream ss(text.substr(5));
        std::string tok;
        while (std::getline(ss, tok, ',')) idx.push_back(std::stoull(tok));
        return SubsequenceSpec::explicit_list(std::move(idx), l_witness);
    }
    throw ValidationError("unknown subsequence spec: " + text +
                          " (want identity | arith:C | list:...)");
}

std::unique_ptr<DigitProcess> parse_source(const std::string& text) {
    if (text == "mu-g") return std::make_unique<GaussMeasureProcess>();
    if (text.rfind("gauss:", 0) == 0)
        return std::make_unique<GaussMarkovProcess>(
            static_cast<unsigned>(std::stoul(text.substr(6))));
    std::ifstream in(text);
    if (!in) throw ValidationError("cannot open process spec: " + text);
    Json j;
    in >> j;
    return process_from_json(j);
}

ExpansionScheme parse_scheme(const std::string& text) {
    if (text == "cf") return ExpansionScheme::continued_fraction();
    if (text.rfind("base:", 0) == 0)
        return ExpansionScheme::base(std::stoull(text.substr(5)));
    throw ValidationError("unknown scheme: " + text + " (want cf | base:M)");
}

std::string rational_str(const Rational& r) {
    std::ostringstream out;
    out << r;
    return out.str();
}

std::string scalar_csv(const Json& result) {
    std::ostringstream head, body;
    bool first = true;
    for (auto it = result.begin(); it != result.end(); ++it) {
        if (!it->is_primitive()) continue;
        if (!first) {
            head << ',';
            body << ',';
        }
        head << it.key();
        if (it->is_number_float()) {
            char buf[40];
            std::snprintf(buf, sizeof(buf), "%.17g", it->get<double>());
            body << buf;
        } else {
            body << it->dump();
        }
        first = false;
    }
    return head.str() + "\n" + body.str() + "\n";
}

void emit(const GlobalOpts& g, const std::string& command, const Artifact& artifact) {
    std::ostringstream out;
    if (g.format == "csv") {
        out << "# tool: cfdim " << kVersion << "\n";
        out << "# command: " << command << "\n";
        out << "# seed: " << g.seed << "\n";
        out << "# workers: " << g.workers << "\n";
        if (!g.no_timestamp) out << "# timestamp: " << iso_timestamp() << "\n";
        if (!artifact.csv_header.empty()) {
            out << artifact.csv_header << "\n" << artifact.csv_body;
        } else if (!artifact.csv_body.empty()) {
            out << artifact.csv_body;
        } else {
            out << scalar_csv(artifact.result);
        }
    } else {
        Json meta{{"tool", "cfdim"},
                  {"version", kVersion},
                  {"command", command},
                  {"seed", g.seed},
                  {"workers", g.workers}};
        if (!g.no_timestamp) meta["timestamp"] = iso_timestamp();
        Json doc{{"meta", meta}, {"result", artifact.result}};
        out << doc.dump(2) << "\n";
    }
    if (g.output.empty()) {
        std::cout << out.str();
    } else {
        std::ofstream file(g.output);
        if (!file) throw ValidationError("cannot write output file: " + g.output);
        file << out.str();
    }
}

// overlay from --config <file>.json: {"params": {...}, "seed": ..., ...}
Json load_config(GlobalOpts& g) {
    if (g.config_path.empty()) return Json::object();
    std::ifstream in(g.config_path);
    if (!in) throw ValidationError("cannot open config: " + g.config_path);
    Json j;
    in >> j;
    const ExperimentConfig cfg = experiment_config_from_json(j);
    if (j.contains("seed")) {
        g.seed = cfg.seed;
        g.seed_explicit = true;
    }
    if (j.contains("workers")) g.workers = cfg.workers;
    if (j.contains("format")) g.format = cfg.format;
    if (j.contains("output") && !cfg.output.empty()) g.output = cfg.output;
    if (j.contains("no_timestamp")) g.no_timestamp = cfg.no_timestamp;
    return cfg.params;
}

template <typename T>
T param(const Json& overrides, const std::string& key, T cli_value) {
    if (overrides.contains(key)) return overrides.at(key).get<T>();
    return cli_value;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"continued fractions, the Gauss measure, digit processes, and dimension"};
    app.require_subcommand(1);

    GlobalOpts g;
    app.add_option("--seed", g.seed, "random seed (auto-generated when absent)");
    app.add_option("--workers", g.workers, "worker threads; results are worker-invariant");
    app.add_option("--format", g.format, "output format: json | csv")
        ->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--output,-o", g.output, "output file (default stdout)");
    app.add_flag("--no-timestamp", g.no_timestamp, "omit timestamps from metadata");
    app.add_option("--config", g.config_path, "JSON config; values override flags");

    // ---- cf ----------------------------------------------------------------
    auto* cf = app.add_subcommand("cf", "exact continued-fraction arithmetic");
    cf->require_subcommand(1);

    std::string cf_x = "sqrt:2";
    std::uint64_t cf_n = 10;
    unsigned cf_prec = 256;
    auto* cf_digits = cf->add_subcommand(
        "digits", "digits via the iterated Gauss map x -> 1/x mod 1, certified");
    cf_digits->add_option("--x", cf_x, "point: p/q, decimal, or sqrt:N");
    cf_digits->add_option("--n", cf_n, "number of digits");
    cf_digits->add_option("--prec", cf_prec, "precision bits for sqrt points");

    std::string cf_word = "1";
    auto* cf_cyl = cf->add_subcommand(
        "cylinder", "exact interval of points sharing a digit prefix");
    cf_cyl->add_option("--word", cf_word, "comma-separated digits");
    auto* cf_eval = cf->add_subcommand("eval", "value of a finite continued fraction");
    cf_eval->add_option("--word", cf_word, "comma-separated digits");

    // ---- measure -----------------------------------------------------------
    auto* measure = app.add_subcommand("measure", "Gauss measure of cylinders");
    measure->require_subcommand(1);

    std::string m_word = "1", m_u = "1", m_v = "1", m_b = "1", m_a;
    std::uint64_t m_c = 1, m_maxdigit = 2;
    unsigned m_k = 0, m_maxm = 1;
    auto* m_cyl = measure->add_subcommand(
        "cylinder", "mu_G mass of a cylinder, log2((1+high)/(1+low))");
    m_cyl->add_option("--word", m_word, "comma-separated digits; empty = full space");
    auto* m_ratio = measure->add_subcommand(
        "ratio", "quasi-independence ratio mu(I_uv)/(mu(I_u) mu(I_v))");
    m_ratio->add_option("--u", m_u, "first word");
    m_ratio->add_option("--v", m_v, "second word");
    auto* m_defect = measure->add_subcommand(
        "defect", "Markov defect |mu(I_bac) - mu(I_ac) mu(I_ba)/mu(I_a)|");
    m_defect->add_option("--b", m_b, "prefix word b");
    m_defect->add_option("--a", m_a, "conditioning word a (may be empty)");
    m_defect->add_option("--c", m_c, "final digit c");
    auto* m_witness = measure->add_subcommand(
        "witness", "exhaustive search for the maximal Markov defect");
    m_witness->add_option("--k", m_k, "conditioning length");
    m_witness->add_option("--max-digit", m_maxdigit, "digit alphabet bound");
    m_witness->add_option("--max-m", m_maxm, "prefix length bound");

    // ---- process -----------------------------------------------------------
    auto* process = app.add_subcommand("process", "digit processes and their cylinders");
    process->require_subcommand(1);

    unsigned p_k = 1;
    std::string p_source = "gauss:1", p_word = "1,1", p_b;
    std::uint64_t p_n = 100, p_d = 1, p_cap = 10000;
    std::string p_u = "1,1", p_v = "2,2";
    auto* p_build = process->add_subcommand(
        "build", "emit the order-k digit chain induced by the Gauss measure");
    p_build->add_option("--k", p_k, "chain order");
    auto* p_sample = process->add_subcommand("sample", "sample a digit path");
    p_sample->add_option("--source", p_source, "mu-g | gauss:K | spec.json");
    p_sample->add_option("--n", p_n, "path length");
    auto* p_mass = process->add_subcommand("mass", "cylinder mass under a process");
    p_mass->add_option("--source", p_source, "mu-g | gauss:K | spec.json");
    p_mass->add_option("--word", p_word, "digit word");
    auto* p_stat = process->add_subcommand(
        "stationarity", "one-step stationarity residual of the order-k chain");
    p_stat->add_option("--k", p_k, "chain order");
    p_stat->add_option("--b", p_b, "state word of length k-1");
    p_stat->add_option("--d", p_d, "target digit");
    p_stat->add_option("--cap", p_cap, "truncation of the digit sum");
    auto* p_psi = process->add_subcommand(
        "psiratio", "joint/product mass ratio R for the order-k chain");
    p_psi->add_option("--k", p_k, "chain order");
    p_psi->add_option("--u", p_u, "first word (length > k)");
    p_psi->add_option("--v", p_v, "second word (length > k)");

    // ---- dim ---------------------------------------------------------------
    auto* dim = app.add_subcommand("dim", "entropy, Lyapunov exponents, dimension");
    dim->require_subcommand(1);

    unsigned d_k = 1;
    std::uint64_t d_samples = 500, d_cap = 3000;
    std::size_t d_n = 2000;
    std::string d_source = "mu-g", d_method = "series", d_masses = "0.5,0.5";
    double d_tail_ratio = -1.0;
    std::uint64_t d_es = 3000, d_ec = 3000, d_ls = 300;
    std::size_t d_ln = 1200;

    dim->add_subcommand("gauss-exact", "pi^2/(6 ln 2), the Gauss Lyapunov exponent");
    auto* d_entropy = dim->add_subcommand(
        "entropy", "entropy of the order-k chain (series) or of a source (smb)");
    d_entropy->add_option("--k", d_k, "chain order (series method)");
    d_entropy->add_option("--method", d_method, "series | smb")
        ->check(CLI::IsMember({"series", "smb"}));
    d_entropy->add_option("--samples", d_samples, "Monte Carlo samples");
    d_entropy->add_option("--cap", d_cap, "inner digit cap (series method)");
    d_entropy->add_option("--n", d_n, "path length (smb method)");
    d_entropy->add_option("--source", d_source, "smb source: mu-g | gauss:K | spec.json");
    auto* d_lyap = dim->add_subcommand(
        "lyapunov", "cylinder-length and Birkhoff Lyapunov estimators");
    d_lyap->add_option("--source", d_source, "mu-g | gauss:K | spec.json");
    d_lyap->add_option("--n", d_n, "path length");
    d_lyap->add_option("--samples", d_samples, "paths");
    auto* d_kp = dim->add_subcommand(
        "kp", "dimension of an i.i.d. digit law: exact entropy over Monte Carlo log moment");
    d_kp->add_option("--masses", d_masses, "law masses for digits 1..D");
    d_kp->add_option("--tail-ratio", d_tail_ratio, "geometric tail ratio (omit: zero tail)");
    d_kp->add_option("--n", d_n, "path length");
    d_kp->add_option("--samples", d_samples, "paths");
    auto* d_gap = dim->add_subcommand(
        "gap", "dimension bound 1-2^(3-k), entropy floor, Lyapunov gap for the order-k chain");
    d_gap->add_option("--k", d_k, "chain order");
    d_gap->add_option("--entropy-samples", d_es, "outer entropy samples");
    d_gap->add_option("--entropy-cap", d_ec, "inner entropy cap");
    d_gap->add_option("--lyap-n", d_ln, "Lyapunov path length");
    d_gap->add_option("--lyap-samples", d_ls, "Lyapunov paths");
    auto* d_local = dim->add_subcommand(
        "local", "pointwise dimension ln nu(J_n)/ln |J_n| averaged over paths");
    d_local->add_option("--source", d_source, "mu-g | gauss:K | spec.json");
    d_local->add_option("--n", d_n, "path length");
    d_local->add_option("--samples", d_samples, "paths");

    // ---- dev ---------------------------------------------------------------
    auto* dev = app.add_subcommand("dev", "digit-frequency deviation experiments");
    dev->require_subcommand(1);

    std::string v_word = "1", v_q = "identity", v_path, v_source = "mu-g", v_ns =
        "10,25,50,100,200";
    double v_delta = 0.2, v_lwitness = 2.0;
    std::uint64_t v_n = 100, v_samples = 100000;
    auto* v_freq = dev->add_subcommand(
        "frequency", "frequency of a word along a subsequence of shifts");
    v_freq->add_option("--path", v_path, "digit path (comma-separated)");
    v_freq->add_option("--word", v_word, "pattern word");
    v_freq->add_option("--q", v_q, "identity | arith:C | list:...");
    v_freq->add_option("--l-witness", v_lwitness, "L witness for explicit lists");
    v_freq->add_option("--n", v_n, "number of averaged shifts");
    auto* v_prob = dev->add_subcommand(
        "probability", "mu_G-probability of a frequency deviation beyond delta");
    v_prob->add_option("--word", v_word, "pattern word");
    v_prob->add_option("--q", v_q, "subsequence");
    v_prob->add_option("--delta", v_delta, "deviation threshold");
    v_prob->add_option("--n", v_n, "averaged shifts");
    v_prob->add_option("--samples", v_samples, "Monte Carlo samples");
    auto* v_decay = dev->add_subcommand(
        "decay", "deviation probabilities over several horizons plus a log-linear fit");
    v_decay->add_option("--word", v_word, "pattern word");
    v_decay->add_option("--q", v_q, "subsequence");
    v_decay->add_option("--delta", v_delta, "deviation threshold");
    v_decay->add_option("--ns", v_ns, "comma-separated horizons");
    v_decay->add_option("--samples", v_samples, "samples per horizon");
    auto* v_gamma = dev->add_subcommand(
        "gamma-mass", "fraction of process paths deviating from the mu_G frequency");
    v_gamma->add_option("--source", v_source, "mu-g | gauss:K | spec.json");
    v_gamma->add_option("--word", v_word, "pattern word");
    v_gamma->add_option("--q", v_q, "subsequence");
    v_gamma->add_option("--delta", v_delta, "deviation threshold");
    v_gamma->add_option("--n", v_n, "averaged shifts");
    v_gamma->add_option("--samples", v_samples, "Monte Carlo samples");

    // ---- fexp --------------------------------------------------------------
    auto* fexp = app.add_subcommand("fexp", "f-expansions: digits, densities, conjugation");
    fexp->require_subcommand(1);

    std::string f_scheme = "cf", f_x = "sqrt:2";
    std::uint64_t f_n = 10, f_bins = 512, f_iters = 5000, f_branch_cap = 0;
    double f_tol = 1e-11;
    unsigned f_grid = 512, f_lmax = 3, f_probes = 9;
    std::int64_t f_branch = 1;
    bool f_closed_form = false;
    unsigned f_prec = 256;
    auto* f_digits = fexp->add_subcommand("digits", "digits of an f-expansion");
    f_digits->add_option("--scheme", f_scheme, "cf | base:M");
    f_digits->add_option("--x", f_x, "point: p/q, decimal, or sqrt:N");
    f_digits->add_option("--n", f_n, "number of digits");
    f_digits->add_option("--prec", f_prec, "precision bits for sqrt points");
    auto* f_ulam = fexp->add_subcommand(
        "ulam", "piecewise-constant invariant density by transfer-matrix iteration");
    f_ulam->add_option("--scheme", f_scheme, "cf | base:M");
    f_ulam->add_option("--bins", f_bins, "number of bins");
    f_ulam->add_option("--max-iters", f_iters, "iteration cap");
    f_ulam->add_option("--tol", f_tol, "L1 convergence tolerance");
    f_ulam->add_option("--branch-cap", f_branch_cap, "branch cap for infinite schemes");
    auto* f_cond = fexp->add_subcommand(
        "conditions", "smoothness, uniform expansion, and distortion checks");
    f_cond->add_option("--scheme", f_scheme, "cf | base:M");
    f_cond->add_option("--grid", f_grid, "grid resolution");
    f_cond->add_option("--lmax", f_lmax, "largest power of T tried");
    auto* f_obs = fexp->add_subcommand(
        "obstruction", "affine-fit residual of the conjugated map on a branch image");
    f_obs->add_option("--scheme", f_scheme, "cf | base:M");
    f_obs->add_option("--branch", f_branch, "branch digit");
    f_obs->add_option("--probes", f_probes, "probe points");
    f_obs->add_option("--bins", f_bins, "bins for the Ulam cumulative");
    f_obs->add_flag("--closed-form", f_closed_form,
                    "use the exact Gauss cumulative instead of a density");

    // ---- repro ---------------------------------------------------------------
    auto* repro = app.add_subcommand("repro", "reproduction harness");
    auto* repro_all = repro->add_subcommand(
        "all", "run the full acceptance suite and print one line per criterion");

    // let global flags appear after any subcommand
    std::function<void(CLI::App*)> enable_fallthrough = [&](CLI::App* a) {
        a->fallthrough();
        for (auto* sub : a->get_subcommands([](CLI::App*) { return true; }))
            enable_fallthrough(sub);
    };
    enable_fallthrough(&app);

    CLI11_PARSE(app, argc, argv);

    try {
        const Json overrides = load_config(g);
        if (!g.seed_explicit && app.count("--seed") == 0 && !overrides.contains("seed")) {
            std::random_device rd;
            g.seed = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
        }

        std::string command;
        for (int i = 1; i < argc; ++i) command += std::string(i > 1 ? " " : "") + argv[i];

        Artifact art;

        if (cf_digits->parsed()) {
            const auto x = parse_point(param<std::string>(overrides, "x", cf_x),
                                       param<unsigned>(overrides, "prec", cf_prec));
            const DigitWord w = digits_of(x, param<std::uint64_t>(overrides, "n", cf_n));
            art.result = Json{{"digits", w.digits()}};
            std::string body;
            for (std::size_t i = 0; i < w.size(); ++i)
                body += (i ? " " : "") + std::to_string(w[i]);
            art.csv_body = body + "\n";
        } else if (cf_cyl->parsed()) {
            const CylinderInterval c =
                cylinder(DigitWord::parse(param<std::string>(overrides, "word", cf_word)));
            art.result = Json{{"low", rational_str(c.low)},
                              {"high", rational_str(c.high)},
                              {"low_value", c.low.get_d()},
                              {"high_value", c.high.get_d()},
                              {"length", rational_str(c.length())},
                              {"length_value", c.length().get_d()},
                              {"depth", c.depth}};
        } else if (cf_eval->parsed()) {
            const Rational r =
                eval_finite_cf(DigitWord::parse(param<std::string>(overrides, "word", cf_word)));
            art.result = Json{{"value", rational_str(r)}, {"value_double", r.get_d()}};
        } else if (m_cyl->parsed()) {
            const DigitWord w = DigitWord::parse(param<std::string>(overrides, "word", m_word));
            art.result = Json{{"mass", mu_g_cylinder(w)},
                              {"mass_hp", mu_g_cylinder_hp(w).str(30)}};
        } else if (m_ratio->parsed()) {
            art.result = Json{
                {"ratio",
                 quasi_independence_ratio(
                     DigitWord::parse(param<std::string>(overrides, "u", m_u)),
                     DigitWord::parse(param<std::string>(overrides, "v", m_v)))}};
        } else if (m_defect->parsed()) {
            const DigitWord b = DigitWord::parse(param<std::string>(overrides, "b", m_b));
            const DigitWord a = DigitWord::parse(param<std::string>(overrides, "a", m_a));
            const std::uint64_t c = param<std::uint64_t>(overrides, "c", m_c);
            const MarkovDefectWitness w = markov_defect(b, a, c);
            art.result = to_json(w);
            art.result["defect_hp"] = markov_defect_hp(b, a, c).str(30);
        } else if (m_witness->parsed()) {
            art.result = to_json(find_markov_witness(
                param<unsigned>(overrides, "k", m_k),
                param<std::uint64_t>(overrides, "max_digit", m_maxdigit),
                param<unsigned>(overrides, "max_m", m_maxm)));
        } else if (p_build->parsed()) {
            art.result = to_json(GaussMarkovProcess(param<unsigned>(overrides, "k", p_k)));
        } else if (p_sample->parsed()) {
            const auto src = parse_source(param<std::string>(overrides, "source", p_source));
            const DigitPath path =
                sample_path(*src, param<std::uint64_t>(overrides, "n", p_n), g.seed);
            std::string body;
            for (std::size_t i = 0; i < path.word.size(); ++i)
                body += (i ? " " : "") + std::to_string(path.word[i]);
            art.result = Json{{"word", path.word.digits()},
                              {"seed", path.seed},
                              {"process", path.process}};
            art.csv_body = body + "\n";
        } else if (p_mass->parsed()) {
            const auto src = parse_source(param<std::string>(overrides, "source", p_source));
            const DigitWord w = DigitWord::parse(param<std::string>(overrides, "word", p_word));
            art.result = Json{{"mass", process_cylinder_mass(*src, w)},
                              {"log_mass", src->log_mass(w)}};
        } else if (p_stat->parsed()) {
            art.result = to_json(stationarity_residual(
                param<unsigned>(overrides, "k", p_k),
                DigitWord::parse(param<std::string>(overrides, "b", p_b)),
                param<std::uint64_t>(overrides, "d", p_d),
                param<std::uint64_t>(overrides, "cap", p_cap)));
        } else if (p_psi->parsed()) {
            const GaussMarkovProcess chain(param<unsigned>(overrides, "k", p_k));
            art.result = Json{
                {"ratio", psi_ratio(chain,
                                    DigitWord::parse(param<std::string>(overrides, "u", p_u)),
                                    DigitWord::parse(param<std::string>(overrides, "v", p_v)))}};
        } else if (dim->get_subcommand("gauss-exact")->parsed()) {
            const double v = lyapunov_gauss_exact();
            art.result = Json{{"value", v}};
            char buf[32];
            std::snprintf(buf, sizeof(buf), "%.7f", v);
            art.csv_body = std::string(buf) + "\n";
        } else if (d_entropy->parsed()) {
            if (param<std::string>(overrides, "method", d_method) == "series") {
                art.result = to_json(entropy_gauss_markov(
                    param<unsigned>(overrides, "k", d_k),
                    param<std::uint64_t>(overrides, "samples", d_samples),
                    param<std::uint64_t>(overrides, "cap", d_cap), g.seed, g.workers));
            } else {
                const auto src =
                    parse_source(param<std::string>(overrides, "source", d_source));
                art.result = to_json(entropy_smb_mc(
                    *src, param<std::uint64_t>(overrides, "n", d_n),
                    param<std::uint64_t>(overrides, "samples", d_samples), g.seed,
                    g.workers));
            }
        } else if (d_lyap->parsed()) {
            const auto src = parse_source(param<std::string>(overrides, "source", d_source));
            art.result = to_json(lyapunov_mc(
                *src, param<std::uint64_t>(overrides, "n", d_n),
                param<std::uint64_t>(overrides, "samples", d_samples), g.seed, g.workers));
        } else if (d_kp->parsed()) {
            DigitLaw law;
            std::stringstream ss(param<std::string>(overrides, "masses", d_masses));
            std::string tok;
            while (std::getline(ss, tok, ',')) law.masses.push_back(std::stod(tok));
            const double tr = param<double>(overrides, "tail_ratio", d_tail_ratio);
            if (tr >= 0.0) {
                law.tail = DigitLaw::Tail::geometric;
                law.tail_ratio = tr;
            }
            art.result = to_json(kinney_pitcher_dim(
                law, param<std::uint64_t>(overrides, "n", d_n),
                param<std::uint64_t>(overrides, "samples", d_samples), g.seed, g.workers));
        } else if (d_gap->parsed()) {
            GapBudgets budgets;
            budgets.entropy_samples = param<std::uint64_t>(overrides, "entropy_samples", d_es);
            budgets.entropy_cap = param<std::uint64_t>(overrides, "entropy_cap", d_ec);
            budgets.lyapunov_n = param<std::uint64_t>(overrides, "lyap_n", d_ln);
            budgets.lyapunov_samples = param<std::uint64_t>(overrides, "lyap_samples", d_ls);
            art.result =
                to_json(verify_gap_bound(param<unsigned>(overrides, "k", d_k), budgets,
                                         g.seed, g.workers));
        } else if (d_local->parsed()) {
            const auto src = parse_source(param<std::string>(overrides, "source", d_source));
            art.result = to_json(local_dimension(
                *src, param<std::uint64_t>(overrides, "n", d_n),
                param<std::uint64_t>(overrides, "samples", d_samples), g.seed, g.workers));
        } else if (v_freq->parsed()) {
            const SubsequenceSpec q = parse_subsequence(
                param<std::string>(overrides, "q", v_q),
                param<double>(overrides, "l_witness", v_lwitness));
            art.result = Json{
                {"value",
                 frequency_average(
                     DigitWord::parse(param<std::string>(overrides, "path", v_path)),
                     DigitWord::parse(param<std::string>(overrides, "word", v_word)), q,
                     param<std::uint64_t>(overrides, "n", v_n))}};
        } else if (v_prob->parsed()) {
            const SubsequenceSpec q =
                parse_subsequence(param<std::string>(overrides, "q", v_q), v_lwitness);
            art.result = to_json(deviation_probability_mc(
                DigitWord::parse(param<std::string>(overrides, "word", v_word)), q,
                param<double>(overrides, "delta", v_delta),
                param<std::uint64_t>(overrides, "n", v_n),
                param<std::uint64_t>(overrides, "samples", v_samples), g.seed, g.workers));
        } else if (v_decay->parsed()) {
            const SubsequenceSpec q =
                parse_subsequence(param<std::string>(overrides, "q", v_q), v_lwitness);
            std::vector<std::uint64_t> ns;
            std::stringstream ss(param<std::string>(overrides, "ns", v_ns));
            std::string tok;
            while (std::getline(ss, tok, ',')) ns.push_back(std::stoull(tok));
            const DeviationSeries series = deviation_series(
                DigitWord::parse(param<std::string>(overrides, "word", v_word)), q,
                param<double>(overrides, "delta", v_delta), ns,
                param<std::uint64_t>(overrides, "samples", v_samples), g.seed, g.workers);
            art.result = Json{{"series", to_json(series)}};
            try {
                art.result["fit"] = to_json(decay_rate_fit(series));
            } catch (const InsufficientData& e) {
                art.result["fit"] = Json{{"error", e.what()}};
            }
            const std::string csv = deviation_series_csv(series);
            const auto newline = csv.find('\n');
            art.csv_header = csv.substr(0, newline);
            art.csv_body = csv.substr(newline + 1);
        } else if (v_gamma->parsed()) {
            const auto src = parse_source(param<std::string>(overrides, "source", v_source));
            const SubsequenceSpec q =
                parse_subsequence(param<std::string>(overrides, "q", v_q), v_lwitness);
            art.result = to_json(gamma_mass_empirical(
                *src, DigitWord::parse(param<std::string>(overrides, "word", v_word)), q,
                param<double>(overrides, "delta", v_delta),
                param<std::uint64_t>(overrides, "n", v_n),
                param<std::uint64_t>(overrides, "samples", v_samples), g.seed, g.workers));
        } else if (f_digits->parsed()) {
            const ExpansionScheme scheme =
                parse_scheme(param<std::string>(overrides, "scheme", f_scheme));
            const RealPoint x = parse_point(param<std::string>(overrides, "x", f_x),
                                            param<unsigned>(overrides, "prec", f_prec));
            const FWord w = digits_f(scheme, x, param<std::uint64_t>(overrides, "n", f_n));
            art.result = Json{{"digits", w}};
            std::string body;
            for (std::size_t i = 0; i < w.size(); ++i)
                body += (i ? " " : "") + std::to_string(w[i]);
            art.csv_body = body + "\n";
        } else if (f_ulam->parsed()) {
            const InvariantDensity density = ulam_invariant_density(
                parse_scheme(param<std::string>(overrides, "scheme", f_scheme)),
                param<std::uint64_t>(overrides, "bins", f_bins),
                param<std::uint64_t>(overrides, "max_iters", f_iters),
                param<double>(overrides, "tol", f_tol),
                param<std::uint64_t>(overrides, "branch_cap", f_branch_cap));
            art.result = to_json(density);
            std::ostringstream body;
            body.precision(17);
            for (unsigned i = 0; i < density.bins; ++i)
                body << (i + 0.5) / density.bins << ',' << density.values[i] << '\n';
            art.csv_header = "x,density";
            art.csv_body = body.str();
        } else if (f_cond->parsed()) {
            art.result = to_json(check_conditions(
                parse_scheme(param<std::string>(overrides, "scheme", f_scheme)),
                param<unsigned>(overrides, "grid", f_grid),
                param<unsigned>(overrides, "lmax", f_lmax)));
        } else if (f_obs->parsed()) {
            const ExpansionScheme scheme =
                parse_scheme(param<std::string>(overrides, "scheme", f_scheme));
            CumulativeMap cum = CumulativeMap::gauss_closed_form();
            std::uint64_t used_bins = 0;
            if (!param<bool>(overrides, "closed_form", f_closed_form)) {
                const InvariantDensity density = ulam_invariant_density(
                    scheme, param<std::uint64_t>(overrides, "bins", f_bins), 5000, 1e-11);
                cum = CumulativeMap::from_density(density);
                used_bins = density.bins;
            }
            const double defect = markov_obstruction_defect(
                scheme, cum, param<std::int64_t>(overrides, "branch", f_branch),
                param<unsigned>(overrides, "probes", f_probes));
            art.result = Json{{"defect", defect},
                              {"branch", param<std::int64_t>(overrides, "branch", f_branch)},
                              {"cumulative", used_bins ? "ulam" : "closed-form"},
                              {"bins", used_bins}};
        } else if (repro_all->parsed()) {
            const auto results = run_acceptance(g.seed, g.workers);
            const bool ok = print_acceptance(results);
            if (!g.output.empty()) {
                Json rows = Json::array();
                for (const auto& res : results)
                    rows.push_back(Json{{"id", res.id},
                                        {"name", res.name},
                                        {"pass", res.pass},
                                        {"details", res.details},
                                        {"seconds", res.seconds}});
                std::ofstream file(g.output);
                file << rows.dump(2) << "\n";
            }
            return ok ? 0 : 1;
        } else if (repro->parsed()) {
            throw ValidationError("repro: expected the 'all' subcommand");
        }

        emit(g, command, art);
        return 0;
    } catch (const Error& e) {
        Json err{{"error", {{"code", e.code()}, {"message", e.what()}}}};
        std::cout << err.dump(2) << "\n";
        return 1;
    } catch (const std::exception& e) {
        Json err{{"error", {{"code", "internal"}, {"message", e.what()}}}};
        std::cout << err.dump(2) << "\n";
        return 2;
    }
}
