#include "cfdim/serialize.hpp"

#include <sstream>

namespace cfdim {

namespace {

Json word_to_json(const DigitWord& w) {
    Json arr = Json::array();
    for (std::uint64_t d : w) arr.push_back(d);
    return arr;
}

DigitWord word_from_json(const Json& j) {
    std::vector<std::uint64_t> ds;
    for (const auto& v : j) ds.push_back(v.get<std::uint64_t>());
    return DigitWord(std::move(ds));
}

}  // namespace

Json to_json(const DigitLaw& law) {
    Json j;
    j["masses"] = law.masses;
    j["tail"] = law.tail == DigitLaw::Tail::zero ? "zero" : "geometric";
    if (law.tail == DigitLaw::Tail::geometric) j["tail_ratio"] = law.tail_ratio;
    return j;
}

DigitLaw digit_law_from_json(const Json& j) {
    DigitLaw law;
    law.masses = j.at("masses").get<std::vector<double>>();
    const std::string tail = j.value("tail", "zero");
    if (tail == "zero") {
        law.tail = DigitLaw::Tail::zero;
    } else if (tail == "geometric") {
        law.tail = DigitLaw::Tail::geometric;
        law.tail_ratio = j.at("tail_ratio").get<double>();
    } else {
        throw ValidationError("unknown tail rule: " + tail);
    }
    law.validate();
    return law;
}

Json to_json(const IIDSpec& spec) {
    Json j;
    j["kind"] = "iid";
    Json per = Json::array();
    for (const auto& law : spec.per_index) per.push_back(to_json(law));
    j["per_index"] = per;
    j["default_law"] = to_json(spec.default_law);
    return j;
}

Json to_json(const MarkovSpec& spec) {
    Json j;
    j["kind"] = "markov-table";
    j["order"] = spec.order;
    j["max_digit"] = spec.max_digit;
    j["initial"] = spec.initial;
    Json rows = Json::array();
    for (const auto& row : spec.rows) rows.push_back(to_json(row));
    j["rows"] = rows;
    return j;
}

Json to_json(const GaussMarkovProcess& proc) {
    Json j;
    j["kind"] = "gauss-markov";
    j["order"] = proc.order();
    return j;
}

std::unique_ptr<DigitProcess> process_from_json(const Json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "iid") {
        IIDSpec spec;
        for (const auto& law : j.value("per_index", Json::array()))
            spec.per_index.push_back(digit_law_from_json(law));
        spec.default_law = digit_law_from_json(j.at("default_law"));
        return std::make_unique<IIDProcess>(std::move(spec));
    }
    if (kind == "markov-table") {
        MarkovSpec spec;
        spec.order = j.at("order").get<unsigned>();
        spec.max_digit = j.at("max_digit").get<std::uint64_t>();
        spec.initial = j.at("initial").get<std::vector<double>>();
        for (const auto& row : j.at("rows")) spec.rows.push_back(digit_law_from_json(row));
        return std::make_unique<TableMarkovProcess>(std::move(spec));
    }
    if (kind == "gauss-markov")
        return std::make_unique<GaussMarkovProcess>(j.at("order").get<unsigned>());
    if (kind == "mu-g") return std::make_unique<GaussMeasureProcess>();
    throw ValidationError("unknown process kind: " + kind);
}

Json process_to_json(const DigitProcess& proc) {
    if (const auto* p = dynamic_cast<const IIDProcess*>(&proc)) return to_json(p->spec());
    if (const auto* p = dynamic_cast<const TableMarkovProcess*>(&proc))
        return to_json(p->spec());
    if (const auto* p = dynamic_cast<const GaussMarkovProcess*>(&proc)) return to_json(*p);
    Json j;
    j["kind"] = "mu-g";
    return j;
}

Json to_json(const MCEstimate& e) {
    return Json{{"value", e.value}, {"stderr", e.stderr_}, {"samples", e.samples}};
}

Json to_json(const EntropyEstimate& e) {
    return Json{{"h", e.h},
                {"stderr", e.stderr_},
                {"tail_bound", e.tail_bound},
                {"samples", e.samples},
                {"cap", e.cap}};
}

Json to_json(const LyapunovPair& e) {
    return Json{{"cylinder", to_json(e.cylinder)}, {"birkhoff", to_json(e.birkhoff)}};
}

Json to_json(const DimensionEstimate& e) {
    return Json{{"entropy", e.entropy},
                {"lyapunov", e.lyapunov},
                {"dim", e.dim},
                {"stderr_h", e.stderr_h},
                {"stderr_gamma", e.stderr_gamma},
                {"method", e.method},
                {"samples_h", e.samples_h},
                {"samples_gamma", e.samples_gamma}};
}

Json to_json(const GapReport& r) {
    return Json{{"k", r.k},
                {"dim_estimate", to_json(r.dim_estimate)},
                {"bound", r.bound},
                {"entropy_check", r.entropy_check},
                {"lyapunov_gap", r.lyapunov_gap},
                {"lyapunov_gap_bound", r.lyapunov_gap_bound},
                {"dim_ok", r.dim_ok},
                {"lyapunov_ok", r.lyapunov_ok},
                {"entropy_tail_bound", r.entropy_tail_bound}};
}

Json to_json(const MarkovDefectWitness& w) {
    return Json{{"b", word_to_json(w.b)},
                {"a", word_to_json(w.a)},
                {"c", w.c},
                {"defect", w.defect}};
}

Json to_json(const StationarityReport& r) {
    return Json{{"residual", r.residual}, {"tail_bound", r.tail_bound}, {"cap", r.cap}};
}

Json to_json(const SubsequenceSpec& q) {
    Json j;
    switch (q.kind) {
        case SubsequenceSpec::Kind::identity:
            j["kind"] = "identity";
            break;
        case SubsequenceSpec::Kind::arithmetic:
            j["kind"] = "arithmetic";
            j["step"] = q.step;
            break;
        case SubsequenceSpec::Kind::explicit_list:
            j["kind"] = "explicit";
            j["indices"] = q.indices;
            break;
    }
    j["l_witness"] = q.l_witness;
    return j;
}

SubsequenceSpec subsequence_from_json(const Json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "identity") return SubsequenceSpec::identity();
    if (kind == "arithmetic")
        return SubsequenceSpec::arithmetic(j.at("step").get<std::uint64_t>());
    if (kind == "explicit")
        return SubsequenceSpec::explicit_list(
            j.at("indices").get<std::vector<std::uint64_t>>(),
            j.value("l_witness", 2.0));
    throw ValidationError("unknown subsequence kind: " + kind);
}

Json to_json(const DeviationSeries& s) {
    Json entries = Json::array();
    for (const auto& e : s.entries)
        entries.push_back(Json{{"n", e.n},
                               {"estimate", e.estimate},
                               {"stderr", e.stderr_},
                               {"samples", e.samples},
                               {"hits", e.hits}});
    return Json{{"a", word_to_json(s.a)},
                {"delta", s.delta},
                {"q", to_json(s.q)},
                {"entries", entries}};
}

Json to_json(const DecayFit& f) {
    return Json{{"slope", f.slope},
                {"intercept", f.intercept},
                {"r_squared", f.r_squared},
                {"fit_n_low", f.fit_n_low},
                {"fit_n_high", f.fit_n_high},
                {"points", f.points}};
}

Json to_json(const DeviationEstimate& e) {
    return Json{{"estimate", e.estimate},
                {"stderr", e.stderr_},
                {"samples", e.samples},
                {"hits", e.hits}};
}

Json to_json(const ConditionReport& r) {
    Json branches = Json::array();
    for (const auto& b : r.branches)
        branches.push_back(Json{{"a", b.a},
                                {"c2_ok", b.c2_ok},
                                {"t_prime_min", b.t_prime_min},
                                {"t_prime_max", b.t_prime_max},
                                {"t_second_max", b.t_second_max}});
    return Json{{"branches", branches},
                {"branch_cap", r.branch_cap},
                {"capped", r.capped},
                {"ell", r.ell},
                {"beta", r.beta},
                {"q_estimate", r.q_estimate},
                {"grid", r.grid}};
}

Json to_json(const InvariantDensity& d) {
    return Json{{"bins", d.bins},
                {"values", d.values},
                {"l1_residual", d.l1_residual},
                {"converged", d.converged},
                {"iterations", d.iterations},
                {"branch_cap", d.branch_cap}};
}

std::string deviation_series_csv(const DeviationSeries& s) {
    std::ostringstream out;
    out << "n,estimate,stderr,samples\n";
    out.precision(17);
    for (const auto& e : s.entries)
        out << e.n << ',' << e.estimate << ',' << e.stderr_ << ',' << e.samples << '\n';
    return out.str();
}

Json to_json(const ExperimentConfig& c) {
    return Json{{"subcommand", c.subcommand}, {"params", c.params},
                {"output", c.output},         {"format", c.format},
                {"seed", c.seed},             {"seed_explicit", c.seed_explicit},
                {"workers", c.workers},       {"no_timestamp", c.no_timestamp}};
}

ExperimentConfig experiment_config_from_json(const Json& j) {
    ExperimentConfig c;
    c.subcommand = j.value("subcommand", "");
    c.params = j.value("params", Json::object());
    c.output = j.value("output", "");
    c.format = j.value("format", "json");
    c.seed = j.value("seed", 0ULL);
    c.seed_explicit = j.value("seed_explicit", false);
    c.workers = j.value("workers", 1u);
    c.no_timestamp = j.value("no_timestamp", false);
    return c;
}

}  // namespace cfdim
