#include <doctest.h>

#include "cfdim/serialize.hpp"

using namespace cfdim;

TEST_CASE("digit law round trip") {
    DigitLaw law;
    law.masses = {0.5, 0.25};
    law.tail = DigitLaw::Tail::geometric;
    law.tail_ratio = 0.5;
    const DigitLaw back = digit_law_from_json(to_json(law));
    CHECK(back.masses == law.masses);
    CHECK(back.tail == law.tail);
    CHECK(back.tail_ratio == law.tail_ratio);

    Json bad = to_json(law);
    bad["tail"] = "exotic";
    CHECK_THROWS_AS(digit_law_from_json(bad), ValidationError);
}

TEST_CASE("polymorphic process loading") {
    IIDSpec iid;
    iid.default_law = DigitLaw::uniform(1, 3);
    iid.per_index = {DigitLaw::point_mass(2)};
    const auto iid_proc = process_from_json(to_json(iid));
    CHECK(iid_proc->name() == "iid");
    CHECK(process_cylinder_mass(*iid_proc, DigitWord{2, 1}) ==
          doctest::Approx(1.0 / 3.0));

    MarkovSpec markov;
    markov.order = 1;
    markov.max_digit = 2;
    markov.initial = {0.25, 0.75};
    DigitLaw row;
    row.masses = {0.5, 0.5};
    markov.rows = {row, row};
    const auto markov_proc = process_from_json(to_json(markov));
    CHECK(markov_proc->name() == "markov-table");
    CHECK(process_cylinder_mass(*markov_proc, DigitWord{2, 1}) ==
          doctest::Approx(0.375));

    const auto gauss = process_from_json(Json{{"kind", "gauss-markov"}, {"order", 3}});
    CHECK(gauss->name() == "gauss-markov-3");
    CHECK(gauss->min_word_length() == 3);

    const auto mu_g = process_from_json(Json{{"kind", "mu-g"}});
    CHECK(mu_g->name() == "mu-g");

    CHECK_THROWS_AS(process_from_json(Json{{"kind", "unknown"}}), ValidationError);
}

TEST_CASE("process serialization is its own inverse") {
    const GaussMarkovProcess chain(2);
    const Json j = process_to_json(chain);
    const auto back = process_from_json(j);
    CHECK(back->name() == chain.name());
}

TEST_CASE("deviation series CSV has the documented columns") {
    DeviationSeries s;
    s.a = DigitWord{1};
    s.delta = 0.2;
    s.q = SubsequenceSpec::identity();
    s.entries.push_back({10, 0.25, 0.015625, 1000, 250});
    s.entries.push_back({20, 0.125, 0.0078125, 1000, 125});
    const std::string csv = deviation_series_csv(s);
    CHECK(csv.rfind("n,estimate,stderr,samples\n", 0) == 0);
    CHECK(csv.find("10,0.25,0.015625,1000\n") != std::string::npos);
    CHECK(csv.find("20,0.125,0.0078125,1000\n") != std::string::npos);
}

TEST_CASE("subsequence specs round trip") {
    for (const auto& q : {SubsequenceSpec::identity(), SubsequenceSpec::arithmetic(4),
                          SubsequenceSpec::explicit_list({1, 4, 9, 16}, 5.0)}) {
        const SubsequenceSpec back = subsequence_from_json(to_json(q));
        CHECK(back.kind == q.kind);
        CHECK(back.step == q.step);
        CHECK(back.indices == q.indices);
        CHECK(back.l_witness == q.l_witness);
    }
}

TEST_CASE("experiment config round trips unchanged") {
    ExperimentConfig cfg;
    cfg.subcommand = "dev decay";
    cfg.params = Json{{"word", "1"}, {"delta", 0.2}, {"samples", 100000}};
    cfg.output = "out.csv";
    cfg.format = "csv";
    cfg.seed = 987654321;
    cfg.seed_explicit = true;
    cfg.workers = 4;
    cfg.no_timestamp = true;

    const Json j = to_json(cfg);
    const ExperimentConfig back = experiment_config_from_json(j);
    CHECK(to_json(back) == j);
}

TEST_CASE("result records carry the documented fields") {
    DimensionEstimate est;
    est.entropy = 2.4;
    est.lyapunov = 2.5;
    est.dim = 0.96;
    est.method = "series";
    const Json j = to_json(est);
    for (const char* key : {"entropy", "lyapunov", "dim", "stderr_h", "stderr_gamma",
                            "method", "samples_h", "samples_gamma"})
        CHECK(j.contains(key));

    GapReport gap;
    gap.k = 4;
    const Json gj = to_json(gap);
    for (const char* key : {"k", "dim_estimate", "bound", "entropy_check", "lyapunov_gap",
                            "lyapunov_gap_bound"})
        CHECK(gj.contains(key));
}
