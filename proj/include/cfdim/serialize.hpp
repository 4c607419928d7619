#pragma once

#include <json.hpp>

#include <memory>
#include <string>

#include "cfdim/deviations.hpp"
#include "cfdim/dimension.hpp"
#include "cfdim/fexp.hpp"
#include "cfdim/gauss.hpp"
#include "cfdim/process.hpp"

namespace cfdim {

using Json = nlohmann::json;

Json to_json(const DigitLaw& law);
DigitLaw digit_law_from_json(const Json& j);

Json to_json(const IIDSpec& spec);
Json to_json(const MarkovSpec& spec);
Json to_json(const GaussMarkovProcess& proc);

// polymorphic loader keyed on the "kind" field:
// iid | markov-table | gauss-markov | mu-g
std::unique_ptr<DigitProcess> process_from_json(const Json& j);
Json process_to_json(const DigitProcess& proc);

Json to_json(const MCEstimate& e);
Json to_json(const EntropyEstimate& e);
Json to_json(const LyapunovPair& e);
Json to_json(const DimensionEstimate& e);
Json to_json(const GapReport& r);
Json to_json(const MarkovDefectWitness& w);
Json to_json(const StationarityReport& r);
Json to_json(const SubsequenceSpec& q);
SubsequenceSpec subsequence_from_json(const Json& j);
Json to_json(const DeviationSeries& s);
Json to_json(const DecayFit& f);
Json to_json(const DeviationEstimate& e);
Json to_json(const ConditionReport& r);
Json to_json(const InvariantDensity& d);

// CSV body for a deviation series: header "n,estimate,stderr,samples".
std::string deviation_series_csv(const DeviationSeries& s);

// CLI experiment configuration; round-trips unchanged through JSON.
struct ExperimentConfig {
    std::string subcommand;
    Json params = Json::object();
    std::string output;        // empty = stdout
    std::string format = "json";  // csv | json
    std::uint64_t seed = 0;
    bool seed_explicit = false;
    unsigned workers = 1;
    bool no_timestamp = false;
};

Json to_json(const ExperimentConfig& c);
ExperimentConfig experiment_config_from_json(const Json& j);

}  // namespace cfdim
