#pragma once

#include "omg/cardinal.hpp"
#include "omg/density_example.hpp"
#include "omg/extraction.hpp"
#include "omg/games.hpp"
#include "omg/ku_product.hpp"
#include "omg/sequences.hpp"

#include <json.hpp>

#include <string>

namespace omg {

using Json = nlohmann::json;

Json space_to_json(const Space& space);
SpacePtr space_from_json(const Json& j);

Json open_set_to_json(const Space& space, const OpenSet& s);
OpenSet open_set_from_json(const Space& space, const Json& j);

Json move_to_json(const Space& space, const Move& m);
Move move_from_json(const Space& space, const Json& j);

Json transcript_to_json(const Space& space, const Transcript& t);
Transcript transcript_from_json(const Space& space, const Json& j);

Json sequence_to_json(const FamilySequence& seq);
FamilySequence sequence_from_json(const Json& j);

Json function_family_to_json(const FunctionFamily& F);
FunctionFamily function_family_from_json(const Json& j);

struct StrategyFile {
    GameKind kind = GameKind::G2;
    StrategyPtr strategy;
};
Json strategy_to_json(const Space& space, GameKind kind, const TableStrategy& s);
StrategyFile strategy_from_json(const Space& space, const Json& j);

Json verify_result_to_json(const Space& space, const VerifyResult& r);
Json cross_play_to_json(const CrossPlayReport& r);
Json tiny_extraction_to_json(const Space& space, const TinyExtraction& e);
Json one_tiny_extraction_to_json(const Space& space, const OneTinyExtraction& e);
Json ku_report_to_json(const KuReport& r);
Json greedy_to_json(const GreedyDefeat& g);
Json separation_report_to_json(const SeparationReport& r);
Json transform_check_to_json(const TransformCheck& c);

Json load_json_file(const std::string& path);  // ProtocolError on malformed input

}  // namespace omg
