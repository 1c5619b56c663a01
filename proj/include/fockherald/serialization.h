#pragma once

#include <json.hpp>

#include "fockherald/fock_state.h"
#include "fockherald/protocols.h"

namespace fockherald {

/// {"modes":[{"path":int,"pol":"H"|"V"|null}], "cutoff":int, "leaked_norm":float,
///  "terms":[{"occ":[int,...],"re":float,"im":float}]}, terms in lexicographic order.
nlohmann::json state_to_json(const PureState &state);

/// Inverse of state_to_json. Throws std::invalid_argument on malformed input.
PureState state_from_json(const nlohmann::json &json);

/// {"protocol", "gamma1", "gamma2", "success_probability",
///  "paper_claimed_probability" (null when none), "fidelity", "leaked_norm",
///  "output_state"}.
nlohmann::json result_to_json(const ProtocolResult &result);

}  // namespace fockherald
