#pragma once

// JSON encodings shared by the service, the CLI and the Python module.

#include <json.hpp>

#include "natded/engine.hpp"
#include "natded/prover.hpp"
#include "natded/semantics.hpp"

namespace natded {

using json = nlohmann::json;

// Feasibility colour of a line: "closed" for applied lines; for open
// leaves "unknown" until assessed, then "feasible" or "orange".
json wire_state(const ProofState& state, const Verdictmap* verdicts = nullptr);

// Verdicts keyed by line number.
json wire_verdicts(const ProofState& state, const Verdictmap& verdicts);

json wire_countermodel(const CountermodelResult& result);

json wire_check_failure(const CheckFailure& failure);

// Body of an error response.
json wire_error(const std::string& code, const std::string& message, const json& detail = json::object());

}  // namespace natded
