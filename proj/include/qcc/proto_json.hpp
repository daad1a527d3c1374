// JSON form of protocol programs: step lists with matrices as nested
// arrays of [re, im] pairs. The schema is documented in
// docs/protocol_schema.md.

#pragma once

#include "qcc/protovm.hpp"

#include "json.hpp"

namespace qcc {

using Json = nlohmann::ordered_json;

Json to_json(const BitExpr& expr);
BitExpr expr_from_json(const Json& j);

Json to_json(const Step& step);
Step step_from_json(const Json& j);

Json to_json(const ProtocolProgram& program);

/// Parses and validates (labels, matrix unitarity at kTol, output
/// references). Throws std::invalid_argument on any malformed input.
ProtocolProgram program_from_json(const Json& j);

}  // namespace qcc
