#pragma once

#include "rcrs/component.hpp"

#include "json.hpp"

#include <string>
#include <utility>
#include <vector>

namespace rcrs {

// Library blocks: Add, Sub, UnitDelay{init}, Split, Const{c}, Id, Div, Gain{k},
// Integrator{dt}, TransferFcn{dt}, and Component{rcrs} for an inline atomic
// component.  Numeric blocks take an optional "type" of "int" or "real".
Atomic library_block(const std::string& name, const nlohmann::json& params);

struct Translation {
    Component term;
    // Named atomic pieces in order of first use, and the term over those names.
    std::vector<std::pair<std::string, Atomic>> pieces;
    std::string expression;

    // Parseable .rcrs text binding every piece and the diagram as `Diagram`.
    std::string source() const;
};

// Diagram JSON: {"inputs": [names], "outputs": [names], "blocks": [...],
// "wires": [{"src": [id, port], "dst": [id, port]}]}.  The pseudo-block "in"
// sources external inputs and "out" receives external outputs.  When
// "inputs" or "outputs" is absent, the open block ports (by id, then port)
// take their place.
Translation translate(const nlohmann::json& diagram);
Translation translate_file(const std::string& path);

}  // namespace rcrs
