#pragma once

#include "json.hpp"

#include "gev/associated_function.hpp"
#include "gev/gevrey_sequence.hpp"
#include "gev/regularity.hpp"
#include "gev/wavefront.hpp"
#include "gev/window.hpp"

namespace gev {

// Non-finite doubles serialize as null.
void to_json(nlohmann::json& j, const GevreyParams& p);
void to_json(nlohmann::json& j, const Violation& v);
void to_json(nlohmann::json& j, const SequenceReport& r);
void to_json(nlohmann::json& j, const AssocEval& e);
void to_json(nlohmann::json& j, const AsymptoticBracket& b);
void to_json(nlohmann::json& j, const DerivativeNorms& d);
void to_json(nlohmann::json& j, const DerivativeCertificate& c);
void to_json(nlohmann::json& j, const MomentReport& r);
void to_json(nlohmann::json& j, const EnvelopeMargin& m);
void to_json(nlohmann::json& j, const BeurlingReport& r);
void to_json(nlohmann::json& j, const DecayFit& f);
void to_json(nlohmann::json& j, const WavefrontCell& c);
void to_json(nlohmann::json& j, const WaveFrontReport& r);
void to_json(nlohmann::json& j, const Interval& i);
void to_json(nlohmann::json& j, const CutoffCheck& c);

void from_json(const nlohmann::json& j, GevreyParams& p);

// Pretty-printed with a trailing newline.
std::string dump(const nlohmann::json& j);

}  // namespace gev
