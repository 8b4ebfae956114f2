#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "exmono/adjoint_modl.hpp"
#include "exmono/chevalley.hpp"
#include "exmono/curve_forge.hpp"
#include "exmono/principal_sl2.hpp"
#include "exmono/root_data.hpp"
#include "exmono/selmer_ledger.hpp"

namespace exmono {

/// Canonical JSON: keys sorted, integers written as decimal strings.
using Json = nlohmann::json;

constexpr int kSchemaVersion = 1;

/// Pretty-printed with a trailing newline; byte-stable for equal input.
std::string dump_canonical(const Json& j);

Json to_json(const WeierstrassEquation& e);
WeierstrassEquation equation_from_json(const Json& j);

Json to_json(const SeedCertificate& c);
SeedCertificate certificate_from_json(const Json& j);

Json to_json(const SelmerInstance& inst);
SelmerInstance instance_from_json(const Json& j);

Json to_json(const AdmissibilityReport& r);
Json to_json(const JacobiReport& r);
Json to_json(const StringDecomposition& d);
Json to_json(const NoSectionReport& r);
Json to_json(const RegReport& r);
Json to_json(const CampaignReport& r);

}  // namespace exmono
