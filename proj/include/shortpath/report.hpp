#ifndef SHORTPATH_REPORT_HPP
#define SHORTPATH_REPORT_HPP

#include "shortpath/analyze.hpp"
#include "shortpath/bounds.hpp"
#include "shortpath/bwpt.hpp"

#include <json.hpp>

#include <iosfwd>
#include <string>

namespace shortpath {

using Json = nlohmann::json;

inline constexpr int kReportSchemaVersion = 1;

/// "%a" rendering; every real field `x` is written next to `x_hex`.
std::string hex_double(double v);
/// Sets obj[key] (null when non-finite) and obj[key + "_hex"].
void put_real(Json& obj, const std::string& key, double v);
void put_real(Json& obj, const std::string& key, const std::optional<double>& v);

Json instance_json(const Problem& problem);
Json instance_json(const Instance& instance, const DiagonalTable& table, const GroundSpaceInfo& ground);
Json to_json(const SpectralReport& r);
Json to_json(const TheoremReport& r);
Json to_json(const SimulationRecord& r);
Json to_json(const BwContext& ctx);
Json to_json(const OverlapReport& r);
Json to_json(const WalkEstimate& r);
Json to_json(const Item2Check& r);
Json to_json(const EigenvLemmaRecord& r);
Json to_json(const KboundRecord& r);
Json to_json(const PxkNorm& r);
Json to_json(const DosHistogram& r);
Json to_json(const PowerLawFit& r);
Json to_json(const ParameterChoice& r);
Json to_json(const HassolnRecord& r);
Json to_json(const BaselineRecord& r);
Json to_json(const TheoremConstants& c);

/// Top-level envelope: schema_version, command, workers and the body keys.
Json make_report(const std::string& command, const Json& body);

/// Pretty-printed with sorted keys and a trailing newline.
void write_report(const Json& report, std::ostream& out);

/// "k,energy_low,count" rows.
void write_dos_csv(const DosHistogram& hist, std::ostream& out);
/// "index,eigenvalue" rows, 17 significant digits.
void write_eigenvalues_csv(const std::vector<double>& values, std::ostream& out);

}  // namespace shortpath

#endif  // SHORTPATH_REPORT_HPP
