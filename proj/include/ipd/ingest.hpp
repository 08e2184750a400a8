#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "ipd/session.hpp"

namespace ipd::ingest {

struct Diagnostic {
  enum class Severity { Error, Warning };
  Severity severity = Severity::Error;
  std::string location;  // "line 12", "session s1", ...
  std::string message;
};
using Diagnostics = std::vector<Diagnostic>;

bool has_errors(const Diagnostics& diags);
std::string format_diagnostics(const Diagnostics& diags);

struct ParseResult {
  std::vector<SessionData> sessions;
  Diagnostics diagnostics;
};

// Parse session CSV text (header:
// session_id,treatment,round,player_id,partner_id,action). Every structural
// problem is reported with its location; rows are never silently dropped —
// any malformed row yields an error diagnostic and sessions are only returned
// for fully consistent data.
ParseResult parse_session_csv(std::string_view text);
ParseResult load_session_csv(const std::filesystem::path& path);

// Exact inverse of parsing for valid data: one row per (player, round),
// ordered by session, round, then player roster order.
std::string write_session_csv(const std::vector<SessionData>& sessions);

// Same records as the CSV schema, as a JSON array of row objects.
std::string write_session_json(const std::vector<SessionData>& sessions);

// Per-treatment context/cooperation table (header:
// treatment,context,frequency,cooperation,percentage). Rows cover the four
// contexts for each treatment present in `sessions`; percentages are computed
// from the raw counts and truncated to two decimals; contexts that never
// occurred report "NA".
std::string export_context_table(const std::vector<SessionData>& sessions);

// Percentage formatting used by the table: floor(100 * coop / freq to two
// decimals), rendered like "77.38%". Exposed for tests.
std::string format_percent(long cooperations, long occurrences);

}  // namespace ipd::ingest
