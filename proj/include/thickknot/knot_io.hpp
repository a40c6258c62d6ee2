#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "thickknot/canonicalize.hpp"
#include "thickknot/polygon.hpp"

namespace thickknot {

/// One polygon of a knot file with its optional `# key=value` header lines.
struct KnotRecord {
    std::map<std::string, std::string> header;
    KnotPolygon polygon;
};

/// Records are separated by one blank line; coordinates are written with 17 significant digits
/// so reading back reproduces every double exactly.
void write_knots(std::ostream& out, const std::vector<KnotRecord>& records);
void write_knots(const std::string& path, const std::vector<KnotRecord>& records);

struct ReadResult {
    std::vector<KnotRecord> records;
    /// Non-fatal findings, such as a header thickness that disagrees with the recomputed value.
    std::vector<std::string> warnings;
};

/// Throws ParseError (with line number), or TooFewVertices / EdgeLengthViolation tagged with the
/// record index. `path` "-" reads standard input.
ReadResult read_knots(std::istream& in);
ReadResult read_knots(const std::string& path);

/// One row per emitted sample.
struct StatsRecord {
    std::uint64_t step = 0;
    double thickness = 0.0;
    double minrad = 0.0;
    /// Negative when the polygon has no doubly critical pair.
    double dcsd = -1.0;
    double rg2 = 0.0;
    bool accepted = true;
    std::size_t m = 0;
};

StatsRecord make_stats_record(const KnotPolygon& k, std::uint64_t step, bool accepted, std::size_t m);

/// Line-delimited `key=value` records separated by spaces, one per line.
std::string format_stats(const StatsRecord& r);
StatsRecord parse_stats(const std::string& line);

/// One line per trace entry, plus a header line with the initial and final summary.
void write_trace(std::ostream& out, const CanonicalizationTrace& trace);

/// Closed polyline per record: `v` lines and one `l` line, indices offset across records.
void write_obj(std::ostream& out, const std::vector<KnotRecord>& records);

}  // namespace thickknot
