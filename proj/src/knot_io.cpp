#include "thickknot/knot_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "thickknot/errors.hpp"
#include "thickknot/observables.hpp"
#include "thickknot/thickness.hpp"

namespace thickknot {

namespace {

std::string g17(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::vector<std::string> split_ws(const std::string& s) {
    std::istringstream in(s);
    std::vector<std::string> out;
    for (std::string tok; in >> tok;) out.push_back(tok);
    return out;
}

bool parse_double(const std::string& tok, double& out) {
    const char* end = tok.data() + tok.size();
    auto [ptr, ec] = std::from_chars(tok.data(), end, out);
    return ec == std::errc() && ptr == end;
}

bool is_blank(const std::string& line) { return line.find_first_not_of(" \t\r") == std::string::npos; }

struct PendingRecord {
    std::map<std::string, std::string> header;
    std::vector<Point3> vertices;
    std::size_t first_line = 0;
    bool empty() const { return header.empty() && vertices.empty(); }
};

void finish_record(PendingRecord& rec, ReadResult& result) {
    if (rec.empty()) return;
    const std::size_t index = result.records.size();
    if (auto it = rec.header.find("n"); it != rec.header.end()) {
        if (it->second != std::to_string(rec.vertices.size())) {
            throw ParseError(rec.first_line, "header n=" + it->second + " but record has " +
                                                 std::to_string(rec.vertices.size()) + " vertices");
        }
    }
    ValidatedPolygon v;
    try {
        v = validate_polygon(rec.vertices);
    } catch (const TooFewVertices& e) {
        throw TooFewVertices(e.count, index);
    } catch (const EdgeLengthViolation& e) {
        throw EdgeLengthViolation(e.edge, e.deviation, index);
    }
    if (auto it = rec.header.find("thickness"); it != rec.header.end()) {
        double claimed = 0.0;
        if (!parse_double(it->second, claimed)) {
            throw ParseError(rec.first_line, "thickness header is not a number: " + it->second);
        }
        const double actual = thickness(v.polygon);
        if (std::abs(claimed - actual) > 1e-6) {
            result.warnings.push_back("record " + std::to_string(index) + ": header thickness " + it->second +
                                      " differs from recomputed " + g17(actual));
        }
    }
    result.records.push_back({std::move(rec.header), std::move(v.polygon)});
    rec = PendingRecord{};
}

}  // namespace

void write_knots(std::ostream& out, const std::vector<KnotRecord>& records) {
    for (std::size_t r = 0; r < records.size(); ++r) {
        if (r > 0) out << '\n';
        const auto& rec = records[r];
        out << "# n=" << rec.polygon.size() << '\n';
        for (const auto& [key, value] : rec.header) {
            if (key != "n") out << "# " << key << '=' << value << '\n';
        }
        for (const auto& p : rec.polygon.vertices()) {
            out << g17(p.x) << ' ' << g17(p.y) << ' ' << g17(p.z) << '\n';
        }
    }
}

void write_knots(const std::string& path, const std::vector<KnotRecord>& records) {
    if (path == "-") {
        write_knots(std::cout, records);
        return;
    }
    std::ofstream out(path);
    if (!out) throw KnotError("cannot open " + path + " for writing");
    write_knots(out, records);
}

ReadResult read_knots(std::istream& in) {
    ReadResult result;
    PendingRecord rec;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (is_blank(line)) {
            finish_record(rec, result);
            continue;
        }
        if (rec.empty()) rec.first_line = line_no;
        if (line[0] == '#') {
            if (!rec.vertices.empty()) throw ParseError(line_no, "header line after vertex lines");
            for (const auto& tok : split_ws(line.substr(1))) {
                const auto eq = tok.find('=');
                if (eq == std::string::npos || eq == 0) throw ParseError(line_no, "expected key=value, got '" + tok + "'");
                rec.header[tok.substr(0, eq)] = tok.substr(eq + 1);
            }
            continue;
        }
        const auto toks = split_ws(line);
        if (toks.size() != 3) throw ParseError(line_no, "expected three coordinates");
        Point3 p;
        if (!parse_double(toks[0], p.x) || !parse_double(toks[1], p.y) || !parse_double(toks[2], p.z)) {
            throw ParseError(line_no, "bad coordinate");
        }
        if (!std::isfinite(p.x) || !std::isfinite(p.y) || !std::isfinite(p.z)) {
            throw ParseError(line_no, "non-finite coordinate");
        }
        rec.vertices.push_back(p);
    }
    finish_record(rec, result);
    return result;
}

ReadResult read_knots(const std::string& path) {
    if (path == "-") return read_knots(std::cin);
    std::ifstream in(path);
    if (!in) throw KnotError("cannot open " + path);
    return read_knots(in);
}

StatsRecord make_stats_record(const KnotPolygon& k, std::uint64_t step, bool accepted, std::size_t m) {
    const ThicknessReport r = injectivity_radius(k);
    StatsRecord s;
    s.step = step;
    s.thickness = r.thickness;
    s.minrad = r.minrad;
    s.dcsd = r.dcsd.value_or(-1.0);
    s.rg2 = radius_of_gyration_squared(k);
    s.accepted = accepted;
    s.m = m;
    return s;
}

std::string format_stats(const StatsRecord& r) {
    return "step=" + std::to_string(r.step) + " thickness=" + g17(r.thickness) + " minrad=" + g17(r.minrad) +
           " dcsd=" + g17(r.dcsd) + " rg2=" + g17(r.rg2) + " accepted=" + (r.accepted ? "1" : "0") +
           " m=" + std::to_string(r.m);
}

StatsRecord parse_stats(const std::string& line) {
    StatsRecord r;
    for (const auto& tok : split_ws(line)) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos) throw ParseError(1, "expected key=value, got '" + tok + "'");
        const std::string key = tok.substr(0, eq);
        const std::string value = tok.substr(eq + 1);
        double x = 0.0;
        if (!parse_double(value, x)) throw ParseError(1, "bad value for " + key);
        if (key == "step") r.step = static_cast<std::uint64_t>(x);
        else if (key == "thickness") r.thickness = x;
        else if (key == "minrad") r.minrad = x;
        else if (key == "dcsd") r.dcsd = x;
        else if (key == "rg2") r.rg2 = x;
        else if (key == "accepted") r.accepted = x != 0.0;
        else if (key == "m") r.m = static_cast<std::size_t>(x);
    }
    return r;
}

void write_trace(std::ostream& out, const CanonicalizationTrace& trace) {
    out << "# n=" << trace.initial.size() << " entries=" << trace.entries.size()
        << " initial_thickness=" << g17(thickness(trace.initial))
        << " final_thickness=" << g17(thickness(trace.final_polygon)) << " final_rms=" << g17(trace.final_rms) << '\n';
    for (std::size_t i = 0; i < trace.entries.size(); ++i) {
        const auto& e = trace.entries[i];
        // The move description contains spaces, so it goes last.
        out << "index=" << i << " stage=" << stage_name(e.stage) << " thickness_before=" << g17(e.thickness_before)
            << " thickness_after=" << g17(e.thickness_after) << " mu=" << g17(e.mu) << " incidence=" << e.incidence
            << " min_height=" << e.min_height_count << " move=" << describe(e.move) << '\n';
    }
}

void write_obj(std::ostream& out, const std::vector<KnotRecord>& records) {
    std::size_t base = 1;
    for (std::size_t r = 0; r < records.size(); ++r) {
        const auto& k = records[r].polygon;
        out << "o knot" << r << '\n';
        for (const auto& p : k.vertices()) out << "v " << g17(p.x) << ' ' << g17(p.y) << ' ' << g17(p.z) << '\n';
        out << 'l';
        for (std::size_t i = 0; i < k.size(); ++i) out << ' ' << base + i;
        out << ' ' << base << '\n';
        base += k.size();
    }
}

}  // namespace thickknot
