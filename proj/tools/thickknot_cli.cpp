// Command-line front end: generation, thickness reports, sampling, canonicalization and export.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "thickknot/canonicalize.hpp"
#include "thickknot/diagnostics.hpp"
#include "thickknot/errors.hpp"
#include "thickknot/knot_io.hpp"
#include "thickknot/mcmc.hpp"
#include "thickknot/observables.hpp"
#include "thickknot/thickness.hpp"

using namespace thickknot;

namespace {

constexpr int kExitData = 2;
constexpr int kExitPipeline = 3;

std::string g17(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

// "-" is standard output.
class Output {
  public:
    explicit Output(const std::string& path) {
        if (path != "-") {
            file_ = std::make_unique<std::ofstream>(path);
            if (!*file_) throw KnotError("cannot open " + path + " for writing");
        }
    }
    std::ostream& stream() { return file_ ? *file_ : std::cout; }

  private:
    std::unique_ptr<std::ofstream> file_;
};

ReadResult load(const std::string& path) {
    ReadResult r = read_knots(path);
    for (const auto& w : r.warnings) std::cerr << "warning: " << w << '\n';
    return r;
}

std::vector<std::string> split_commas(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream in(s);
    for (std::string item; std::getline(in, item, ',');) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

void cmd_gen_regular(std::size_t n, const std::string& out_path) {
    const auto k = regular_polygon(n);
    Output out(out_path);
    write_knots(out.stream(), {{{{"thickness", g17(thickness(k))}}, k}});
}

void cmd_thickness(const std::string& in_path) {
    const auto input = load(in_path);
    for (std::size_t r = 0; r < input.records.size(); ++r) {
        const auto& k = input.records[r].polygon;
        const ThicknessReport rep = injectivity_radius(k);
        if (r > 0) std::cout << '\n';
        std::cout << "record=" << r << '\n'
                  << "n=" << k.size() << '\n'
                  << "thickness=" << g17(rep.thickness) << '\n'
                  << "injectivity_radius=" << g17(rep.injectivity_radius) << '\n'
                  << "minrad=" << g17(rep.minrad) << '\n'
                  << "minrad_vertex=" << rep.minrad_vertex << '\n'
                  << "dcsd=" << (rep.dcsd ? g17(*rep.dcsd) : std::string("none")) << '\n'
                  << "arclength=" << g17(rep.arclength) << '\n';
    }
}

struct SampleOptions {
    std::size_t n = 10;
    double t = 0.0;
    std::uint64_t steps = 10000;
    std::uint64_t burn_in = 0;
    std::uint64_t stride = 100;
    std::uint64_t seed = 1;
    std::size_t cap = 6;
    std::string cont_prob;
    std::string start;
    std::string out = "-";
    std::string stats;
};

void cmd_sample(const SampleOptions& o) {
    ChainConfig cfg;
    cfg.n = o.n;
    cfg.t = o.t;
    cfg.steps = o.steps;
    cfg.burn_in = o.burn_in;
    cfg.stride = o.stride;
    cfg.seed = o.seed;
    cfg.N = o.cap;
    if (!o.cont_prob.empty()) {
        for (const auto& item : split_commas(o.cont_prob)) cfg.p.push_back(std::stod(item));
        if (cfg.p.size() == 1) cfg.p.assign(cfg.N, cfg.p[0]);
    }
    if (!o.start.empty()) {
        auto in = load(o.start);
        if (in.records.empty()) throw ConfigError("start file has no records");
        cfg.start = in.records.front().polygon;
        cfg.n = cfg.start->size();
    }
    for (const auto& w : validate_config(cfg)) std::cerr << "warning: " << w << '\n';

    Output out(o.out);
    std::unique_ptr<Output> stats;
    if (!o.stats.empty()) stats = std::make_unique<Output>(o.stats);
    bool first = true;
    const auto summary = run_chain(cfg, [&](const ChainSample& s) {
        const StatsRecord rec = make_stats_record(*s.polygon, s.step, s.accepted, s.m);
        if (!first) out.stream() << '\n';
        first = false;
        write_knots(out.stream(), {{{{"thickness", g17(rec.thickness)},
                                     {"seed", std::to_string(cfg.seed)},
                                     {"step", std::to_string(s.step)}},
                                    *s.polygon}});
        if (stats) stats->stream() << format_stats(rec) << '\n';
    });
    std::cerr << "steps=" << summary.steps << " accepted=" << summary.accepted << " rejected=" << summary.rejected
              << " degenerate=" << summary.degenerate << " emitted=" << summary.emitted
              << " acceptance_rate=" << summary.acceptance_rate() << " audits=" << summary.audits
              << " renormalizations=" << summary.renormalizations << " max_audit_drift=" << summary.max_audit_drift
              << '\n';
    std::cerr << "m_histogram=";
    for (std::size_t m = 0; m < summary.m_histogram.size(); ++m) {
        std::cerr << (m ? "," : "") << summary.m_histogram[m];
    }
    std::cerr << '\n';
}

void cmd_canonicalize(const std::string& in_path, const std::string& trace_path, const std::string& out_path) {
    const auto input = load(in_path);
    std::unique_ptr<Output> trace_out;
    if (!trace_path.empty()) trace_out = std::make_unique<Output>(trace_path);
    std::vector<KnotRecord> finals;
    for (std::size_t r = 0; r < input.records.size(); ++r) {
        const auto trace = canonicalize(input.records[r].polygon);
        if (trace_out) write_trace(trace_out->stream(), trace);
        finals.push_back({{{"thickness", g17(thickness(trace.final_polygon))}, {"final_rms", g17(trace.final_rms)}},
                          trace.final_polygon});
        std::cerr << "record " << r << ": " << trace.entries.size() << " moves, final_rms=" << trace.final_rms << '\n';
    }
    Output out(out_path);
    write_knots(out.stream(), finals);
}

void cmd_analyze(const std::string& in_path, const std::string& observables) {
    const auto names = split_commas(observables);
    bool gyration = false, thick = false, unknot = false;
    for (const auto& name : names) {
        if (name == "gyration") gyration = true;
        else if (name == "thickness") thick = true;
        else if (name == "unknot") unknot = true;
        else throw CLI::ValidationError("--observables", "unknown observable " + name);
    }
    const auto input = load(in_path);
    std::vector<double> rg2, th, trivial;
    for (std::size_t r = 0; r < input.records.size(); ++r) {
        const auto& k = input.records[r].polygon;
        std::cout << "record=" << r;
        if (gyration) {
            rg2.push_back(radius_of_gyration_squared(k));
            std::cout << " rg=" << g17(std::sqrt(rg2.back())) << " rg2=" << g17(rg2.back());
        }
        if (thick) {
            th.push_back(thickness(k));
            std::cout << " thickness=" << g17(th.back());
        }
        if (unknot) {
            const auto det = alexander_determinant(k);
            trivial.push_back(det == 1 ? 1.0 : 0.0);
            std::cout << " det=" << det << " unknot_candidate=" << (det == 1 ? 1 : 0);
        }
        std::cout << '\n';
    }
    auto summarize = [](const char* name, const std::vector<double>& v) {
        if (v.empty()) return;
        std::cout << "# " << name << "_mean=";
        if (v.size() >= 100) {
            const auto d = diagnose(v);
            std::cout << g17(d.mean) << ' ' << name << "_se=" << g17(d.standard_error) << ' ' << name
                      << "_iat=" << g17(d.iat);
        } else {
            double s = 0.0;
            for (double x : v) s += x;
            std::cout << g17(s / v.size());
        }
        std::cout << '\n';
    };
    summarize("rg2", rg2);
    summarize("thickness", th);
    summarize("unknot_candidate", trivial);
}

void cmd_convert(const std::string& in_path, const std::string& format, const std::string& out_path) {
    const auto input = load(in_path);
    Output out(out_path);
    if (format == "obj") write_obj(out.stream(), input.records);
    else write_knots(out.stream(), input.records);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sample and analyze thick equilateral knot polygons"};
    app.require_subcommand(1);

    std::size_t gen_n = 10;
    std::string gen_out = "-";
    auto* gen = app.add_subcommand("gen-regular", "Write the regular planar n-gon");
    gen->add_option("--n", gen_n, "Vertex count")->required()->check(CLI::Range(3, 1000000));
    gen->add_option("--out", gen_out, "Output knot file");

    std::string thick_in;
    auto* thick = app.add_subcommand("thickness", "Print the thickness report of every record");
    thick->add_option("file", thick_in, "Knot file, - for standard input")->required();

    SampleOptions so;
    auto* sample = app.add_subcommand("sample", "Run the reflection chain");
    sample->add_option("--n", so.n, "Vertex count");
    sample->add_option("--thickness", so.t, "Thickness lower bound");
    sample->add_option("--steps", so.steps, "Chain steps");
    sample->add_option("--burn-in", so.burn_in, "Steps before the first emitted sample");
    sample->add_option("--stride", so.stride, "Steps between emitted samples");
    sample->add_option("--seed", so.seed, "Random seed");
    sample->add_option("--cap", so.cap, "Batch cap N");
    sample->add_option("--cont-prob", so.cont_prob, "Continuation probability, or N comma-separated values");
    sample->add_option("--start", so.start, "Start from the first record of this knot file");
    sample->add_option("--out", so.out, "Output knot file");
    sample->add_option("--stats", so.stats, "Stats record file");

    std::string canon_in, canon_trace, canon_out = "-";
    auto* canon = app.add_subcommand("canonicalize", "Move every record to the regular polygon");
    canon->add_option("file", canon_in, "Knot file")->required();
    canon->add_option("--trace", canon_trace, "Trace record file");
    canon->add_option("--out", canon_out, "Final polygons");

    std::string an_in, an_obs = "gyration,thickness,unknot";
    auto* analyze = app.add_subcommand("analyze", "Per-record observables and ensemble summaries");
    analyze->add_option("file", an_in, "Knot file")->required();
    analyze->add_option("--observables", an_obs, "Comma-separated: gyration, thickness, unknot");

    std::string conv_in, conv_to = "obj", conv_out = "-";
    auto* convert = app.add_subcommand("convert", "Export geometry");
    convert->add_option("file", conv_in, "Knot file")->required();
    convert->add_option("--to", conv_to, "Format")->check(CLI::IsMember({"obj", "knots"}));
    convert->add_option("--out", conv_out, "Output file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // Help requests exit 0; anything else is a usage error.
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        if (gen->parsed()) cmd_gen_regular(gen_n, gen_out);
        else if (thick->parsed()) cmd_thickness(thick_in);
        else if (sample->parsed()) cmd_sample(so);
        else if (canon->parsed()) cmd_canonicalize(canon_in, canon_trace, canon_out);
        else if (analyze->parsed()) cmd_analyze(an_in, an_obs);
        else if (convert->parsed()) cmd_convert(conv_in, conv_to, conv_out);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const PipelineStall& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitPipeline;
    } catch (const IntegrityFailure& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitPipeline;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitData;
    }
    return 0;
}
