// Command-line surface: ingest points, build or stream coresets, evaluate
// constrained costs, solve, and emit report JSON. Exit codes: 0 success,
// 1 infeasible constraint, 2 usage/format error, 3 enumeration cap exceeded.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>
#include <unistd.h>

#include "ccoreset/assignment.hpp"
#include "ccoreset/io.hpp"
#include "ccoreset/oracle.hpp"
#include "ccoreset/solver.hpp"
#include "ccoreset/stream.hpp"

namespace cc = ccoreset;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInfeasible = 1;
constexpr int kExitUsage = 2;
constexpr int kExitCap = 3;

struct CommonOpts {
    std::string input = "-";
    int dimension = 0;
    bool with_color = false;
    bool with_weight = false;
    std::string report = "text";
    std::string output;
};

void add_input_options(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("input", o.input, "points file, or '-' for standard input");
    cmd->add_option("--dim", o.dimension, "coordinate dimension (otherwise inferred)");
    cmd->add_flag("--with-color", o.with_color, "records carry a trailing color id");
    cmd->add_flag("--with-weight", o.with_weight, "records carry a trailing integer weight");
    cmd->add_option("--report", o.report, "report format: text or json")
        ->check(CLI::IsMember({"text", "json"}));
    cmd->add_option("-o,--output", o.output, "output file (default: standard output)");
}

cc::CsvOptions csv_options(const CommonOpts& o) {
    cc::CsvOptions c;
    c.dimension = o.dimension;
    c.with_color = o.with_color;
    c.with_weight = o.with_weight;
    return c;
}

cc::PointSet load_points(const CommonOpts& o) {
    if (o.input == "-") return cc::read_points_csv(std::cin, csv_options(o));
    std::ifstream in(o.input);
    if (!in) throw cc::FormatError("cannot open input file " + o.input);
    return cc::read_points_csv(in, csv_options(o));
}

bool looks_like_coreset(const std::string& path) {
    std::ifstream in(path);
    std::string head;
    std::getline(in, head);
    return head.rfind("coreset v1", 0) == 0;
}

cc::CenterSet load_centers(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw cc::FormatError("cannot open centers file " + path);
    cc::CenterSet centers;
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string t = line;
        if (t.find_first_not_of(" \t\r\n") == std::string::npos || t[0] == '#') continue;
        std::vector<double> coords;
        std::stringstream ss(t);
        std::string field;
        while (std::getline(ss, field, ',')) coords.push_back(std::stod(field));
        centers.push_back(cc::Point(std::move(coords)));
    }
    if (centers.empty()) throw cc::FormatError("no centers in " + path);
    return centers;
}

std::string load_text(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw cc::FormatError("cannot open file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::ostream& open_output(const CommonOpts& o, std::ofstream& file) {
    if (o.output.empty()) return std::cout;
    file.open(o.output);
    if (!file) throw cc::FormatError("cannot open output file " + o.output);
    return file;
}

void emit_matrix(cc::JsonWriter& w, const cc::ColorMatrix& K) {
    w.begin_array();
    for (int i = 0; i < K.rows; ++i) {
        w.begin_array();
        for (int j = 0; j < K.cols; ++j) w.value(K.at(i, j));
        w.end_array();
    }
    w.end_array();
}

void emit_centers(cc::JsonWriter& w, const cc::CenterSet& centers) {
    w.begin_array();
    for (const auto& c : centers) {
        w.begin_array();
        for (double x : c.coords) w.value(x);
        w.end_array();
    }
    w.end_array();
}

void dump_assignment(const std::string& path, const cc::Assignment& a,
                     const cc::ConstraintFamily& family, bool explicit_outlier_centers) {
    std::ofstream out(path);
    if (!out) throw cc::FormatError("cannot open assignment dump " + path);
    const int z = family.outlier_count();
    for (const auto& f : a.flows) {
        int center = explicit_outlier_centers ? f.cluster : (f.cluster < z ? -1 : f.cluster - z);
        out << '[' << f.entry << ',' << center << ',' << f.mass << "]\n";
    }
}

// -------- build-coreset --------

struct BuildOpts {
    CommonOpts common;
    int k = 0;
    double eps = 0.0;
    int power = 2;
    std::uint64_t seed = 1;
    std::string certificate_path;
    bool verify = false;
};

int run_build(const BuildOpts& o) {
    cc::PointSet points = load_points(o.common);
    cc::MetricConfig cfg(o.power, points.dimension());
    cc::Coreset cs = cc::build_movement_coreset(points, o.k, o.eps, cfg, o.seed);

    if (o.verify) {
        auto check = cc::verify_certificate(points, cs);
        if (!check.ok) {
            std::cerr << "certificate check failed: " << check.diagnostic << "\n";
            return kExitUsage;
        }
    }
    if (!o.certificate_path.empty() && cs.certificate) {
        std::ofstream out(o.certificate_path);
        cc::write_certificate(out, *cs.certificate);
    }

    // the coreset goes to the output file (or stdout); the report, when a file is
    // in use, goes to stdout
    std::ofstream file;
    std::ostream& out = open_output(o.common, file);
    cc::write_coreset(out, cs);
    if (!o.common.output.empty()) {
        if (o.common.report == "json") {
            cc::JsonWriter w(std::cout);
            w.begin_object();
            w.key("schema").value(1);
            w.key("command").value("build-coreset");
            w.key("k").value(o.k);
            w.key("eps").value(o.eps);
            w.key("m").value(o.power);
            w.key("n").value(points.total_weight());
            w.key("entries").value(static_cast<std::int64_t>(cs.points.size()));
            w.key("movement_cost").value(cs.certificate ? cs.certificate->movement_cost : 0.0);
            w.key("budget").value(cs.certificate ? cs.certificate->budget : 0.0);
            w.key("opt_lower_bound").value(cs.certificate ? cs.certificate->opt_lower_bound : 0.0);
            w.end_object();
            std::cout << '\n';
        } else {
            std::cout << "entries " << cs.points.size() << " of " << points.total_weight()
                      << " points\n";
        }
    }
    return kExitOk;
}

// -------- stream --------

struct StreamOpts {
    CommonOpts common;
    int k = 0;
    double eps = 0.0;
    int power = 2;
    int colors = 1;
    std::int64_t block = 0;
    std::uint64_t seed = 1;
    std::string checkpoint_path;
    std::string flush_flag;
    std::string resume_path;
};

int run_stream(const StreamOpts& o) {
    std::ifstream file_in;
    std::istream* in = &std::cin;
    if (o.common.input != "-") {
        file_in.open(o.common.input);
        if (!file_in) throw cc::FormatError("cannot open input file " + o.common.input);
        in = &file_in;
    }

    std::optional<cc::StreamState> state;
    if (!o.resume_path.empty()) {
        std::ifstream ck(o.resume_path);
        if (!ck) throw cc::FormatError("cannot open checkpoint " + o.resume_path);
        state = cc::read_checkpoint(ck);
    }

    cc::CsvOptions copts = csv_options(o.common);
    std::string line;
    long line_no = 0;
    int dim = state ? state->config().dimension : o.common.dimension;
    std::int64_t since_flush_check = 0;
    while (std::getline(*in, line)) {
        ++line_no;
        std::string t = line;
        auto pos = t.find_first_not_of(" \t\r\n");
        if (pos == std::string::npos || t[pos] == '#') continue;
        cc::WeightedColoredPoint rec = cc::parse_point_record(t, line_no, copts, dim);
        if (!state) {
            cc::StreamConfig cfg;
            cfg.block_size = o.block;
            cfg.k = o.k;
            cfg.epsilon = o.eps;
            cfg.power = o.power;
            cfg.dimension = rec.point.dim();
            cfg.color_count = o.colors;
            cfg.rng_seed = o.seed;
            state = cc::StreamState(cfg);
            dim = cfg.dimension;
        }
        state->push(rec.point, rec.color, rec.weight);
        // flush-flag file: when it appears, write a checkpoint and remove it
        if (!o.flush_flag.empty() && ++since_flush_check >= 64) {
            since_flush_check = 0;
            if (::access(o.flush_flag.c_str(), F_OK) == 0 && !o.checkpoint_path.empty()) {
                std::ofstream ck(o.checkpoint_path);
                cc::write_checkpoint(ck, *state);
                ::unlink(o.flush_flag.c_str());
            }
        }
    }
    if (!state) throw cc::FormatError("empty stream");

    if (!o.checkpoint_path.empty()) {
        std::ofstream ck(o.checkpoint_path);
        cc::write_checkpoint(ck, *state);
    }
    std::int64_t seen = state->points_seen();
    std::int64_t blocks = static_cast<std::int64_t>(state->blocks_done());
    std::int64_t levels = static_cast<std::int64_t>(state->buckets().size());
    cc::Coreset cs = state->finalize();

    std::ofstream file;
    std::ostream& out = open_output(o.common, file);
    cc::write_coreset(out, cs);
    if (!o.common.output.empty() && o.common.report == "json") {
        cc::JsonWriter w(std::cout);
        w.begin_object();
        w.key("schema").value(1);
        w.key("command").value("stream");
        w.key("points_seen").value(seen);
        w.key("entries").value(static_cast<std::int64_t>(cs.points.size()));
        w.key("blocks").value(blocks);
        w.key("levels").value(levels);
        w.end_object();
        std::cout << '\n';
    }
    return kExitOk;
}

// -------- eval --------

struct EvalOpts {
    CommonOpts common;
    int k = 0;
    int power = 2;
    std::string centers_path;
    std::string constraints_path;
    std::string dump_path;
};

int run_eval(const EvalOpts& o) {
    cc::PointSet points;
    if (o.common.input != "-" && looks_like_coreset(o.common.input)) {
        std::ifstream in(o.common.input);
        points = cc::read_coreset(in).points;
    } else {
        points = load_points(o.common);
    }
    cc::CenterSet centers = load_centers(o.centers_path);
    auto parsed = cc::parse_constraint_spec(load_text(o.constraints_path), o.k, points);
    const cc::PointSet& inst = parsed.recolored ? *parsed.recolored : points;
    cc::MetricConfig cfg(o.power, inst.dimension());

    auto assignment = cc::optimal_assignment(inst, centers, parsed.family, cfg);
    std::ofstream file;
    std::ostream& out = open_output(o.common, file);
    if (!assignment) {
        if (o.common.report == "json") {
            cc::JsonWriter w(out);
            w.begin_object();
            w.key("schema").value(1);
            w.key("command").value("eval");
            w.key("feasible").value(false);
            w.end_object();
            out << '\n';
        } else {
            out << "infeasible\n";
        }
        return kExitInfeasible;
    }
    if (!o.dump_path.empty()) {
        bool explicit_oc = static_cast<int>(centers.size()) == parsed.family.cluster_count() &&
                           parsed.family.outlier_count() > 0;
        dump_assignment(o.dump_path, *assignment, parsed.family, explicit_oc);
    }
    if (o.common.report == "json") {
        cc::JsonWriter w(out);
        w.begin_object();
        w.key("schema").value(1);
        w.key("command").value("eval");
        w.key("feasible").value(true);
        w.key("cost").value(assignment->total_cost);
        w.key("raw_cost").value(assignment->raw_cost);
        w.key("realized");
        emit_matrix(w, assignment->realized);
        w.end_object();
        out << '\n';
    } else {
        out << "cost " << cc::format_double(assignment->total_cost, 12) << '\n';
    }
    return kExitOk;
}

// -------- solve --------

struct SolveCmdOpts {
    CommonOpts common;
    int k = 0;
    double eps = 0.0;
    int power = 2;
    std::uint64_t seed = 1;
    std::string constraints_path;
    std::string mode = "auto";
    int jobs = 0;
    std::int64_t cap = 1'000'000;
};

int run_solve(const SolveCmdOpts& o) {
    bool input_is_coreset = o.common.input != "-" && looks_like_coreset(o.common.input);
    std::string mode = o.mode;
    if (mode == "auto") mode = input_is_coreset ? "ptas" : "transfer";

    cc::SolveOptions sopts;
    sopts.candidate_set_cap = o.cap;
    sopts.jobs = o.jobs > 0 ? o.jobs
                            : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));

    std::ofstream file;
    std::ostream& out = open_output(o.common, file);

    auto report = [&](const cc::SolveResult& r, const std::optional<double>& input_cost,
                      double certified) {
        if (o.common.report == "json") {
            cc::JsonWriter w(out);
            w.begin_object();
            w.key("schema").value(1);
            w.key("command").value("solve");
            w.key("mode").value(mode);
            w.key("k").value(o.k);
            w.key("eps").value(o.eps);
            w.key("m").value(o.power);
            w.key("centers");
            emit_centers(w, r.centers);
            w.key("realized");
            emit_matrix(w, r.assignment.realized);
            w.key("coreset_cost").value(r.coreset_cost);
            if (input_cost)
                w.key("input_cost").value(*input_cost);
            w.key("certified_factor").value(certified > 0.0 ? certified : 0.0);
            w.key("candidates_examined").value(r.candidates_examined);
            w.key("sample_size").value(r.sample_size_used);
            w.end_object();
            out << '\n';
        } else {
            out << "cost " << cc::format_double(input_cost ? *input_cost : r.coreset_cost, 12)
                << " candidates " << r.candidates_examined << '\n';
        }
    };

    if (mode == "ptas") {
        std::ifstream in(o.common.input);
        cc::Coreset cs = cc::read_coreset(in);
        auto parsed = cc::parse_constraint_spec(load_text(o.constraints_path), o.k, cs.points);
        if (parsed.recolored) cs.points = *parsed.recolored;
        cc::MetricConfig cfg(o.power, cs.points.dimension());
        auto r = cc::ptas_solve(cs, o.k, o.eps, parsed.family, cfg, sopts);
        if (!r) {
            std::cerr << "constraint family is infeasible for this instance\n";
            return kExitInfeasible;
        }
        report(*r, std::nullopt, r->certified_factor);
        return kExitOk;
    }

    cc::PointSet points = load_points(o.common);
    auto parsed = cc::parse_constraint_spec(load_text(o.constraints_path), o.k, points);
    const cc::PointSet& inst = parsed.recolored ? *parsed.recolored : points;
    cc::MetricConfig cfg(o.power, inst.dimension());
    auto r = cc::solve_with_transfer(inst, o.k, o.eps, parsed.family, cfg, o.seed, sopts);
    if (!r) {
        std::cerr << "constraint family is infeasible for this instance\n";
        return kExitInfeasible;
    }
    report(r->summary, r->input_cost, r->certified_factor);
    return kExitOk;
}

// -------- oracle --------

struct OracleOpts {
    CommonOpts common;
    int k = 0;
    int power = 2;
    std::string constraints_path;
};

int run_oracle(const OracleOpts& o) {
    cc::PointSet points = load_points(o.common);
    auto parsed = cc::parse_constraint_spec(load_text(o.constraints_path), o.k, points);
    const cc::PointSet& inst = parsed.recolored ? *parsed.recolored : points;
    cc::MetricConfig cfg(o.power, inst.dimension());
    auto opt = cc::brute_force_constrained_opt(inst, parsed.family, cfg);

    std::ofstream file;
    std::ostream& out = open_output(o.common, file);
    cc::JsonWriter w(out);
    w.begin_object();
    w.key("schema").value(1);
    w.key("command").value("oracle");
    w.key("k").value(o.k);
    w.key("m").value(o.power);
    w.key("feasible").value(opt.feasible);
    if (opt.feasible) {
        w.key("opt").value(opt.value);
        w.key("raw_opt").value(opt.raw_value);
        w.key("witness_labels");
        w.begin_array();
        for (int l : opt.expanded_labels) w.value(l);
        w.end_array();
        w.key("centers");
        emit_centers(w, opt.centers);
        w.key("realized");
        emit_matrix(w, opt.realized);
    }
    w.key("instance");
    w.begin_array();
    for (const auto& e : inst.entries()) {
        w.begin_array();
        for (double c : e.point.coords) w.value(c);
        w.value(e.color);
        w.value(e.weight);
        w.end_array();
    }
    w.end_array();
    w.end_object();
    out << '\n';
    return opt.feasible ? kExitOk : kExitInfeasible;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"streaming coresets for constrained k-means / Euclidean k-median"};
    app.require_subcommand(1);

    BuildOpts build;
    auto* cmd_build = app.add_subcommand("build-coreset", "summarize a point set offline");
    add_input_options(cmd_build, build.common);
    cmd_build->add_option("-k", build.k, "number of centers")->required();
    cmd_build->add_option("-e,--eps", build.eps, "coreset error in (0,1]")->required();
    cmd_build->add_option("-m,--power", build.power, "cost power: 1 or 2");
    cmd_build->add_option("--seed", build.seed, "rng seed");
    cmd_build->add_option("--certificate", build.certificate_path, "write the movement certificate");
    cmd_build->add_flag("--verify", build.verify, "re-check the certificate before writing");

    StreamOpts stream;
    auto* cmd_stream = app.add_subcommand("stream", "merge-and-reduce over a point stream");
    add_input_options(cmd_stream, stream.common);
    cmd_stream->add_option("-k", stream.k, "number of centers")->required();
    cmd_stream->add_option("-e,--eps", stream.eps, "total error in (0,1]")->required();
    cmd_stream->add_option("-B,--block", stream.block, "block size")->required();
    cmd_stream->add_option("-m,--power", stream.power, "cost power: 1 or 2");
    cmd_stream->add_option("--colors", stream.colors, "number of colors in the stream");
    cmd_stream->add_option("--seed", stream.seed, "rng seed");
    cmd_stream->add_option("--checkpoint", stream.checkpoint_path, "checkpoint file");
    cmd_stream->add_option("--flush-flag", stream.flush_flag,
                           "write a checkpoint whenever this file exists, then remove it");
    cmd_stream->add_option("--resume", stream.resume_path, "resume from a checkpoint");

    EvalOpts eval;
    auto* cmd_eval = app.add_subcommand("eval", "constrained cost of given centers");
    add_input_options(cmd_eval, eval.common);
    cmd_eval->add_option("-k", eval.k, "number of centers")->required();
    cmd_eval->add_option("-m,--power", eval.power, "cost power: 1 or 2");
    cmd_eval->add_option("--centers", eval.centers_path, "centers file")->required();
    cmd_eval->add_option("--constraints", eval.constraints_path, "constraint spec file")->required();
    cmd_eval->add_option("--dump-assignment", eval.dump_path, "write flow triples as JSON lines");

    SolveCmdOpts solve;
    auto* cmd_solve = app.add_subcommand("solve", "constrained solve on a coreset or points");
    add_input_options(cmd_solve, solve.common);
    cmd_solve->add_option("-k", solve.k, "number of centers")->required();
    cmd_solve->add_option("-e,--eps", solve.eps, "target approximation parameter")->required();
    cmd_solve->add_option("-m,--power", solve.power, "cost power: 1 or 2");
    cmd_solve->add_option("--seed", solve.seed, "rng seed");
    cmd_solve->add_option("--constraints", solve.constraints_path, "constraint spec file")
        ->required();
    cmd_solve->add_option("--mode", solve.mode, "ptas, transfer or auto")
        ->check(CLI::IsMember({"ptas", "transfer", "auto"}));
    cmd_solve->add_option("--jobs", solve.jobs, "worker threads (default: hardware)");
    cmd_solve->add_option("--cap", solve.cap, "candidate-set cap");

    OracleOpts oracle;
    auto* cmd_oracle = app.add_subcommand("oracle", "brute-force fixture for tiny instances");
    add_input_options(cmd_oracle, oracle.common);
    cmd_oracle->add_option("-k", oracle.k, "number of centers")->required();
    cmd_oracle->add_option("-m,--power", oracle.power, "cost power: 1 or 2");
    cmd_oracle->add_option("--constraints", oracle.constraints_path, "constraint spec file")
        ->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (cmd_build->parsed()) return run_build(build);
        if (cmd_stream->parsed()) return run_stream(stream);
        if (cmd_eval->parsed()) return run_eval(eval);
        if (cmd_solve->parsed()) return run_solve(solve);
        if (cmd_oracle->parsed()) return run_oracle(oracle);
    } catch (const cc::CapExceeded& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitCap;
    } catch (const cc::FormatError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const cc::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
