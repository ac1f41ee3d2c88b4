#include "ccoreset/io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace ccoreset {

std::string format_double(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

double parse_double(const std::string& s, long line) {
    try {
        std::size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos != s.size()) throw FormatError("trailing characters in number '" + s + "'", line);
        return v;
    } catch (const FormatError&) {
        throw;
    } catch (...) {
        throw FormatError("bad number '" + s + "'", line);
    }
}

std::int64_t parse_int(const std::string& s, long line) {
    try {
        std::size_t pos = 0;
        std::int64_t v = std::stoll(s, &pos);
        if (pos != s.size()) throw FormatError("trailing characters in integer '" + s + "'", line);
        return v;
    } catch (const FormatError&) {
        throw;
    } catch (...) {
        throw FormatError("bad integer '" + s + "'", line);
    }
}

struct ParsedLine {
    Point point;
    int color = 0;
    std::int64_t weight = 1;
};

ParsedLine parse_point_line(const std::string& line, long line_no, const CsvOptions& opts,
                            int known_dim) {
    auto fields = split(line, ',');
    for (auto& f : fields) f = trim(f);
    int extras = 0;
    int dim = 0;
    if (opts.dimension > 0) {
        dim = opts.dimension;
        extras = static_cast<int>(fields.size()) - dim;
        if (extras < 0 || extras > 2) throw FormatError("field count does not fit dimension", line_no);
    } else {
        extras = (opts.with_color ? 1 : 0) + (opts.with_weight ? 1 : 0);
        dim = static_cast<int>(fields.size()) - extras;
        if (dim < 1) throw FormatError("no coordinate fields", line_no);
    }
    if (known_dim > 0 && dim != known_dim) throw FormatError("inconsistent dimension", line_no);

    ParsedLine out;
    out.point.coords.resize(dim);
    for (int i = 0; i < dim; ++i) out.point.coords[i] = parse_double(fields[i], line_no);
    bool has_color = opts.dimension > 0 ? extras >= 1 : opts.with_color;
    bool has_weight = opts.dimension > 0 ? extras == 2 : opts.with_weight;
    int idx = dim;
    if (has_color) out.color = static_cast<int>(parse_int(fields[idx++], line_no));
    if (has_weight) out.weight = parse_int(fields[idx++], line_no);
    if (out.color < 0) throw FormatError("color ids must be nonnegative", line_no);
    if (out.weight < 1) throw FormatError("weights must be positive", line_no);
    return out;
}

}  // namespace

WeightedColoredPoint parse_point_record(const std::string& line, long line_no,
                                        const CsvOptions& opts, int known_dim) {
    ParsedLine p = parse_point_line(trim(line), line_no, opts, known_dim);
    return WeightedColoredPoint{std::move(p.point), p.weight, p.color};
}

PointSet read_points_csv(std::istream& in, const CsvOptions& opts) {
    std::vector<ParsedLine> rows;
    std::string line;
    long line_no = 0;
    int dim = 0;
    int max_color = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        ParsedLine p = parse_point_line(t, line_no, opts, dim);
        dim = p.point.dim();
        max_color = std::max(max_color, p.color);
        rows.push_back(std::move(p));
    }
    if (rows.empty()) throw FormatError("no points in input");
    PointSet out(dim, max_color + 1);
    for (auto& r : rows) out.add(std::move(r.point), r.color, r.weight);
    return out;
}

void write_points_csv(std::ostream& out, const PointSet& points) {
    for (const auto& e : points.entries()) {
        for (int i = 0; i < points.dimension(); ++i) {
            if (i) out << ',';
            out << format_double(e.point[i], 17);
        }
        out << ',' << e.color << ',' << e.weight << '\n';
    }
}

void write_coreset(std::ostream& out, const Coreset& coreset) {
    out << "coreset v1 d=" << coreset.points.dimension() << " k=" << coreset.k
        << " eps=" << format_double(coreset.epsilon, 17) << " m=" << coreset.power
        << " colors=" << coreset.color_count() << " n=" << coreset.total_weight() << '\n';
    write_points_csv(out, coreset.points);
}

namespace {

std::int64_t header_field(const std::vector<std::string>& tokens, const std::string& name,
                          bool* found = nullptr, double* as_double = nullptr) {
    for (const auto& t : tokens) {
        auto eq = t.find('=');
        if (eq == std::string::npos) continue;
        if (t.substr(0, eq) != name) continue;
        if (found) *found = true;
        if (as_double) {
            *as_double = parse_double(t.substr(eq + 1), 1);
            return 0;
        }
        return parse_int(t.substr(eq + 1), 1);
    }
    if (found) {
        *found = false;
        return 0;
    }
    throw FormatError("missing header field " + name, 1);
}

}  // namespace

Coreset read_coreset(std::istream& in) {
    std::string header;
    if (!std::getline(in, header)) throw FormatError("empty coreset file");
    auto tokens = split(trim(header), ' ');
    if (tokens.size() < 2 || tokens[0] != "coreset" || tokens[1] != "v1")
        throw FormatError("not a v1 coreset file", 1);
    Coreset cs;
    const int d = static_cast<int>(header_field(tokens, "d"));
    cs.k = static_cast<int>(header_field(tokens, "k"));
    double eps = 0.0;
    header_field(tokens, "eps", nullptr, &eps);
    cs.epsilon = eps;
    cs.power = static_cast<int>(header_field(tokens, "m"));
    const int colors = static_cast<int>(header_field(tokens, "colors"));
    const std::int64_t n = header_field(tokens, "n");

    CsvOptions opts;
    opts.dimension = d;
    cs.points = PointSet(d, colors);
    std::string line;
    long line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        auto fields = split(t, ',');
        if (static_cast<int>(fields.size()) != d + 2)
            throw FormatError("coreset entry needs d coords, color and weight", line_no);
        ParsedLine p = parse_point_line(t, line_no, opts, d);
        cs.points.add(std::move(p.point), p.color, p.weight);
    }
    if (cs.points.total_weight() != n)
        throw FormatError("coreset entries do not sum to the header weight");
    return cs;
}

void write_certificate(std::ostream& out, const MovementCertificate& cert) {
    out << "certificate v1 entries=" << cert.mapping.size()
        << " movement=" << format_double(cert.movement_cost, 17)
        << " olb=" << format_double(cert.opt_lower_bound, 17)
        << " budget=" << format_double(cert.budget, 17) << '\n';
    for (std::size_t i = 0; i < cert.mapping.size(); ++i) {
        if (i) out << ' ';
        out << cert.mapping[i];
    }
    out << '\n';
}

MovementCertificate read_certificate(std::istream& in) {
    std::string header;
    if (!std::getline(in, header)) throw FormatError("empty certificate file");
    auto tokens = split(trim(header), ' ');
    if (tokens.size() < 2 || tokens[0] != "certificate" || tokens[1] != "v1")
        throw FormatError("not a v1 certificate file", 1);
    MovementCertificate cert;
    const std::int64_t entries = header_field(tokens, "entries");
    header_field(tokens, "movement", nullptr, &cert.movement_cost);
    header_field(tokens, "olb", nullptr, &cert.opt_lower_bound);
    header_field(tokens, "budget", nullptr, &cert.budget);
    cert.mapping.reserve(entries);
    std::int64_t v;
    while (in >> v) cert.mapping.push_back(static_cast<int>(v));
    if (static_cast<std::int64_t>(cert.mapping.size()) != entries)
        throw FormatError("certificate mapping length mismatch");
    return cert;
}

namespace {

// minimal nested-int-list parser for caps/matrices values, e.g. [[1,2],[3,4]]
struct ListParser {
    const std::string& s;
    std::size_t pos = 0;

    void skip_ws() {
        while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
    }
    char peek() {
        skip_ws();
        return pos < s.size() ? s[pos] : '\0';
    }
    void expect(char c) {
        if (peek() != c) throw FormatError(std::string("expected '") + c + "' in list");
        ++pos;
    }
    std::int64_t parse_number() {
        skip_ws();
        std::size_t start = pos;
        if (pos < s.size() && (s[pos] == '-' || s[pos] == '+')) ++pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
        if (start == pos) throw FormatError("expected integer in list");
        return parse_int(s.substr(start, pos - start), 0);
    }
    std::vector<std::int64_t> parse_row() {
        expect('[');
        std::vector<std::int64_t> row;
        if (peek() != ']') {
            row.push_back(parse_number());
            while (peek() == ',') {
                ++pos;
                row.push_back(parse_number());
            }
        }
        expect(']');
        return row;
    }
    ColorMatrix parse_matrix() {
        expect('[');
        std::vector<std::vector<std::int64_t>> rows;
        if (peek() != ']') {
            rows.push_back(parse_row());
            while (peek() == ',') {
                ++pos;
                rows.push_back(parse_row());
            }
        }
        expect(']');
        if (rows.empty()) throw FormatError("matrix needs at least one row");
        ColorMatrix K(static_cast<int>(rows.size()), static_cast<int>(rows[0].size()));
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != rows[0].size()) throw FormatError("ragged matrix rows");
            for (std::size_t j = 0; j < rows[i].size(); ++j)
                K.at(static_cast<int>(i), static_cast<int>(j)) = rows[i][j];
        }
        return K;
    }
    std::vector<ColorMatrix> parse_matrix_list() {
        expect('[');
        std::vector<ColorMatrix> out;
        if (peek() != ']') {
            out.push_back(parse_matrix());
            while (peek() == ',') {
                ++pos;
                out.push_back(parse_matrix());
            }
        }
        expect(']');
        return out;
    }
};

std::vector<std::pair<int, int>> parse_links(const std::string& v) {
    // (0,1),(2,3)
    std::vector<std::pair<int, int>> links;
    std::size_t pos = 0;
    while (pos < v.size()) {
        while (pos < v.size() && (v[pos] == ' ' || v[pos] == ',')) ++pos;
        if (pos >= v.size()) break;
        if (v[pos] != '(') throw FormatError("links must look like (a,b),(c,d)");
        std::size_t close = v.find(')', pos);
        if (close == std::string::npos) throw FormatError("unterminated link pair");
        auto inner = split(v.substr(pos + 1, close - pos - 1), ',');
        if (inner.size() != 2) throw FormatError("link pairs have two ids");
        links.emplace_back(static_cast<int>(parse_int(trim(inner[0]), 0)),
                           static_cast<int>(parse_int(trim(inner[1]), 0)));
        pos = close + 1;
    }
    return links;
}

std::vector<std::int64_t> parse_int_list(const std::string& v) {
    std::vector<std::int64_t> out;
    for (const auto& f : split(v, ',')) out.push_back(parse_int(trim(f), 0));
    return out;
}

}  // namespace

ParsedConstraint parse_constraint_spec(const std::string& text, int k, const PointSet& instance) {
    std::map<std::string, std::string> kv;
    for (const auto& part : split(text, ';')) {
        std::string t = trim(part);
        if (t.empty() || t[0] == '#') continue;
        auto eq = t.find('=');
        if (eq == std::string::npos) throw FormatError("constraint entries look like key=value");
        kv[trim(t.substr(0, eq))] = trim(t.substr(eq + 1));
    }
    auto need = [&](const std::string& key) -> const std::string& {
        auto it = kv.find(key);
        if (it == kv.end()) throw FormatError("constraint spec is missing '" + key + "'");
        return it->second;
    };
    const std::string kind = need("kind");
    const auto masses = instance.color_weights();

    if (kind == "unconstrained")
        return {ConstraintFamily::unconstrained(k, masses), std::nullopt};
    if (kind == "lower_bounds") {
        LowerBoundMode mode = LowerBoundMode::Strict;
        if (auto it = kv.find("mode"); it != kv.end()) {
            if (it->second == "strict")
                mode = LowerBoundMode::Strict;
            else if (it->second == "open_centers")
                mode = LowerBoundMode::OpenCenters;
            else
                throw FormatError("mode must be strict or open_centers");
        }
        auto bounds = parse_int_list(need("bounds"));
        if (static_cast<int>(bounds.size()) != k) throw FormatError("need one bound per cluster");
        return {ConstraintFamily::lower_bounds(std::move(bounds), mode, masses), std::nullopt};
    }
    if (kind == "upper_bounds") {
        auto bounds = parse_int_list(need("bounds"));
        if (static_cast<int>(bounds.size()) != k) throw FormatError("need one bound per cluster");
        return {ConstraintFamily::upper_bounds(std::move(bounds), masses), std::nullopt};
    }
    if (kind == "outliers") {
        int z = static_cast<int>(parse_int(need("z"), 0));
        return {ConstraintFamily::outliers(k, z, masses), std::nullopt};
    }
    if (kind == "chromatic") return {ConstraintFamily::chromatic(k, masses), std::nullopt};
    if (kind == "l_diversity") {
        int l = static_cast<int>(parse_int(need("l"), 0));
        return {ConstraintFamily::l_diversity(k, l, masses), std::nullopt};
    }
    if (kind == "per_color_caps") {
        ListParser p{need("caps")};
        return {ConstraintFamily::per_color_caps(p.parse_matrix(), masses), std::nullopt};
    }
    if (kind == "explicit") {
        ListParser p{need("matrices")};
        return {ConstraintFamily::explicit_family(p.parse_matrix_list(), masses), std::nullopt};
    }
    if (kind == "must_link") {
        auto enc = encode_must_link(parse_links(need("links")), instance, k);
        return {std::move(enc.family), std::move(enc.recolored)};
    }
    if (kind == "cannot_link") {
        auto enc = encode_cannot_link(parse_links(need("links")), instance, k);
        return {std::move(enc.family), std::move(enc.recolored)};
    }
    throw FormatError("unknown constraint kind '" + kind + "'");
}

JsonWriter& JsonWriter::begin_object() {
    separator();
    out_ << '{';
    stack_.push_back({'o', 0});
    return *this;
}

JsonWriter& JsonWriter::end_object() {
    out_ << '}';
    stack_.pop_back();
    return *this;
}

JsonWriter& JsonWriter::begin_array() {
    separator();
    out_ << '[';
    stack_.push_back({'a', 0});
    return *this;
}

JsonWriter& JsonWriter::end_array() {
    out_ << ']';
    stack_.pop_back();
    return *this;
}

void JsonWriter::separator() {
    if (pending_key_) {
        pending_key_ = false;
        return;
    }
    if (!stack_.empty() && stack_.back().second++ > 0) out_ << ',';
}

JsonWriter& JsonWriter::key(const std::string& k) {
    if (stack_.back().second++ > 0) out_ << ',';
    out_ << '"' << k << "\":";
    pending_key_ = true;
    return *this;
}

JsonWriter& JsonWriter::value(double v) {
    separator();
    if (std::isfinite(v))
        out_ << format_double(v, 12);
    else
        out_ << "null";
    return *this;
}

JsonWriter& JsonWriter::value(std::int64_t v) {
    separator();
    out_ << v;
    return *this;
}

JsonWriter& JsonWriter::value(bool v) {
    separator();
    out_ << (v ? "true" : "false");
    return *this;
}

JsonWriter& JsonWriter::value(const std::string& v) {
    separator();
    out_ << '"';
    for (char c : v) {
        switch (c) {
            case '"': out_ << "\\\""; break;
            case '\\': out_ << "\\\\"; break;
            case '\n': out_ << "\\n"; break;
            case '\t': out_ << "\\t"; break;
            default: out_ << c;
        }
    }
    out_ << '"';
    return *this;
}

void write_checkpoint(std::ostream& out, const StreamState& state) {
    const auto& cfg = state.config();
    int buckets = 0;
    for (const auto& b : state.buckets())
        if (b) ++buckets;
    out << "state v1 d=" << cfg.dimension << " k=" << cfg.k
        << " eps=" << format_double(cfg.epsilon, 17) << " m=" << cfg.power
        << " colors=" << cfg.color_count << " block=" << cfg.block_size << " seed=" << cfg.rng_seed
        << " points_seen=" << state.points_seen() << " blocks_done=" << state.blocks_done()
        << " buckets=" << buckets << " buffer=" << state.buffer().size() << '\n';
    for (std::size_t level = 0; level < state.buckets().size(); ++level) {
        if (!state.buckets()[level]) continue;
        out << "bucket " << level << '\n';
        write_coreset(out, *state.buckets()[level]);
    }
    if (!state.buffer().empty()) {
        out << "buffer\n";
        for (const auto& e : state.buffer()) {
            for (int i = 0; i < cfg.dimension; ++i) {
                if (i) out << ',';
                out << format_double(e.point[i], 17);
            }
            out << ',' << e.color << ',' << e.weight << '\n';
        }
    }
    return;
}

StreamState read_checkpoint(std::istream& in) {
    std::string header;
    if (!std::getline(in, header)) throw FormatError("empty checkpoint");
    auto tokens = split(trim(header), ' ');
    if (tokens.size() < 2 || tokens[0] != "state" || tokens[1] != "v1")
        throw FormatError("not a v1 checkpoint", 1);
    StreamConfig cfg;
    cfg.dimension = static_cast<int>(header_field(tokens, "d"));
    cfg.k = static_cast<int>(header_field(tokens, "k"));
    double eps = 0.0;
    header_field(tokens, "eps", nullptr, &eps);
    cfg.epsilon = eps;
    cfg.power = static_cast<int>(header_field(tokens, "m"));
    cfg.color_count = static_cast<int>(header_field(tokens, "colors"));
    cfg.block_size = header_field(tokens, "block");
    cfg.rng_seed = static_cast<std::uint64_t>(header_field(tokens, "seed"));
    const std::int64_t points_seen = header_field(tokens, "points_seen");
    const std::uint64_t blocks_done = static_cast<std::uint64_t>(header_field(tokens, "blocks_done"));
    const std::int64_t bucket_count = header_field(tokens, "buckets");
    const std::int64_t buffer_count = header_field(tokens, "buffer");

    std::vector<std::optional<Coreset>> buckets;
    std::vector<WeightedColoredPoint> buffer;
    std::string line;
    for (std::int64_t b = 0; b < bucket_count; ++b) {
        if (!std::getline(in, line)) throw FormatError("truncated checkpoint: missing bucket");
        auto parts = split(trim(line), ' ');
        if (parts.size() != 2 || parts[0] != "bucket") throw FormatError("expected bucket line");
        std::size_t level = static_cast<std::size_t>(parse_int(parts[1], 0));
        // the bucket coreset spans its header plus exactly its entry lines
        if (!std::getline(in, line)) throw FormatError("truncated checkpoint: missing coreset");
        std::ostringstream block;
        block << line << '\n';
        auto htokens = split(trim(line), ' ');
        if (htokens.size() < 2 || htokens[0] != "coreset")
            throw FormatError("expected coreset header in checkpoint");
        // entry count is not in the header; read until total weight is reached
        const std::int64_t want = header_field(htokens, "n");
        std::int64_t seen = 0;
        const int d = static_cast<int>(header_field(htokens, "d"));
        while (seen < want && std::getline(in, line)) {
            auto fields = split(trim(line), ',');
            if (static_cast<int>(fields.size()) != d + 2)
                throw FormatError("bad coreset entry in checkpoint");
            seen += parse_int(trim(fields.back()), 0);
            block << line << '\n';
        }
        std::istringstream bin(block.str());
        Coreset cs = read_coreset(bin);
        while (buckets.size() <= level) buckets.emplace_back();
        buckets[level] = std::move(cs);
    }
    if (buffer_count > 0) {
        if (!std::getline(in, line) || trim(line) != "buffer")
            throw FormatError("expected buffer section");
        CsvOptions opts;
        opts.dimension = cfg.dimension;
        for (std::int64_t i = 0; i < buffer_count; ++i) {
            if (!std::getline(in, line)) throw FormatError("truncated buffer section");
            ParsedLine p = parse_point_line(trim(line), 0, opts, cfg.dimension);
            buffer.push_back(WeightedColoredPoint{std::move(p.point), p.weight, p.color});
        }
    }
    return StreamState::restore(std::move(cfg), std::move(buckets), std::move(buffer), points_seen,
                                blocks_done);
}

}  // namespace ccoreset
