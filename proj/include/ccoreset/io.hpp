#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ccoreset/constraints.hpp"
#include "ccoreset/coreset.hpp"
#include "ccoreset/stream.hpp"

namespace ccoreset {

/// Line-oriented point format: one point per line, d comma-separated coordinates,
/// then an optional integer color and an optional integer weight, in that order.
/// With dimension == 0 and no flags every field is a coordinate. When dimension is
/// given, the per-line surplus (0, 1 or 2 fields) decides color/weight presence.
/// Blank lines and lines starting with '#' are skipped.
struct CsvOptions {
    int dimension = 0;
    bool with_color = false;
    bool with_weight = false;
};

PointSet read_points_csv(std::istream& in, const CsvOptions& opts = {});
void write_points_csv(std::ostream& out, const PointSet& points);

/// Parse a single point record; known_dim pins the dimension once discovered
/// (pass 0 on the first record when opts.dimension is unset).
WeightedColoredPoint parse_point_record(const std::string& line, long line_no,
                                        const CsvOptions& opts, int known_dim);

/// Versioned coreset format: header line
///   coreset v1 d=<d> k=<k> eps=<eps> m=<m> colors=<l> n=<total weight>
/// then one `<coords...>,<color>,<weight>` line per entry. Floats are written with
/// 17 significant digits so round trips are exact.
void write_coreset(std::ostream& out, const Coreset& coreset);
Coreset read_coreset(std::istream& in);

/// The movement certificate is serialized separately (and optionally).
void write_certificate(std::ostream& out, const MovementCertificate& cert);
MovementCertificate read_certificate(std::istream& in);

/// Outcome of parsing a constraint spec. Link constraints recolor the instance,
/// in which case the recolored set is returned alongside the family.
struct ParsedConstraint {
    ConstraintFamily family;
    std::optional<PointSet> recolored;
};

/// Key-value constraint grammar, e.g.
///   kind=lower_bounds; bounds=4,4; mode=strict
///   kind=outliers; z=3
///   kind=l_diversity; l=2
///   kind=chromatic
///   kind=per_color_caps; caps=[[1,2],[3,4]]
///   kind=must_link; links=(0,1),(2,3)
///   kind=explicit; matrices=[[[4,0],[0,4]]]
ParsedConstraint parse_constraint_spec(const std::string& text, int k, const PointSet& instance);

/// Minimal deterministic JSON emitter. Keys appear in call order and doubles are
/// printed with 12 significant digits, so identical inputs give identical bytes.
class JsonWriter {
public:
    explicit JsonWriter(std::ostream& out) : out_(out) {}

    JsonWriter& begin_object();
    JsonWriter& end_object();
    JsonWriter& begin_array();
    JsonWriter& end_array();
    JsonWriter& key(const std::string& k);
    JsonWriter& value(double v);
    JsonWriter& value(std::int64_t v);
    JsonWriter& value(int v) { return value(static_cast<std::int64_t>(v)); }
    JsonWriter& value(bool v);
    JsonWriter& value(const std::string& v);
    JsonWriter& value(const char* v) { return value(std::string(v)); }

private:
    void separator();
    std::ostream& out_;
    std::vector<std::pair<char, int>> stack_;  // container kind, emitted items
    bool pending_key_ = false;
};

std::string format_double(double v, int digits);

/// Stream checkpoints: a one-line state header, the per-bucket coresets, then the
/// raw partial-block buffer.
void write_checkpoint(std::ostream& out, const StreamState& state);
StreamState read_checkpoint(std::istream& in);

}  // namespace ccoreset
