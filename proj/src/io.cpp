// Copyright (C) 2026 The mcfuse Authors
// SPDX-License-Identifier: Apache-2.0

#include "mcfuse/io.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "mcfuse/appearance.hpp"
#include "mcfuse/errors.hpp"

namespace mcfuse::io {

static_assert(std::endian::native == std::endian::little, "binary feature I/O assumes a little-endian host");

std::string format_number(double v, int decimals) {
    if (decimals >= 0) {
        const double scale = std::pow(10.0, decimals);
        v = std::round(v * scale) / scale;
        if (v == 0.0) v = 0.0;  // drop negative zero
    }
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string format_number(float v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(',', start);
        out.push_back(trim(std::string_view(line).substr(start, pos == std::string::npos ? pos : pos - start)));
        if (pos == std::string::npos) break;
        start = pos + 1;
    }
    return out;
}

[[noreturn]] void fail(const std::string& source, int line, const std::string& msg) {
    throw ConfigError(source + ":" + std::to_string(line) + ": " + msg);
}

template <typename T>
T parse_num(const std::string& text, const std::string& source, int line, const std::string& column) {
    T value{};
    const char* first = text.data();
    const char* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || text.empty()) {
        fail(source, line, "column '" + column + "': cannot parse '" + text + "'");
    }
    return value;
}

void write_comments(std::ostream& out, const std::vector<std::string>& comments) {
    for (const auto& c : comments) out << c << '\n';
}

// Reads lines, skipping comments and blanks; checks the header.
class CsvReader {
public:
    CsvReader(std::istream& in, std::string source) : in_(in), source_(std::move(source)) {}

    std::vector<std::string> header(const std::vector<std::string>& expected_prefix, bool exact) {
        std::vector<std::string> cols;
        if (!next(cols)) fail(source_, line_, "missing header row");
        for (std::size_t i = 0; i < expected_prefix.size(); ++i) {
            if (i >= cols.size()) {
                fail(source_, line_, "missing column " + std::to_string(i + 1) + " '" + expected_prefix[i] + "'");
            }
            if (cols[i] != expected_prefix[i]) {
                fail(source_, line_, "column " + std::to_string(i + 1) + ": expected '" + expected_prefix[i] +
                                         "' but found '" + cols[i] + "'");
            }
        }
        if (exact && cols.size() != expected_prefix.size()) {
            fail(source_, line_, "unexpected extra column '" + cols[expected_prefix.size()] + "'");
        }
        return cols;
    }

    bool next(std::vector<std::string>& cols) {
        std::string line;
        while (std::getline(in_, line)) {
            ++line_;
            const std::string t = trim(line);
            if (t.empty() || t[0] == '#') {
                comments_.push_back(t);
                continue;
            }
            cols = split(t);
            return true;
        }
        return false;
    }

    int line() const { return line_; }
    const std::string& source() const { return source_; }
    const std::vector<std::string>& comments() const { return comments_; }

private:
    std::istream& in_;
    std::string source_;
    int line_ = 0;
    std::vector<std::string> comments_;
};

std::vector<std::string> header_columns(const char* header) { return split(header); }

template <typename T>
void put(std::ostream& out, T v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <typename T>
T get(std::istream& in, const std::string& source) {
    T v{};
    in.read(reinterpret_cast<char*>(&v), sizeof v);
    if (!in) throw IoError(source + ": truncated binary feature file");
    return v;
}

}  // namespace

void write_tracklets_csv(std::ostream& out, std::span<const Tracklet> tracklets,
                         const std::vector<std::string>& comments) {
    write_comments(out, comments);
    out << kTrackletHeader << '\n';
    std::vector<const Detection*> rows;
    for (const auto& t : tracklets) {
        for (const auto& d : t.detections) rows.push_back(&d);
    }
    std::sort(rows.begin(), rows.end(), [](const Detection* a, const Detection* b) {
        return std::pair(a->frame, a->local_track_id) < std::pair(b->frame, b->local_track_id);
    });
    for (const Detection* d : rows) {
        out << d->frame << ',' << d->local_track_id << ',' << format_number(d->bbox.x1) << ','
            << format_number(d->bbox.y1) << ',' << format_number(d->bbox.x2) << ',' << format_number(d->bbox.y2)
            << ',' << format_number(d->confidence) << '\n';
    }
}

std::vector<Tracklet> read_tracklets_csv(std::istream& in, int camera_id, const std::string& source) {
    CsvReader reader(in, source);
    const auto names = header_columns(kTrackletHeader);
    reader.header(names, true);
    std::map<int, Tracklet> by_id;
    std::vector<std::string> cols;
    while (reader.next(cols)) {
        if (cols.size() != names.size()) {
            fail(source, reader.line(), "expected " + std::to_string(names.size()) + " columns, found " +
                                            std::to_string(cols.size()));
        }
        Detection d;
        d.camera_id = camera_id;
        d.frame = parse_num<int>(cols[0], source, reader.line(), names[0]);
        d.local_track_id = parse_num<int>(cols[1], source, reader.line(), names[1]);
        d.bbox.x1 = parse_num<double>(cols[2], source, reader.line(), names[2]);
        d.bbox.y1 = parse_num<double>(cols[3], source, reader.line(), names[3]);
        d.bbox.x2 = parse_num<double>(cols[4], source, reader.line(), names[4]);
        d.bbox.y2 = parse_num<double>(cols[5], source, reader.line(), names[5]);
        d.confidence = parse_num<double>(cols[6], source, reader.line(), names[6]);
        if (d.frame < 0) fail(source, reader.line(), "frame must be >= 0");
        if (!d.bbox.valid()) fail(source, reader.line(), "bbox requires x1 < x2 and y1 < y2");
        if (d.confidence < 0.0 || d.confidence > 1.0) fail(source, reader.line(), "confidence must be in [0, 1]");
        Tracklet& t = by_id[d.local_track_id];
        t.camera_id = camera_id;
        t.local_track_id = d.local_track_id;
        t.detections.push_back(d);
    }
    std::vector<Tracklet> out;
    for (auto& [id, t] : by_id) {
        std::sort(t.detections.begin(), t.detections.end(),
                  [](const Detection& a, const Detection& b) { return a.frame < b.frame; });
        for (std::size_t i = 1; i < t.detections.size(); ++i) {
            if (t.detections[i].frame == t.detections[i - 1].frame) {
                throw ConfigError(source + ": local track " + std::to_string(id) + " has two rows for frame " +
                                  std::to_string(t.detections[i].frame));
            }
        }
        out.push_back(std::move(t));
    }
    return out;
}

namespace {

std::vector<const Detection*> featured_rows(std::span<const Tracklet> tracklets, int& dim) {
    std::vector<const Detection*> rows;
    dim = -1;
    for (const auto& t : tracklets) {
        for (const auto& d : t.detections) {
            if (!d.feature) continue;
            const int n = static_cast<int>(d.feature->size());
            if (dim >= 0 && n != dim) throw DimensionMismatch("features of differing dimension in one file");
            dim = n;
            rows.push_back(&d);
        }
    }
    std::sort(rows.begin(), rows.end(), [](const Detection* a, const Detection* b) {
        return std::pair(a->frame, a->local_track_id) < std::pair(b->frame, b->local_track_id);
    });
    if (dim < 0) dim = 0;
    return rows;
}

}  // namespace

void write_features_csv(std::ostream& out, std::span<const Tracklet> tracklets,
                        const std::vector<std::string>& comments) {
    int dim = 0;
    const auto rows = featured_rows(tracklets, dim);
    write_comments(out, comments);
    out << "# dim=" << dim << '\n';
    out << "frame,local_track_id";
    for (int i = 0; i < dim; ++i) out << ",f" << i;
    out << '\n';
    for (const Detection* d : rows) {
        out << d->frame << ',' << d->local_track_id;
        for (int i = 0; i < dim; ++i) out << ',' << format_number((*d->feature)(i));
        out << '\n';
    }
}

void write_features_bin(std::ostream& out, std::span<const Tracklet> tracklets, const std::string& manifest) {
    int dim = 0;
    const auto rows = featured_rows(tracklets, dim);
    out.write(kFeatureMagic, sizeof kFeatureMagic);
    put<std::uint32_t>(out, static_cast<std::uint32_t>(dim));
    put<std::uint32_t>(out, static_cast<std::uint32_t>(manifest.size()));
    out.write(manifest.data(), static_cast<std::streamsize>(manifest.size()));
    put<std::uint64_t>(out, rows.size());
    for (const Detection* d : rows) {
        put<std::int32_t>(out, d->frame);
        put<std::int32_t>(out, d->local_track_id);
        for (int i = 0; i < dim; ++i) put<float>(out, (*d->feature)(i));
    }
}

std::vector<FeatureRecord> read_features_csv(std::istream& in, const std::string& source) {
    CsvReader reader(in, source);
    const auto cols0 = reader.header({"frame", "local_track_id"}, false);
    const int dim = static_cast<int>(cols0.size()) - 2;
    for (const auto& c : reader.comments()) {
        if (c.rfind("# dim=", 0) == 0 && std::stoi(c.substr(6)) != dim) {
            throw DimensionMismatch(source + ": declared dim " + c.substr(6) + " but header has " +
                                    std::to_string(dim) + " feature columns");
        }
    }
    std::vector<FeatureRecord> out;
    std::vector<std::string> cols;
    while (reader.next(cols)) {
        if (cols.size() != cols0.size()) {
            fail(source, reader.line(), "expected " + std::to_string(cols0.size()) + " columns, found " +
                                            std::to_string(cols.size()));
        }
        FeatureRecord r;
        r.frame = parse_num<int>(cols[0], source, reader.line(), "frame");
        r.local_track_id = parse_num<int>(cols[1], source, reader.line(), "local_track_id");
        r.values.resize(dim);
        for (int i = 0; i < dim; ++i) r.values(i) = parse_num<float>(cols[2 + i], source, reader.line(), cols0[2 + i]);
        if (!r.values.allFinite()) fail(source, reader.line(), "non-finite feature value");
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<FeatureRecord> read_features_bin(std::istream& in, const std::string& source) {
    char magic[sizeof kFeatureMagic];
    in.read(magic, sizeof magic);
    if (!in || std::memcmp(magic, kFeatureMagic, sizeof magic) != 0) {
        throw IoError(source + ": not a binary feature file (bad magic)");
    }
    const auto dim = get<std::uint32_t>(in, source);
    const auto manifest_len = get<std::uint32_t>(in, source);
    in.ignore(manifest_len);
    const auto count = get<std::uint64_t>(in, source);
    std::vector<FeatureRecord> out;
    out.reserve(count);
    for (std::uint64_t k = 0; k < count; ++k) {
        FeatureRecord r;
        r.frame = get<std::int32_t>(in, source);
        r.local_track_id = get<std::int32_t>(in, source);
        r.values.resize(dim);
        for (std::uint32_t i = 0; i < dim; ++i) r.values(i) = get<float>(in, source);
        if (!r.values.allFinite()) throw IoError(source + ": non-finite feature value");
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<FeatureRecord> read_features_file(const std::string& path) {
    const bool binary = path.size() >= 4 && path.compare(path.size() - 4, 4, ".bin") == 0;
    std::ifstream in(path, binary ? std::ios::binary : std::ios::in);
    if (!in) throw IoError("cannot open feature file " + path);
    return binary ? read_features_bin(in, path) : read_features_csv(in, path);
}

void attach_features(std::vector<Tracklet>& tracklets, const std::vector<FeatureRecord>& records) {
    std::map<std::pair<int, int>, const FeatureRecord*> index;
    Eigen::Index dim = -1;
    for (const auto& r : records) {
        if (dim >= 0 && r.values.size() != dim) throw DimensionMismatch("feature records differ in dimension");
        dim = r.values.size();
        index[{r.local_track_id, r.frame}] = &r;
    }
    for (auto& t : tracklets) {
        for (auto& d : t.detections) {
            auto it = index.find({t.local_track_id, d.frame});
            if (it != index.end()) d.feature = l2_normalized(it->second->values);
        }
    }
}

void write_global_csv(std::ostream& out, std::span<const GlobalTrack> tracks, const std::vector<std::string>& comments) {
    write_comments(out, comments);
    out << kGlobalHeader << '\n';
    std::vector<std::pair<std::pair<int, int>, const Detection*>> rows;
    for (const auto& t : tracks) {
        for (const auto& d : t.points) rows.push_back({{d.frame, t.global_id}, &d});
    }
    std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    for (const auto& [key, d] : rows) {
        out << key.first << ',' << key.second << ',' << format_number(d->global_pos.x(), 4) << ','
            << format_number(d->global_pos.y(), 4) << ',' << d->camera_id << ',' << d->local_track_id << '\n';
    }
}

void write_truth_csv(std::ostream& out, const LabeledTimeline& truth, const std::vector<std::string>& comments) {
    write_comments(out, comments);
    out << kGlobalHeader << '\n';
    for (const auto& [frame, pts] : truth) {
        std::vector<LabeledPoint> sorted = pts;
        std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
        for (const auto& p : sorted) {
            out << frame << ',' << p.id << ',' << format_number(p.pos.x(), 4) << ',' << format_number(p.pos.y(), 4)
                << ",-1,-1\n";
        }
    }
}

LabeledTimeline read_global_csv(std::istream& in, const std::string& source) {
    CsvReader reader(in, source);
    const auto names = header_columns(kGlobalHeader);
    reader.header(names, true);
    LabeledTimeline out;
    std::vector<std::string> cols;
    while (reader.next(cols)) {
        if (cols.size() != names.size()) {
            fail(source, reader.line(), "expected " + std::to_string(names.size()) + " columns, found " +
                                            std::to_string(cols.size()));
        }
        const int frame = parse_num<int>(cols[0], source, reader.line(), names[0]);
        LabeledPoint p;
        p.id = parse_num<int>(cols[1], source, reader.line(), names[1]);
        p.pos.x() = parse_num<double>(cols[2], source, reader.line(), names[2]);
        p.pos.y() = parse_num<double>(cols[3], source, reader.line(), names[3]);
        parse_num<int>(cols[4], source, reader.line(), names[4]);
        parse_num<int>(cols[5], source, reader.line(), names[5]);
        if (!p.pos.allFinite()) fail(source, reader.line(), "non-finite coordinate");
        out[frame].push_back(p);
    }
    return out;
}

LabeledTimeline to_timeline(std::span<const GlobalTrack> tracks) {
    LabeledTimeline out;
    for (const auto& t : tracks) {
        for (const auto& d : t.points) out[d.frame].push_back({t.global_id, d.global_pos});
    }
    return out;
}

std::vector<Tracklet> read_tracklets_file(const std::string& path, int camera_id) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open tracklet file " + path);
    return read_tracklets_csv(in, camera_id, path);
}

LabeledTimeline read_global_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    return read_global_csv(in, path);
}

}  // namespace mcfuse::io
