// Copyright (C) 2026 The mcfuse Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "mcfuse/metrics.hpp"
#include "mcfuse/track.hpp"

namespace mcfuse::io {

// File schemas. Lines starting with '#' are comments (manifest blocks).
inline constexpr const char* kTrackletHeader = "frame,local_track_id,x1,y1,x2,y2,confidence";
inline constexpr const char* kGlobalHeader = "frame,global_id,gx,gy,source_camera,source_local_id";
inline constexpr char kFeatureMagic[8] = {'M', 'C', 'F', 'E', 'A', 'T', '0', '1'};

/// Shortest round-trip text for a double, after rounding to `decimals` places
/// when decimals >= 0.
std::string format_number(double v, int decimals = -1);
std::string format_number(float v);

void write_tracklets_csv(std::ostream& out, std::span<const Tracklet> tracklets,
                         const std::vector<std::string>& comments = {});
/// Parses one camera's tracklet CSV; detections are grouped by local ID and
/// frame-sorted. Throws ConfigError with line numbers on malformed rows.
std::vector<Tracklet> read_tracklets_csv(std::istream& in, int camera_id, const std::string& source = "tracklets");

struct FeatureRecord {
    int frame = 0;
    int local_track_id = 0;
    FeatureVec values;
};

void write_features_csv(std::ostream& out, std::span<const Tracklet> tracklets,
                        const std::vector<std::string>& comments = {});
/// Binary layout, little-endian: 8-byte magic, u32 dim, u32 manifest length,
/// manifest bytes, u64 record count, then per record i32 frame,
/// i32 local_track_id, dim x f32.
void write_features_bin(std::ostream& out, std::span<const Tracklet> tracklets, const std::string& manifest = {});

std::vector<FeatureRecord> read_features_csv(std::istream& in, const std::string& source = "features");
std::vector<FeatureRecord> read_features_bin(std::istream& in, const std::string& source = "features");
/// Dispatches on the extension (.bin -> binary, anything else -> CSV).
std::vector<FeatureRecord> read_features_file(const std::string& path);

/// Attaches L2-normalized features by (frame, local_track_id). Throws
/// DimensionMismatch if records disagree on dimension.
void attach_features(std::vector<Tracklet>& tracklets, const std::vector<FeatureRecord>& records);

void write_global_csv(std::ostream& out, std::span<const GlobalTrack> tracks,
                      const std::vector<std::string>& comments = {});
void write_truth_csv(std::ostream& out, const LabeledTimeline& truth, const std::vector<std::string>& comments = {});
/// Reads either fusion output or ground truth. Throws ConfigError naming the
/// offending column if the header differs from kGlobalHeader.
LabeledTimeline read_global_csv(std::istream& in, const std::string& source = "tracks");

LabeledTimeline to_timeline(std::span<const GlobalTrack> tracks);

std::vector<Tracklet> read_tracklets_file(const std::string& path, int camera_id);
LabeledTimeline read_global_file(const std::string& path);

}  // namespace mcfuse::io
