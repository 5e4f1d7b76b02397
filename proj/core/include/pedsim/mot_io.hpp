// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <string_view>

#include "pedsim/detect.hpp"
#include "pedsim/track.hpp"

// Plain-text interchange for detections and tracks, one box per line:
//
//   frame,id,x,y,w,h,score,-1,-1,-1
//
// Frames are 1-based in the text and 0-based in memory. Detection lines carry
// id -1 and their real score; track lines carry the track id and score 1. The
// writers emit a canonical form: frame-major order (ties by id), shortest
// round-trip decimal for the box fields, and a trailing newline on every
// line. Reading a canonical file and writing it again reproduces the bytes.
namespace pedsim::mot {

std::string detections_to_mot(const detect::DetectionSet& detections);

// Parses detection lines. The id column is ignored so ground-truth style
// exports can be fed back in. Throws std::runtime_error naming the 1-based
// offending line on malformed input.
detect::DetectionSet detections_from_mot(std::string_view text);

std::string tracks_to_mot(const track::TrackSet& tracks);

// Parses track lines. Ids must be positive and a (frame, id) pair may appear
// at most once. Throws std::runtime_error naming the offending line.
track::TrackSet tracks_from_mot(std::string_view text);

}  // namespace pedsim::mot
