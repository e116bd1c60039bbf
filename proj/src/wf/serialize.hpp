#pragma once

#include <json.hpp>

#include <map>
#include <string>

#include "wf/analysis.hpp"
#include "wf/gallery.hpp"
#include "wf/point_set.hpp"
#include "wf/rpu.hpp"

namespace wf {

using nlohmann::json;

// region / point-set / window / RPU literals
json region_to_json(const Region& r);
Region region_from_json(const json& j);
json pointset_to_json(const PointSet& p);
PointSet pointset_from_json(const json& j);
json window_to_json(const Window& w);
Window window_from_json(const json& j);
json rpu_to_json(const Rpu& r);
Rpu rpu_from_json(const json& j);
Mat mat_from_json(const json& j);
json mat_to_json(const Mat& m);

// reports (stable field names)
json bounds_to_json(const FrameBounds& b);
json rpu_bounds_to_json(const RpuBounds& b);
json density_to_json(const DensityEstimate& d, double separation_value, double gap_value);
json validation_to_json(const ValidationReport& r);

// system manifest: builder name + overrides (sufficient to rebuild
// deterministically) + certified summary
json manifest_to_json(const GalleryEntry& entry,
                      const std::map<std::string, double>& overrides);
GalleryEntry entry_from_manifest(const json& manifest);

// coefficient dumps: header comments carry per-level layout so a rebuilt
// system can re-derive the synthesis plan; rows are level,k,re,im
void coeffs_write_csv(const AnalysisResult& ar, const std::string& path);
// layouts are re-derived from `plan` (an analysis of the zero signal on the
// same grid); coefficient counts must match
AnalysisResult coeffs_read_csv(const std::string& path, const AnalysisResult& plan);

// Gram matrix as CSV, row-major with interleaved real/imag columns
void gram_write_csv(const CMat& G, const std::string& path);

std::string json_dump(const json& j);

}  // namespace wf
