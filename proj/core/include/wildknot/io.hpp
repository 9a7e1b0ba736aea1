#pragma once

// Text formats: JSON for orders, angle sequences, embedding states, tower
// parameters and geometry; OBJ polylines for curves. Every JSON document
// carries a "schema" field.

#include <string>

#include "wildknot/embedding.hpp"
#include "wildknot/lo_knot.hpp"
#include "wildknot/tower.hpp"

namespace wildknot {

inline constexpr const char* kOrderSchema = "wildknot.order/1";
inline constexpr const char* kSequenceSchema = "wildknot.sequence/1";
inline constexpr const char* kEmbeddingSchema = "wildknot.embedding/1";
inline constexpr const char* kParamsSchema = "wildknot.tower-params/1";
inline constexpr const char* kGeometrySchema = "wildknot.geometry/1";

/// {"ranks": [...], "succ": [[a, b], ...]}. Without "succ" every adjacent
/// pair is flagged. Throws InputError naming the offending field or position.
LoStarPrefix order_from_json(const std::string& text);
std::string order_to_json(const LoStarPrefix& p);

/// {"angles": [...]} in radians.
CircleSeq sequence_from_json(const std::string& text);
std::string sequence_to_json(const CircleSeq& x);

/// f and V as exact {"num", "den"} decimal strings, plus the order.
std::string embedding_to_json(const EmbeddingState& s, const EmbeddingReport* report = nullptr);
EmbeddingState embedding_from_json(const std::string& text);

/// Round-trips doubles exactly.
std::string params_to_json(const TowerParams& p);
TowerParams params_from_json(const std::string& text);

/// {"points": [...], "singularities": [...]} with exact walls.
std::string geometry_to_json(const KnotGeometry& g);
/// Stage curve with its stage index, error bound and tower parameters.
std::string stage_curve_to_json(const StageCurve& c, const TowerParams& p, const CircleSeq& x);

/// OBJ polyline ("v" lines then one "l" element); closed curves repeat the first vertex.
std::string curve_to_obj(const Curve3& c, const std::string& comment = {});

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace wildknot
