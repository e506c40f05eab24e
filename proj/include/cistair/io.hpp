#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "cistair/laminate.hpp"
#include "cistair/realize.hpp"

namespace cistair {

inline constexpr const char* kLaminateSchema = "cistair.laminate/1";
inline constexpr const char* kMeshSchema = "cistair.mesh/1";
inline constexpr const char* kManifestSchema = "cistair.manifest/1";
inline constexpr const char* kReportSchema = "cistair.report/1";

// CSV files start with a "# schema: <name>" line.
inline constexpr const char* kMeshCsvSchema = "cistair.mesh-csv/1";
inline constexpr const char* kProfileCsvSchema = "cistair.profile-csv/1";
inline constexpr const char* kLevelsCsvSchema = "cistair.levels-csv/1";
inline constexpr const char* kThetaCsvSchema = "cistair.theta-csv/1";
inline constexpr const char* kSeriesCsvSchema = "cistair.series-csv/1";

std::string fmt_real(double x);

// One JSON object per line: a header with the schema, then one record per tree node.
template <class T>
void write_laminate_jsonl(std::ostream& os, const Laminate<T>& lam);

struct LaminateRecord {
    int node = 0, parent = -1, left = -1, right = -1, atom = -1;
    std::string lambda, weight;
    std::string ap_re, ap_im, am_re, am_im;
};
std::vector<LaminateRecord> read_laminate_jsonl(std::istream& is);

nlohmann::json mesh_to_json(const PiecewiseAffineMap& m, const std::vector<int>& phase);
PiecewiseAffineMap mesh_from_json(const nlohmann::json& j, std::vector<int>* phase = nullptr);
void write_mesh_csv(std::ostream& os, const PiecewiseAffineMap& m, const std::vector<int>& phase);

// Throws InvalidInput unless j["schema"] equals `expected`.
void check_schema(const nlohmann::json& j, const std::string& expected, const std::string& what);
// Reads the first line of a CSV and checks its schema tag.
void check_csv_schema(std::istream& is, const std::string& expected, const std::string& what);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);
void ensure_directory(const std::string& path);

}  // namespace cistair
