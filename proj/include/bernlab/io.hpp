#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bernlab/eigenfields.hpp"
#include "bernlab/scalar_field.hpp"

namespace bernlab::io {

inline constexpr const char* kVersion = "0.1.0";

/// File and input-data failures (distinct from configuration errors so the
/// CLI can map them to exit code 3).
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

// Expansion serialization: {"d": ..., "r_ref": ..., "terms": [[k, m, a], ...]}
std::string expansion_to_json(const sphharm::HarmonicExpansion& e);
sphharm::HarmonicExpansion expansion_from_json(const std::string& text);

// Eigenfunction spec files:
//   {"manifold": "torus", "d": 2, "modes": [[[m1, m2], cos, sin], ...]}
//   {"manifold": "sphere", "n": 2, "degree": k, "coefficients": [...]}
std::string eigenfunction_to_json(const eigenfields::Eigenfunction& phi);
std::shared_ptr<const eigenfields::Eigenfunction> eigenfunction_from_json(const std::string& text);

/// Externally computed field samples. Evaluation interpolates: complete
/// periodic lattices get separable Catmull-Rom splines, scattered points an
/// inverse-distance fallback.
struct SampledField {
  Domain domain;
  std::vector<Vec> points;
  std::vector<double> values;
  std::vector<Vec> gradients;  // empty, or one per point
  std::optional<double> band_limit;
  std::string provenance;

  ScalarField field() const;
  bool has_gradients() const { return !gradients.empty(); }
};

SampledField ingest(const std::string& path, const std::string& format);
SampledField ingest_csv_text(const std::string& text);
SampledField ingest_json_text(const std::string& text);
std::string sampled_to_csv(const SampledField& s);

std::string sha256_hex(const std::string& data);

struct RunManifest {
  std::string config_snapshot;  // JSON text
  std::string code_version = kVersion;
  std::uint64_t seed = 0;
  std::string started_at;
  std::string finished_at;
  std::vector<std::pair<std::string, std::string>> artifacts;  // (path, sha256)

  void start();
  void finish();
  void add_artifact(const std::string& path);  // digests current file content
  std::string to_json() const;
};

}  // namespace bernlab::io
