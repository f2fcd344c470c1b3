#pragma once

#include <stdexcept>
#include <string>
#include <variant>

#include "vbma/curvature.hpp"
#include "vbma/rank2_surface.hpp"
#include "vbma/vortex_surface.hpp"
#include "vbma/vortex_threefold.hpp"

// Structured-text instance files. Every file is a UTF-8 JSON object with a
// "version" field, a "kind" discriminator, and kind-specific payload fields.
// Complex scalars are two-element real arrays [re, im]; matrices are row-major
// nested arrays. Loading validates structure and type invariants only;
// mathematical claims (residuals, verdicts) are left to the callers so that a
// well-formed but wrong instance can be reported as a violation rather than a
// parse error.

namespace vbma {

inline constexpr int kInstanceFileVersion = 1;

enum class InstanceKind {
  GenericCurvature,
  Rank2Surface,
  VortexSurface,
  Threefold,
};

const char* to_string(InstanceKind kind);

// Thrown on any malformed file; location points at the first violation, in
// dotted-path notation rooted at "$".
class SchemaError : public std::runtime_error {
 public:
  SchemaError(std::string location, const std::string& message);
  const std::string& location() const { return location_; }

 private:
  std::string location_;
};

struct Rank2SurfaceData {
  SurfaceBlocks blocks;
  double eta0 = 1.0;
};

using InstancePayload = std::variant<Curvature, Rank2SurfaceData,
                                     VortexSurfaceInstance, ThreefoldInstance>;

struct InstanceFile {
  int version = kInstanceFileVersion;
  InstancePayload payload;

  InstanceKind kind() const {
    return static_cast<InstanceKind>(payload.index());
  }
};

InstanceFile parse_instance(const std::string& text);

InstanceFile load_instance(const std::string& path);

std::string serialize_instance(const InstanceFile& file);

void save_instance(const std::string& path, const InstanceFile& file);

}  // namespace vbma
