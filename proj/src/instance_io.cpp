#include "vbma/instance_io.hpp"

#include "json.hpp"

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace vbma {

namespace {

using ojson = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& path, const std::string& message) {
  throw SchemaError(path, message);
}

// Read-side cursor carrying the dotted path for error locations.
struct Cursor {
  const ojson* node;
  std::string path;

  Cursor field(const char* key) const {
    if (!node->is_object()) fail(path, "expected an object");
    auto it = node->find(key);
    if (it == node->end()) fail(path + "." + key, "missing field");
    return Cursor{&*it, path + "." + key};
  }

  bool has_field(const char* key) const {
    return node->is_object() && node->contains(key);
  }

  std::size_t length() const {
    if (!node->is_array()) fail(path, "expected an array");
    return node->size();
  }

  Cursor item(std::size_t i) const {
    return Cursor{&(*node)[i], path + "[" + std::to_string(i) + "]"};
  }

  double as_real() const {
    if (!node->is_number()) fail(path, "expected a real number");
    return node->get<double>();
  }

  int as_int() const {
    if (!node->is_number_integer()) fail(path, "expected an integer");
    return node->get<int>();
  }

  std::string as_string() const {
    if (!node->is_string()) fail(path, "expected a string");
    return node->get<std::string>();
  }

  Complex as_complex() const {
    if (!node->is_array() || node->size() != 2) {
      fail(path, "expected a two-element [re, im] array");
    }
    return Complex(item(0).as_real(), item(1).as_real());
  }

  Mat as_matrix() const {
    const std::size_t rows = length();
    if (rows == 0) fail(path, "expected a non-empty matrix");
    Mat out;
    for (std::size_t i = 0; i < rows; ++i) {
      const Cursor row = item(i);
      const std::size_t cols = row.length();
      if (i == 0) {
        if (cols == 0) fail(row.path, "expected a non-empty matrix row");
        out.resize(static_cast<Eigen::Index>(rows),
                   static_cast<Eigen::Index>(cols));
      } else if (cols != static_cast<std::size_t>(out.cols())) {
        fail(row.path, "ragged matrix: rows have different lengths");
      }
      for (std::size_t j = 0; j < cols; ++j) {
        out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
            row.item(j).as_complex();
      }
    }
    return out;
  }

  Eigen::VectorXcd as_complex_vector() const {
    const std::size_t len = length();
    Eigen::VectorXcd out(static_cast<Eigen::Index>(len));
    for (std::size_t i = 0; i < len; ++i) {
      out(static_cast<Eigen::Index>(i)) = item(i).as_complex();
    }
    return out;
  }

  Eigen::VectorXd as_real_vector() const {
    const std::size_t len = length();
    Eigen::VectorXd out(static_cast<Eigen::Index>(len));
    for (std::size_t i = 0; i < len; ++i) {
      out(static_cast<Eigen::Index>(i)) = item(i).as_real();
    }
    return out;
  }
};

void require_hermitian(const Mat& m, const std::string& path) {
  if (m.rows() != m.cols()) fail(path, "expected a square matrix");
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
    fail(path, "matrix is not Hermitian");
  }
}

double positive_real(const Cursor& c) {
  const double v = c.as_real();
  if (!(v > 0.0)) fail(c.path, "expected a positive real number");
  return v;
}

InstanceFile parse_generic_curvature(const Cursor& root) {
  const int n = root.field("n").as_int();
  if (n < 1 || n > kMaxDim) {
    fail(root.path + ".n", "n must lie in [1, " + std::to_string(kMaxDim) + "]");
  }
  const int r = root.field("r").as_int();
  if (r < 1 || r > kMaxRank) {
    fail(root.path + ".r",
         "r must lie in [1, " + std::to_string(kMaxRank) + "]");
  }
  const Cursor blocks = root.field("blocks");
  if (blocks.length() != static_cast<std::size_t>(n)) {
    fail(blocks.path, "expected " + std::to_string(n) + " block rows");
  }
  std::vector<std::vector<Mat>> data(n, std::vector<Mat>(n));
  for (int mu = 0; mu < n; ++mu) {
    const Cursor row = blocks.item(mu);
    if (row.length() != static_cast<std::size_t>(n)) {
      fail(row.path, "expected " + std::to_string(n) + " blocks");
    }
    for (int nu = 0; nu < n; ++nu) {
      const Cursor cell = row.item(nu);
      Mat m = cell.as_matrix();
      if (m.rows() != r || m.cols() != r) {
        fail(cell.path, "expected an " + std::to_string(r) + " x " +
                            std::to_string(r) + " block");
      }
      data[mu][nu] = std::move(m);
    }
  }
  try {
    return InstanceFile{kInstanceFileVersion,
                        Curvature::from_blocks(n, data)};
  } catch (const std::invalid_argument& e) {
    fail(blocks.path, e.what());
  }
}

InstanceFile parse_rank2_surface(const Cursor& root) {
  Rank2SurfaceData data;
  data.eta0 = positive_real(root.field("eta0"));
  data.blocks.a = root.field("a").as_matrix();
  data.blocks.b = root.field("b").as_matrix();
  data.blocks.c = root.field("c").as_matrix();
  require_hermitian(data.blocks.a, root.path + ".a");
  require_hermitian(data.blocks.c, root.path + ".c");
  const Eigen::Index r = data.blocks.a.rows();
  if (r > kMaxRank) fail(root.path + ".a", "bundle rank exceeds capacity");
  if (data.blocks.b.rows() != r || data.blocks.b.cols() != r ||
      data.blocks.c.rows() != r) {
    fail(root.path + ".b", "blocks a, b, c must share one square size");
  }
  return InstanceFile{kInstanceFileVersion, std::move(data)};
}

InstanceFile parse_vortex_surface(const Cursor& root) {
  VortexSurfaceInstance inst;
  inst.n = root.field("n").as_int();
  if (inst.n < 1 || inst.n + 1 > kMaxRank) {
    fail(root.path + ".n",
         "n must lie in [1, " + std::to_string(kMaxRank - 1) + "]");
  }
  inst.r = root.field("r").as_int();
  if (inst.r < 1) fail(root.path + ".r", "r must be >= 1");
  inst.k = positive_real(root.field("k"));
  inst.t_norm_sq = root.field("t_norm_sq").as_real();
  if (inst.t_norm_sq < 0.0) {
    fail(root.path + ".t_norm_sq", "t_norm_sq must be >= 0");
  }
  inst.c = root.field("c").as_complex_vector();
  if (inst.c.size() != inst.n) {
    fail(root.path + ".c", "expected a length-n complex vector");
  }
  inst.b = root.field("b").as_real_vector();
  if (inst.b.size() != inst.n) {
    fail(root.path + ".b", "expected a length-n real vector");
  }
  for (int i = 0; i < inst.n; ++i) {
    if (!(inst.b(i) > 0.0)) {
      fail(root.path + ".b[" + std::to_string(i) + "]",
           "expected a positive real number");
    }
  }
  inst.b_prime = positive_real(root.field("b_prime"));
  inst.a = root.field("a").as_matrix();
  require_hermitian(inst.a, root.path + ".a");
  if (inst.a.rows() != inst.n) {
    fail(root.path + ".a", "expected an n x n matrix");
  }
  inst.a_prime = root.field("a_prime").as_real();
  return InstanceFile{kInstanceFileVersion, std::move(inst)};
}

InstanceFile parse_threefold(const Cursor& root) {
  ThreefoldInstance inst;
  inst.a = positive_real(root.field("a"));
  inst.b = positive_real(root.field("b"));
  inst.lambda1 = positive_real(root.field("lambda1"));
  inst.lambda2 = positive_real(root.field("lambda2"));
  inst.ell1 = root.field("ell1").as_complex();
  inst.ell2 = root.field("ell2").as_complex();
  inst.c = positive_real(root.field("c"));
  return InstanceFile{kInstanceFileVersion, inst};
}

ojson complex_json(Complex z) { return ojson::array({z.real(), z.imag()}); }

ojson matrix_json(const Mat& m) {
  ojson rows = ojson::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    ojson row = ojson::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(complex_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

ojson complex_vector_json(const Eigen::VectorXcd& v) {
  ojson out = ojson::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(complex_json(v(i)));
  return out;
}

ojson real_vector_json(const Eigen::VectorXd& v) {
  ojson out = ojson::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

}  // namespace

const char* to_string(InstanceKind kind) {
  switch (kind) {
    case InstanceKind::GenericCurvature:
      return "generic_curvature";
    case InstanceKind::Rank2Surface:
      return "rank2_surface";
    case InstanceKind::VortexSurface:
      return "vortex_surface";
    case InstanceKind::Threefold:
      return "threefold";
  }
  throw std::logic_error("vbma::to_string: unknown InstanceKind");
}

SchemaError::SchemaError(std::string location, const std::string& message)
    : std::runtime_error("schema violation at " + location + ": " + message),
      location_(std::move(location)) {}

InstanceFile parse_instance(const std::string& text) {
  ojson doc;
  try {
    doc = ojson::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    fail("$", e.what());
  }
  const Cursor root{&doc, "$"};
  const int version = root.field("version").as_int();
  if (version != kInstanceFileVersion) {
    fail("$.version",
         "unsupported version " + std::to_string(version) + ", expected " +
             std::to_string(kInstanceFileVersion));
  }
  const std::string kind = root.field("kind").as_string();
  if (kind == "generic_curvature") return parse_generic_curvature(root);
  if (kind == "rank2_surface") return parse_rank2_surface(root);
  if (kind == "vortex_surface") return parse_vortex_surface(root);
  if (kind == "threefold") return parse_threefold(root);
  fail("$.kind", "unknown kind \"" + kind + "\"");
}

InstanceFile load_instance(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail("$", "cannot open file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_instance(buf.str());
}

std::string serialize_instance(const InstanceFile& file) {
  ojson out;
  out["version"] = file.version;
  out["kind"] = to_string(file.kind());
  if (const auto* curv = std::get_if<Curvature>(&file.payload)) {
    out["n"] = curv->n();
    out["r"] = curv->r();
    ojson rows = ojson::array();
    for (int mu = 1; mu <= curv->n(); ++mu) {
      ojson row = ojson::array();
      for (int nu = 1; nu <= curv->n(); ++nu) {
        row.push_back(matrix_json(curv->block(mu, nu)));
      }
      rows.push_back(std::move(row));
    }
    out["blocks"] = std::move(rows);
  } else if (const auto* surf = std::get_if<Rank2SurfaceData>(&file.payload)) {
    out["eta0"] = surf->eta0;
    out["a"] = matrix_json(surf->blocks.a);
    out["b"] = matrix_json(surf->blocks.b);
    out["c"] = matrix_json(surf->blocks.c);
  } else if (const auto* vortex =
                 std::get_if<VortexSurfaceInstance>(&file.payload)) {
    out["n"] = vortex->n;
    out["r"] = vortex->r;
    out["k"] = vortex->k;
    out["t_norm_sq"] = vortex->t_norm_sq;
    out["c"] = complex_vector_json(vortex->c);
    out["b"] = real_vector_json(vortex->b);
    out["b_prime"] = vortex->b_prime;
    out["a"] = matrix_json(vortex->a);
    out["a_prime"] = vortex->a_prime;
  } else if (const auto* three =
                 std::get_if<ThreefoldInstance>(&file.payload)) {
    out["a"] = three->a;
    out["b"] = three->b;
    out["lambda1"] = three->lambda1;
    out["lambda2"] = three->lambda2;
    out["ell1"] = complex_json(three->ell1);
    out["ell2"] = complex_json(three->ell2);
    out["c"] = three->c;
  }
  return out.dump(2) + "\n";
}

void save_instance(const std::string& path, const InstanceFile& file) {
  std::ofstream outfile(path, std::ios::binary);
  if (!outfile) {
    throw std::runtime_error("vbma::save_instance: cannot open " + path);
  }
  outfile << serialize_instance(file);
}

}  // namespace vbma
