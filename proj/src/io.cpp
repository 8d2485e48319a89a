#include "bernlab/io.hpp"

#include <ctime>
#include <cmath>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "bernlab/rng.hpp"

namespace bernlab::io {

using nlohmann::json;

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write file: " + path);
  out << content;
  if (!out) throw IoError("write failed: " + path);
}

std::string expansion_to_json(const sphharm::HarmonicExpansion& e) {
  json j;
  j["d"] = e.dim();
  j["r_ref"] = e.r_ref();
  json terms = json::array();
  for (const auto& t : e.terms()) terms.push_back({t.degree, t.index, t.coeff});
  j["terms"] = terms;
  return j.dump(2);
}

sphharm::HarmonicExpansion expansion_from_json(const std::string& text) {
  json j = json::parse(text);
  if (!j.contains("d") || !j.contains("terms"))
    throw IoError("expansion json: missing 'd' or 'terms'");
  int d = j["d"].get<int>();
  double r_ref = j.value("r_ref", 1.0);
  sphharm::HarmonicExpansion e(d, r_ref);
  for (const auto& t : j["terms"]) {
    if (!t.is_array() || t.size() != 3) throw IoError("expansion json: bad term entry");
    e.set_coeff(t[0].get<int>(), t[1].get<int>(), t[2].get<double>());
  }
  return e;
}

std::string eigenfunction_to_json(const eigenfields::Eigenfunction& phi) {
  json j;
  if (const auto* t = dynamic_cast<const eigenfields::TorusEigenfunction*>(&phi)) {
    j["manifold"] = "torus";
    j["d"] = t->dim();
    json modes = json::array();
    for (const auto& m : t->modes()) modes.push_back({m.m, m.cos_coeff, m.sin_coeff});
    j["modes"] = modes;
  } else if (const auto* s = dynamic_cast<const eigenfields::SphereEigenfunction*>(&phi)) {
    j["manifold"] = "sphere";
    j["n"] = s->sphere_dim();
    j["degree"] = s->degree();
    int dk = sphharm::dim_harmonics(s->sphere_dim() + 1, s->degree());
    std::vector<double> c(dk, 0.0);
    for (int m = 0; m < dk; ++m) c[m] = s->polynomial().coeff(s->degree(), m);
    j["coefficients"] = c;
  } else {
    throw std::runtime_error("eigenfunction_to_json: unknown eigenfunction type");
  }
  return j.dump(2);
}

std::shared_ptr<const eigenfields::Eigenfunction> eigenfunction_from_json(const std::string& text) {
  json j = json::parse(text);
  std::string man = j.at("manifold").get<std::string>();
  if (man == "torus") {
    int d = j.at("d").get<int>();
    std::vector<eigenfields::TorusMode> modes;
    if (j.contains("modes")) {
      for (const auto& m : j["modes"]) {
        eigenfields::TorusMode md;
        md.m = m.at(0).get<std::vector<int>>();
        md.cos_coeff = m.at(1).get<double>();
        md.sin_coeff = m.at(2).get<double>();
        modes.push_back(std::move(md));
      }
    } else {
      // seeded random combination over all modes sharing the eigenvalue
      int lam = j.at("lambda").get<int>();
      Rng rng(j.value("seed", (std::uint64_t)1));
      for (const auto& m : eigenfields::integer_modes_with_norm2(d, lam))
        modes.push_back({m, rng.normal(), rng.normal()});
      if (modes.empty()) throw IoError("eigenfunction json: lambda is not a sum of squares");
    }
    return eigenfields::make_torus_eigenfunction(d, modes);
  }
  if (man == "sphere") {
    int n = j.at("n").get<int>();
    int k = j.at("degree").get<int>();
    if (j.contains("coefficients"))
      return eigenfields::make_sphere_eigenfunction(n, k, j["coefficients"].get<std::vector<double>>());
    Rng rng(j.value("seed", (std::uint64_t)1));
    std::vector<double> c((size_t)sphharm::dim_harmonics(n + 1, k));
    for (double& v : c) v = rng.normal();
    return eigenfields::make_sphere_eigenfunction(n, k, c);
  }
  throw IoError("eigenfunction json: unknown manifold tag " + man);
}

namespace {

Domain parse_domain(const std::string& tag, int dim, double period) {
  if (tag == "torus") return Domain::torus(dim, period);
  if (tag == "euclidean") return Domain::euclidean_space(dim);
  if (tag == "sphere") return Domain::sphere(dim);
  throw IoError("sampled field: unknown domain tag " + tag);
}

void validate_sampled(SampledField& s) {
  size_t n = s.points.size();
  if (s.values.size() != n) throw IoError("sampled field: points/values length mismatch");
  if (!s.gradients.empty() && s.gradients.size() != n)
    throw IoError("sampled field: points/gradients length mismatch");
  int cd = s.domain.coord_dim();
  std::vector<std::string> violations;
  for (size_t i = 0; i < n; ++i) {
    if (s.points[i].size() != cd) violations.push_back("row " + std::to_string(i) + ": bad point dim");
    for (int a = 0; a < s.points[i].size(); ++a)
      if (!std::isfinite(s.points[i][a]))
        violations.push_back("row " + std::to_string(i) + ": non-finite coordinate");
    if (!std::isfinite(s.values[i])) violations.push_back("row " + std::to_string(i) + ": non-finite value");
    if (s.domain.kind == Manifold::sphere && std::abs(s.points[i].norm() - 1.0) > 1e-9)
      violations.push_back("row " + std::to_string(i) + ": point not on the unit sphere");
  }
  if (!violations.empty()) {
    std::string msg = "sampled field validation failed:";
    for (const auto& v : violations) msg += "\n  " + v;
    throw IoError(msg);
  }
  // duplicates (after torus wrap)
  std::map<std::vector<long long>, size_t> seen;
  for (size_t i = 0; i < n; ++i) {
    std::vector<long long> key(cd);
    for (int a = 0; a < cd; ++a) {
      double v = s.points[i][a];
      if (s.domain.kind == Manifold::torus)
        v = v - std::floor(v / s.domain.period) * s.domain.period;
      key[a] = (long long)std::llround(v * 1e12);
    }
    auto [it, fresh] = seen.emplace(std::move(key), i);
    if (!fresh)
      throw IoError("sampled field: duplicate point at rows " +
                               std::to_string(it->second) + " and " + std::to_string(i));
  }
}

struct GridIndex {
  bool ok = false;
  std::vector<int> n;            // points per axis
  std::vector<double> origin;    // first lattice coordinate per axis
  std::vector<double> h;         // spacing per axis
  std::vector<double> data;      // values in row-major (axis 0 slowest)
  std::vector<std::vector<double>> grad_data;
};

GridIndex detect_grid(const SampledField& s) {
  GridIndex g;
  if (s.domain.kind != Manifold::torus) return g;
  int cd = s.domain.coord_dim();
  double L = s.domain.period;
  std::vector<std::vector<double>> axes(cd);
  for (const Vec& p : s.points)
    for (int a = 0; a < cd; ++a) {
      double v = p[a] - std::floor(p[a] / L) * L;
      axes[a].push_back(v);
    }
  g.n.assign(cd, 0);
  g.origin.assign(cd, 0);
  g.h.assign(cd, 0);
  size_t total = 1;
  for (int a = 0; a < cd; ++a) {
    auto ax = axes[a];
    std::sort(ax.begin(), ax.end());
    ax.erase(std::unique(ax.begin(), ax.end(),
                         [](double x, double y) { return std::abs(x - y) < 1e-9; }),
             ax.end());
    int na = (int)ax.size();
    if (na < 4) return g;  // need 4 points per axis for Catmull-Rom
    double h = L / na;
    for (int i = 0; i < na; ++i)
      if (std::abs(ax[i] - (ax[0] + i * h)) > 1e-7) return g;
    g.n[a] = na;
    g.origin[a] = ax[0];
    g.h[a] = h;
    total *= na;
  }
  if (total != s.points.size()) return g;
  g.data.assign(total, 0.0);
  std::vector<char> filled(total, 0);
  if (s.has_gradients()) g.grad_data.assign(cd, std::vector<double>(total, 0.0));
  for (size_t i = 0; i < s.points.size(); ++i) {
    size_t idx = 0;
    for (int a = 0; a < cd; ++a) {
      double v = s.points[i][a] - std::floor(s.points[i][a] / L) * L;
      long long cell = std::llround((v - g.origin[a]) / g.h[a]);
      cell = ((cell % g.n[a]) + g.n[a]) % g.n[a];
      idx = idx * g.n[a] + (size_t)cell;
    }
    if (filled[idx]) return g;
    filled[idx] = 1;
    g.data[idx] = s.values[i];
    for (int a = 0; a < (int)g.grad_data.size(); ++a) g.grad_data[a][idx] = s.gradients[i][a];
  }
  g.ok = true;
  return g;
}

double catmull_rom(double p0, double p1, double p2, double p3, double t) {
  return 0.5 * ((2.0 * p1) + (-p0 + p2) * t + (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3) * t * t +
                (-p0 + 3.0 * p1 - 3.0 * p2 + p3) * t * t * t);
}

double grid_interp(const GridIndex& g, const std::vector<double>& data, const Vec& x, double L,
                   int axis, size_t base_stride, const std::vector<long long>& cells,
                   const std::vector<double>& fracs, size_t offset) {
  // recursive separable Catmull-Rom over the periodic lattice
  int cd = (int)g.n.size();
  if (axis == cd) return data[offset];
  size_t stride = 1;
  for (int a = axis + 1; a < cd; ++a) stride *= g.n[a];
  double samples[4];
  for (int s = -1; s <= 2; ++s) {
    long long c = ((cells[axis] + s) % g.n[axis] + g.n[axis]) % g.n[axis];
    samples[s + 1] =
        grid_interp(g, data, x, L, axis + 1, base_stride, cells, fracs, offset + (size_t)c * stride);
  }
  (void)base_stride;
  (void)x;
  (void)L;
  return catmull_rom(samples[0], samples[1], samples[2], samples[3], fracs[axis]);
}

}  // namespace

ScalarField SampledField::field() const {
  auto self = std::make_shared<SampledField>(*this);
  GridIndex grid = detect_grid(*this);
  auto gridp = std::make_shared<GridIndex>(std::move(grid));
  Domain dom = domain;
  bool grads = has_gradients();
  ScalarField f(
      dom,
      [self, gridp, dom, grads](const Vec& x) {
        FieldEval out;
        int cd = dom.coord_dim();
        if (gridp->ok) {
          double L = dom.period;
          std::vector<long long> cells(cd);
          std::vector<double> fracs(cd);
          for (int a = 0; a < cd; ++a) {
            double v = x[a] - std::floor(x[a] / L) * L;
            double u = (v - gridp->origin[a]) / gridp->h[a];
            double fl = std::floor(u);
            cells[a] = (long long)fl;
            fracs[a] = u - fl;
          }
          out.value = grid_interp(*gridp, gridp->data, x, L, 0, 0, cells, fracs, 0);
          if (grads) {
            out.has_grad = true;
            out.grad = Vec(cd);
            for (int a = 0; a < cd; ++a)
              out.grad[a] = grid_interp(*gridp, gridp->grad_data[a], x, L, 0, 0, cells, fracs, 0);
          }
          return out;
        }
        // scattered fallback: inverse-distance weights on geodesic distances
        double wsum = 0, vsum = 0;
        Vec gsum(cd);
        for (size_t i = 0; i < self->points.size(); ++i) {
          double dist = geodesic_distance(dom, x, self->points[i]);
          if (dist < 1e-12) {
            out.value = self->values[i];
            if (grads) {
              out.has_grad = true;
              out.grad = self->gradients[i];
            }
            return out;
          }
          double w = 1.0 / std::pow(dist, 4);
          wsum += w;
          vsum += w * self->values[i];
          if (grads) gsum.axpy(w, self->gradients[i]);
        }
        out.value = vsum / wsum;
        if (grads) {
          out.has_grad = true;
          out.grad = gsum * (1.0 / wsum);
        }
        return out;
      },
      band_limit, "sampled:" + provenance);
  f.has_gradient_ = grads;
  return f;
}

SampledField ingest_csv_text(const std::string& text) {
  SampledField s;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  bool have_header = false, have_columns = false;
  int cd = 0;
  bool with_grad = false;
  double period = kTwoPi;
  std::string domtag;
  int dim = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line[0] == '#') {
      std::istringstream hs(line.substr(1));
      std::string kv;
      while (hs >> kv) {
        auto eq = kv.find('=');
        if (eq == std::string::npos) continue;
        std::string key = kv.substr(0, eq), val = kv.substr(eq + 1);
        if (key == "domain") domtag = val;
        else if (key == "dim") dim = std::stoi(val);
        else if (key == "period") period = std::stod(val);
        else if (key == "band") s.band_limit = std::stod(val);
        else if (key == "provenance") s.provenance = val;
      }
      have_header = true;
      continue;
    }
    if (!have_header) throw IoError("sampled csv: missing '#' header (line 1)");
    if (!have_columns) {
      if (domtag.empty() || dim == 0) throw IoError("sampled csv: header must declare domain and dim");
      s.domain = parse_domain(domtag, dim, period);
      cd = s.domain.coord_dim();
      int ncols = 1;
      for (char c : line) ncols += c == ',';
      if (ncols == cd + 1) with_grad = false;
      else if (ncols == 2 * cd + 1) with_grad = true;
      else
        throw IoError("sampled csv: line " + std::to_string(lineno) +
                                 ": expected " + std::to_string(cd + 1) + " or " +
                                 std::to_string(2 * cd + 1) + " columns");
      have_columns = true;
      continue;  // column-name row
    }
    std::vector<double> nums;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) {
      size_t a = cell.find_first_not_of(" \t");
      size_t b = cell.find_last_not_of(" \t");
      std::string body = a == std::string::npos ? "" : cell.substr(a, b - a + 1);
      size_t used = 0;
      double v = 0;
      bool ok = !body.empty();
      if (ok) {
        try {
          v = std::stod(body, &used);
        } catch (...) {
          ok = false;
        }
      }
      if (!ok || used != body.size())
        throw IoError("sampled csv: line " + std::to_string(lineno) + ": bad number '" + cell + "'");
      nums.push_back(v);
    }
    size_t expect = with_grad ? (size_t)(2 * cd + 1) : (size_t)(cd + 1);
    if (nums.size() != expect)
      throw IoError("sampled csv: line " + std::to_string(lineno) + ": expected " +
                               std::to_string(expect) + " fields, got " + std::to_string(nums.size()));
    for (double v : nums)
      if (!std::isfinite(v))
        throw IoError("sampled csv: line " + std::to_string(lineno) +
                                 ": non-finite entry rejected");
    Vec p(cd);
    for (int a = 0; a < cd; ++a) p[a] = nums[a];
    s.points.push_back(p);
    s.values.push_back(nums[cd]);
    if (with_grad) {
      Vec gv(cd);
      for (int a = 0; a < cd; ++a) gv[a] = nums[cd + 1 + a];
      s.gradients.push_back(gv);
    }
  }
  if (s.points.empty()) throw IoError("sampled csv: no data rows");
  validate_sampled(s);
  return s;
}

SampledField ingest_json_text(const std::string& text) {
  json j = json::parse(text);
  SampledField s;
  s.domain = parse_domain(j.at("domain").get<std::string>(), j.at("dim").get<int>(),
                          j.value("period", kTwoPi));
  if (j.contains("band")) s.band_limit = j["band"].get<double>();
  s.provenance = j.value("provenance", "");
  for (const auto& p : j.at("points")) s.points.push_back(Vec::from(p.get<std::vector<double>>()));
  s.values = j.at("values").get<std::vector<double>>();
  if (j.contains("gradients"))
    for (const auto& p : j["gradients"]) s.gradients.push_back(Vec::from(p.get<std::vector<double>>()));
  for (double v : s.values)
    if (!std::isfinite(v)) throw IoError("sampled json: non-finite value rejected");
  validate_sampled(s);
  return s;
}

SampledField ingest(const std::string& path, const std::string& format) {
  std::string text = read_text_file(path);
  if (format == "csv") return ingest_csv_text(text);
  if (format == "json") return ingest_json_text(text);
  throw std::invalid_argument("ingest: format must be csv or json");
}

std::string sampled_to_csv(const SampledField& s) {
  std::ostringstream os;
  os << "# domain=";
  switch (s.domain.kind) {
    case Manifold::torus: os << "torus"; break;
    case Manifold::euclidean: os << "euclidean"; break;
    case Manifold::sphere: os << "sphere"; break;
    default: throw std::runtime_error("sampled_to_csv: unsupported domain");
  }
  os << " dim=" << s.domain.dim;
  if (s.domain.kind == Manifold::torus) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", s.domain.period);
    os << " period=" << buf;
  }
  if (s.band_limit) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", *s.band_limit);
    os << " band=" << buf;
  }
  if (!s.provenance.empty()) os << " provenance=" << s.provenance;
  os << "\n";
  int cd = s.domain.coord_dim();
  for (int a = 0; a < cd; ++a) os << "x" << a << ",";
  os << "value";
  if (s.has_gradients())
    for (int a = 0; a < cd; ++a) os << ",g" << a;
  os << "\n";
  char buf[40];
  for (size_t i = 0; i < s.points.size(); ++i) {
    for (int a = 0; a < cd; ++a) {
      std::snprintf(buf, sizeof buf, "%.17g", s.points[i][a]);
      os << buf << ",";
    }
    std::snprintf(buf, sizeof buf, "%.17g", s.values[i]);
    os << buf;
    if (s.has_gradients())
      for (int a = 0; a < cd; ++a) {
        std::snprintf(buf, sizeof buf, "%.17g", s.gradients[i][a]);
        os << "," << buf;
      }
    os << "\n";
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// SHA-256 (FIPS 180-4), compact implementation for manifest digests.

namespace {
inline std::uint32_t rotr(std::uint32_t x, int n) { return (x >> n) | (x << (32 - n)); }

constexpr std::uint32_t kSha[64] = {
    0x428a2f98, 0x71374491, 0xb5c0fbcf, 0xe9b5dba5, 0x3956c25b, 0x59f111f1, 0x923f82a4, 0xab1c5ed5,
    0xd807aa98, 0x12835b01, 0x243185be, 0x550c7dc3, 0x72be5d74, 0x80deb1fe, 0x9bdc06a7, 0xc19bf174,
    0xe49b69c1, 0xefbe4786, 0x0fc19dc6, 0x240ca1cc, 0x2de92c6f, 0x4a7484aa, 0x5cb0a9dc, 0x76f988da,
    0x983e5152, 0xa831c66d, 0xb00327c8, 0xbf597fc7, 0xc6e00bf3, 0xd5a79147, 0x06ca6351, 0x14292967,
    0x27b70a85, 0x2e1b2138, 0x4d2c6dfc, 0x53380d13, 0x650a7354, 0x766a0abb, 0x81c2c92e, 0x92722c85,
    0xa2bfe8a1, 0xa81a664b, 0xc24b8b70, 0xc76c51a3, 0xd192e819, 0xd6990624, 0xf40e3585, 0x106aa070,
    0x19a4c116, 0x1e376c08, 0x2748774c, 0x34b0bcb5, 0x391c0cb3, 0x4ed8aa4a, 0x5b9cca4f, 0x682e6ff3,
    0x748f82ee, 0x78a5636f, 0x84c87814, 0x8cc70208, 0x90befffa, 0xa4506ceb, 0xbef9a3f7, 0xc67178f2};
}  // namespace

std::string sha256_hex(const std::string& data) {
  std::uint32_t h[8] = {0x6a09e667, 0xbb67ae85, 0x3c6ef372, 0xa54ff53a,
                        0x510e527f, 0x9b05688c, 0x1f83d9ab, 0x5be0cd19};
  std::string msg = data;
  std::uint64_t bitlen = (std::uint64_t)data.size() * 8;
  msg.push_back((char)0x80);
  while (msg.size() % 64 != 56) msg.push_back((char)0x00);
  for (int i = 7; i >= 0; --i) msg.push_back((char)((bitlen >> (8 * i)) & 0xff));
  for (size_t off = 0; off < msg.size(); off += 64) {
    std::uint32_t w[64];
    for (int i = 0; i < 16; ++i)
      w[i] = ((std::uint32_t)(unsigned char)msg[off + 4 * i] << 24) |
             ((std::uint32_t)(unsigned char)msg[off + 4 * i + 1] << 16) |
             ((std::uint32_t)(unsigned char)msg[off + 4 * i + 2] << 8) |
             ((std::uint32_t)(unsigned char)msg[off + 4 * i + 3]);
    for (int i = 16; i < 64; ++i) {
      std::uint32_t s0 = rotr(w[i - 15], 7) ^ rotr(w[i - 15], 18) ^ (w[i - 15] >> 3);
      std::uint32_t s1 = rotr(w[i - 2], 17) ^ rotr(w[i - 2], 19) ^ (w[i - 2] >> 10);
      w[i] = w[i - 16] + s0 + w[i - 7] + s1;
    }
    std::uint32_t a = h[0], b = h[1], c = h[2], d = h[3], e = h[4], f = h[5], g = h[6], hh = h[7];
    for (int i = 0; i < 64; ++i) {
      std::uint32_t S1 = rotr(e, 6) ^ rotr(e, 11) ^ rotr(e, 25);
      std::uint32_t ch = (e & f) ^ (~e & g);
      std::uint32_t t1 = hh + S1 + ch + kSha[i] + w[i];
      std::uint32_t S0 = rotr(a, 2) ^ rotr(a, 13) ^ rotr(a, 22);
      std::uint32_t maj = (a & b) ^ (a & c) ^ (b & c);
      std::uint32_t t2 = S0 + maj;
      hh = g;
      g = f;
      f = e;
      e = d + t1;
      d = c;
      c = b;
      b = a;
      a = t1 + t2;
    }
    h[0] += a;
    h[1] += b;
    h[2] += c;
    h[3] += d;
    h[4] += e;
    h[5] += f;
    h[6] += g;
    h[7] += hh;
  }
  char out[65];
  for (int i = 0; i < 8; ++i) std::snprintf(out + 8 * i, 9, "%08x", h[i]);
  return std::string(out, 64);
}

namespace {
std::string now_iso8601() {
  std::time_t t = std::time(nullptr);
  char buf[32];
  std::tm tmv{};
  gmtime_r(&t, &tmv);
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tmv);
  return buf;
}
}  // namespace

void RunManifest::start() { started_at = now_iso8601(); }
void RunManifest::finish() { finished_at = now_iso8601(); }

void RunManifest::add_artifact(const std::string& path) {
  artifacts.emplace_back(path, sha256_hex(read_text_file(path)));
}

std::string RunManifest::to_json() const {
  json j;
  j["config"] = config_snapshot.empty() ? json::object() : json::parse(config_snapshot);
  j["code_version"] = code_version;
  j["seed"] = seed;
  j["started_at"] = started_at;
  j["finished_at"] = finished_at;
  json arts = json::array();
  for (const auto& [path, digest] : artifacts) arts.push_back({{"path", path}, {"sha256", digest}});
  j["artifacts"] = arts;
  return j.dump(2);
}

}  // namespace bernlab::io
