#include "paircond/matrix_io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "paircond/density.hpp"

namespace paircond {

using nlohmann::json;

namespace {

json complex_array(const cplx* p, Eigen::Index count) {
  json arr = json::array();
  for (Eigen::Index k = 0; k < count; ++k) arr.push_back({p[k].real(), p[k].imag()});
  return arr;
}

bool is_density_kind(const std::string& k) { return k == "rho1" || k == "rho2" || k == "rhobar" || k == "rho1_tilde"; }

Eigen::Index expected_dim(const std::string& kind, const std::string& conv, int n, Statistics s) {
  if (kind == "rho1" || kind == "rho1_tilde" || kind == "pair" || kind == "unitary") {
    if (conv != "full") throw SchemaError("field 'index_convention': kind '" + kind + "' requires \"full\"");
    return n;
  }
  if (conv == "full") return static_cast<Eigen::Index>(n) * n;
  return static_cast<Eigen::Index>(pair_index_set(n, s).size());
}

template <class T>
T require(const json& doc, const char* field) {
  if (!doc.contains(field)) throw SchemaError(std::string("missing field '") + field + "'");
  try {
    return doc.at(field).get<T>();
  } catch (const json::exception&) {
    throw SchemaError(std::string("field '") + field + "' has the wrong type");
  }
}

std::ofstream open_out(const std::string& path) {
  std::ofstream os(path);
  if (!os) throw Error("cannot open '" + path + "' for writing");
  return os;
}

json parse_stream(std::istream& is) {
  try {
    return json::parse(is);
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("invalid JSON: ") + e.what());
  }
}

}  // namespace

void write_matrix(std::ostream& os, const MatrixFile& m) {
  json doc;
  doc["kind"] = m.kind;
  doc["statistics"] = to_string(m.statistics);
  doc["n"] = m.n;
  doc["index_convention"] = m.index_convention;
  const CMatrix rowmajor = m.data.transpose();
  doc["data"] = complex_array(rowmajor.data(), rowmajor.size());
  os << doc.dump(1) << '\n';
}

void write_matrix_file(const std::string& path, const MatrixFile& m) {
  auto os = open_out(path);
  write_matrix(os, m);
}

MatrixFile read_matrix(std::istream& is, double herm_tol) {
  const json doc = parse_stream(is);
  if (!doc.is_object()) throw SchemaError("top level must be an object");
  MatrixFile m;
  m.kind = require<std::string>(doc, "kind");
  if (!is_density_kind(m.kind) && m.kind != "pair" && m.kind != "unitary") throw SchemaError("field 'kind': unknown value '" + m.kind + "'");
  try {
    m.statistics = statistics_from_string(require<std::string>(doc, "statistics"));
  } catch (const StatisticsError&) {
    throw SchemaError("field 'statistics': expected \"fermion\" or \"boson\"");
  }
  m.n = require<int>(doc, "n");
  if (m.n < 1 || m.n > kMaxModes) throw SchemaError("field 'n': out of range");
  m.index_convention = require<std::string>(doc, "index_convention");
  if (m.index_convention != "packed_lex" && m.index_convention != "full") {
    throw SchemaError("field 'index_convention': expected \"packed_lex\" or \"full\"");
  }
  const Eigen::Index dim = expected_dim(m.kind, m.index_convention, m.n, m.statistics);
  if (!doc.contains("data") || !doc.at("data").is_array()) throw SchemaError("missing array field 'data'");
  const json& data = doc.at("data");
  if (static_cast<Eigen::Index>(data.size()) != dim * dim) {
    std::ostringstream msg;
    msg << "field 'data': expected " << dim * dim << " entries, found " << data.size();
    throw SchemaError(msg.str());
  }
  m.data.resize(dim, dim);
  for (Eigen::Index r = 0; r < dim; ++r) {
    for (Eigen::Index c = 0; c < dim; ++c) {
      const json& e = data[static_cast<std::size_t>(r * dim + c)];
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
        std::ostringstream msg;
        msg << "field 'data': entry (" << r << "," << c << ") is not a [re, im] pair";
        throw SchemaError(msg.str());
      }
      m.data(r, c) = cplx(e[0].get<double>(), e[1].get<double>());
    }
  }
  if (is_density_kind(m.kind)) {
    const double scale = std::max(1.0, m.data.cwiseAbs().maxCoeff());
    for (Eigen::Index r = 0; r < dim; ++r) {
      for (Eigen::Index c = r; c < dim; ++c) {
        const double d = std::abs(m.data(r, c) - std::conj(m.data(c, r)));
        if (d > herm_tol * scale) {
          std::ostringstream msg;
          msg << "field 'data': matrix not Hermitian at entry (" << r << "," << c << "), deviation " << d;
          throw SchemaError(msg.str());
        }
      }
    }
  }
  return m;
}

MatrixFile read_matrix_file(const std::string& path, double herm_tol) {
  std::ifstream is(path);
  if (!is) throw SchemaError("cannot open '" + path + "'");
  try {
    return read_matrix(is, herm_tol);
  } catch (const SchemaError& e) {
    throw SchemaError(path + ": " + e.what());
  }
}

CMatrix packed_rho2(const MatrixFile& m) {
  if (m.kind != "rho2") throw SchemaError("expected a rho2 file, got kind '" + m.kind + "'");
  if (m.index_convention == "packed_lex") return m.data;
  return 0.5 * pack_two_body(m.data, m.n, m.statistics);
}

void write_state_file(const std::string& path, const StateVector& state) {
  json doc;
  doc["kind"] = "state";
  doc["statistics"] = to_string(state.basis->statistics());
  doc["n"] = state.basis->modes();
  doc["particles"] = state.basis->particles();
  doc["data"] = complex_array(state.amplitudes.data(), state.amplitudes.size());
  auto os = open_out(path);
  os << doc.dump(1) << '\n';
}

StateVector read_state_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw SchemaError("cannot open '" + path + "'");
  const json doc = parse_stream(is);
  if (require<std::string>(doc, "kind") != "state") throw SchemaError("field 'kind': expected \"state\"");
  Statistics s;
  try {
    s = statistics_from_string(require<std::string>(doc, "statistics"));
  } catch (const StatisticsError&) {
    throw SchemaError("field 'statistics': expected \"fermion\" or \"boson\"");
  }
  const int n = require<int>(doc, "n");
  const int particles = require<int>(doc, "particles");
  if (n < 1 || n > kMaxModes || particles < 0) throw SchemaError("field 'n' or 'particles': out of range");
  auto basis = FockBasis::make(n, particles, s);
  const json& data = doc.at("data");
  if (!data.is_array() || data.size() != basis->size()) throw SchemaError("field 'data': length differs from the sector dimension");
  CVector v(static_cast<Eigen::Index>(basis->size()));
  for (std::size_t k = 0; k < data.size(); ++k) {
    const json& e = data[k];
    if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
      throw SchemaError("field 'data': entry " + std::to_string(k) + " is not a [re, im] pair");
    }
    v(static_cast<Eigen::Index>(k)) = cplx(e[0].get<double>(), e[1].get<double>());
  }
  StateVector st{basis, v};
  if (!(st.norm() > 0.0)) throw SchemaError("state has zero norm");
  return st.normalized();
}

}  // namespace paircond
