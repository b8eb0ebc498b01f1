// State files, SDP export and run reports.
//
// State file (format 1):
//
//   format: 1
//   dims: [2,2,2]
//   normalize: true
//   symmetry: auto
//   1 1 1 0.5 0.0
//
// Entry lines hold a one-based multi-index followed by the real and
// imaginary part. Unlisted entries are zero; '#' starts a comment. symmetry
// is auto, none, full or partial:[[1,2],...] (one-based modes; a single
// group may be written partial:[1,2]).
#ifndef UEIG_IO_HPP
#define UEIG_IO_HPP

#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "ueig/moment.hpp"
#include "ueig/pipeline.hpp"
#include "ueig/quantum.hpp"

namespace ueig {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, std::size_t line)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + msg : msg), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

struct StateFile {
  std::vector<std::size_t> dims;
  std::vector<cplx> amplitudes;
  bool normalize = false;
  std::optional<SymmetryClass> symmetry;  ///< empty means auto

  PureState state() const { return PureState(dims, amplitudes, normalize); }
  /// Amplitude tensor with the declared (verified) or detected symmetry.
  ComplexTensor tensor() const {
    PureState s = state();
    if (!symmetry) return state_to_tensor(s);
    return ComplexTensor(s.dims(), s.amplitudes(), *symmetry);
  }
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

inline double parse_double(const std::string& tok, std::size_t line) {
  double v = 0.0;
  const char* end = tok.data() + tok.size();
  auto [p, ec] = std::from_chars(tok.data(), end, v);
  if (ec != std::errc() || p != end) throw ParseError("not a number: '" + tok + "'", line);
  return v;
}

inline std::size_t parse_index(const std::string& tok, std::size_t line) {
  std::size_t v = 0;
  const char* end = tok.data() + tok.size();
  auto [p, ec] = std::from_chars(tok.data(), end, v);
  if (ec != std::errc() || p != end) throw ParseError("not an index: '" + tok + "'", line);
  return v;
}

/// Nested integer lists "[1,2]" or "[[1,2],[3,4]]".
inline std::vector<std::vector<std::size_t>> parse_groups(const std::string& s, std::size_t line) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> cur;
  int depth = 0, max_depth = 0;
  std::string num;
  auto flush = [&] {
    if (!num.empty()) cur.push_back(parse_index(num, line));
    num.clear();
  };
  for (char c : s) {
    if (c == '[') {
      max_depth = std::max(max_depth, ++depth);
    } else if (c == ']') {
      flush();
      if (depth == 2 || max_depth == 1) {
        out.push_back(cur);
        cur.clear();
      }
      --depth;
    } else if (c == ',') {
      flush();
    } else if (c != ' ') {
      num += c;
    }
    if (depth < 0 || depth > 2) throw ParseError("malformed list '" + s + "'", line);
  }
  if (depth != 0) throw ParseError("unbalanced brackets in '" + s + "'", line);
  return out;
}

}  // namespace detail

inline StateFile parse_state(std::istream& in) {
  StateFile f;
  std::string raw;
  std::size_t line = 0;
  bool have_dims = false;
  std::vector<std::pair<std::vector<std::size_t>, cplx>> entries;
  std::string symmetry = "auto";
  std::size_t symmetry_line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string s = raw.substr(0, raw.find('#'));
    s = detail::trim(s);
    if (s.empty()) continue;
    const auto colon = s.find(':');
    if (colon != std::string::npos && std::isalpha(static_cast<unsigned char>(s[0]))) {
      const std::string key = detail::trim(s.substr(0, colon));
      const std::string val = detail::trim(s.substr(colon + 1));
      if (key == "format") {
        if (val != "1") throw ParseError("unsupported format version '" + val + "'", line);
      } else if (key == "dims") {
        auto g = detail::parse_groups(val, line);
        if (g.size() != 1 || g[0].empty()) throw ParseError("dims must be a flat list", line);
        for (std::size_t n : g[0])
          if (n == 0) throw ParseError("dimension must be positive", line);
        f.dims = g[0];
        have_dims = true;
      } else if (key == "normalize") {
        if (val != "true" && val != "false") throw ParseError("normalize must be true or false", line);
        f.normalize = val == "true";
      } else if (key == "symmetry") {
        symmetry = val;
        symmetry_line = line;
      } else {
        throw ParseError("unknown key '" + key + "'", line);
      }
      continue;
    }
    std::istringstream ss(s);
    std::vector<std::string> tok;
    for (std::string t; ss >> t;) tok.push_back(t);
    if (!have_dims) throw ParseError("entry before dims header", line);
    if (tok.size() != f.dims.size() + 2)
      throw ParseError("expected " + std::to_string(f.dims.size()) + " indices and a real and imaginary part", line);
    std::vector<std::size_t> idx;
    for (std::size_t k = 0; k < f.dims.size(); ++k) {
      const std::size_t i = detail::parse_index(tok[k], line);
      if (i < 1 || i > f.dims[k])
        throw ParseError("index " + std::to_string(i) + " out of range for mode " + std::to_string(k + 1), line);
      idx.push_back(i - 1);
    }
    const double re = detail::parse_double(tok[f.dims.size()], line);
    const double im = detail::parse_double(tok[f.dims.size() + 1], line);
    entries.push_back({idx, cplx(re, im)});
  }
  if (!have_dims) throw ParseError("missing dims header", 0);
  f.amplitudes.assign(detail::product(f.dims), 0.0);
  const auto st = detail::strides(f.dims);
  for (const auto& [idx, v] : entries) {
    std::size_t off = 0;
    for (std::size_t k = 0; k < idx.size(); ++k) off += idx[k] * st[k];
    f.amplitudes[off] = v;
  }
  if (symmetry == "none") {
    f.symmetry = SymmetryClass::none();
  } else if (symmetry == "full") {
    f.symmetry = SymmetryClass::full();
  } else if (symmetry.rfind("partial:", 0) == 0) {
    auto g = detail::parse_groups(symmetry.substr(8), symmetry_line);
    for (auto& grp : g)
      for (auto& k : grp) {
        if (k < 1 || k > f.dims.size()) throw ParseError("symmetry mode out of range", symmetry_line);
        --k;
      }
    f.symmetry = SymmetryClass::partial(std::move(g));
    try {
      f.symmetry->validate(f.dims.size());
    } catch (const SymmetryError& e) {
      throw ParseError(e.what(), symmetry_line);
    }
  } else if (symmetry != "auto") {
    throw ParseError("symmetry must be auto, none, full or partial:[...]", symmetry_line);
  }
  return f;
}

inline StateFile parse_state_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'", 0);
  return parse_state(in);
}

/// Writes a state file whose amplitudes parse back bit-exactly.
inline std::string emit_state(const StateFile& f) {
  std::ostringstream out;
  out << "format: 1\ndims: [";
  for (std::size_t k = 0; k < f.dims.size(); ++k) out << (k ? "," : "") << f.dims[k];
  out << "]\nnormalize: " << (f.normalize ? "true" : "false") << "\n";
  out << "symmetry: ";
  out << (f.symmetry ? f.symmetry->to_string() : "auto") << "\n";
  std::vector<std::size_t> idx(f.dims.size(), 0);
  std::size_t flat = 0;
  char buf[64];
  do {
    const cplx v = f.amplitudes[flat++];
    if (v == cplx(0.0, 0.0)) continue;
    for (std::size_t i : idx) out << i + 1 << " ";
    std::snprintf(buf, sizeof buf, "%.17g %.17g", v.real(), v.imag());
    out << buf << "\n";
  } while (detail::next_index(idx, f.dims));
  return out.str();
}

/// Sparse text form of a cone problem:
///
///   format: 1
///   variables <n>
///   variable_bound <b|inf>
///   objective <nnz>        then "<j> <c_j>" lines
///   equalities <rows> <nnz> then "<i> <j> <a_ij>" lines, then "rhs <i> <b_i>" lines
///   psd_blocks <count>
///   block <size> <face_size> then size*(size+1)/2 "<r> <c> <j>" lines (upper
///   triangle, entry = y_j), then face <nnz> and "<r> <c> <v>" lines of the
///   face basis (face 0 when the block is unreduced)
///
/// Indices are zero-based.
inline void export_sdp(std::ostream& out, const ConeProblem& p) {
  char buf[96];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  out << "format: 1\nvariables " << p.num_vars() << "\n";
  out << "variable_bound " << (std::isfinite(p.variable_bound) ? num(p.variable_bound) : "inf") << "\n";
  std::size_t nnz = 0;
  for (Eigen::Index j = 0; j < p.objective.size(); ++j) nnz += p.objective(j) != 0.0;
  out << "objective " << nnz << "\n";
  for (Eigen::Index j = 0; j < p.objective.size(); ++j)
    if (p.objective(j) != 0.0) out << j << " " << num(p.objective(j)) << "\n";
  nnz = 0;
  for (Eigen::Index i = 0; i < p.eq_matrix.rows(); ++i)
    for (Eigen::Index j = 0; j < p.eq_matrix.cols(); ++j) nnz += p.eq_matrix(i, j) != 0.0;
  out << "equalities " << p.eq_matrix.rows() << " " << nnz << "\n";
  for (Eigen::Index i = 0; i < p.eq_matrix.rows(); ++i)
    for (Eigen::Index j = 0; j < p.eq_matrix.cols(); ++j)
      if (p.eq_matrix(i, j) != 0.0) out << i << " " << j << " " << num(p.eq_matrix(i, j)) << "\n";
  for (Eigen::Index i = 0; i < p.eq_rhs.size(); ++i)
    if (p.eq_rhs(i) != 0.0) out << "rhs " << i << " " << num(p.eq_rhs(i)) << "\n";
  out << "psd_blocks " << p.blocks.size() << "\n";
  for (const auto& b : p.blocks) {
    out << "block " << b.size() << " " << b.face_size() << "\n";
    for (Eigen::Index r = 0; r < b.index.rows(); ++r)
      for (Eigen::Index c = r; c < b.index.cols(); ++c) out << r << " " << c << " " << b.index(r, c) << "\n";
    out << "face " << (b.face.array() != 0.0).count() << "\n";
    for (Eigen::Index r = 0; r < b.face.rows(); ++r)
      for (Eigen::Index c = 0; c < b.face.cols(); ++c)
        if (b.face(r, c) != 0.0) out << r << " " << c << " " << num(b.face(r, c)) << "\n";
  }
}

namespace detail {

inline nlohmann::json complex_json(const cplx& c) { return nlohmann::json::array({c.real(), c.imag()}); }

inline std::string g12(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

inline std::string complex_text(const cplx& c) {
  return g12(c.real()) + (c.imag() < 0 ? "-" : "+") + g12(std::abs(c.imag())) + "i";
}

}  // namespace detail

/// Structured report of a run. Wall times are the only non-deterministic
/// fields.
inline nlohmann::json report_json(const PipelineResult& r, bool separable, double overlap) {
  using nlohmann::json;
  const double lam = r.eigen.lambda;
  json j;
  j["lambda_max"] = lam;
  j["G"] = lam;
  j["E_G"] = geometric_measure_from(lam);
  j["route"] = to_string(r.route);
  json vecs = json::array();
  for (const auto& v : r.eigen.vectors.vectors) {
    json z = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) z.push_back(detail::complex_json(v(i)));
    vecs.push_back(z);
  }
  j["eigenvectors"] = vecs;
  j["residual"] = r.eigen.residual;
  j["upper_bound"] = std::isfinite(r.upper_bound) ? json(r.upper_bound) : json(nullptr);
  j["oracle_value"] = r.oracle_value ? json(*r.oracle_value) : json(nullptr);
  j["order_used"] = r.eigen.order_used;
  json orders = json::array();
  for (const auto& o : r.orders) {
    orders.push_back({{"order", o.order},
                      {"rho", o.rho},
                      {"upper", o.upper},
                      {"moment_value", o.moment_value},
                      {"matrix_size", o.matrix_size},
                      {"psd_blocks", o.block_sizes},
                      {"solver_status", to_string(o.status)},
                      {"rank", o.flatness.rank},
                      {"rank_previous", o.flatness.rank_previous},
                      {"flat", o.flatness.flat},
                      {"atoms", o.atoms},
                      {"extraction_ok", o.extraction_ok},
                      {"seconds", o.seconds}});
  }
  j["orders"] = orders;
  const auto& c = r.eigen.certificate;
  j["certificate"] = {{"status", r.certified ? "certified-global" : "not-certified"},
                      {"flat", c.flat},
                      {"rank", c.rank},
                      {"bound_gap", std::isfinite(c.bound_gap) ? json(c.bound_gap) : json(nullptr)},
                      {"oracle_gap", c.oracle_gap},
                      {"source", c.source},
                      {"extraction_flagged", c.extraction_flagged},
                      {"note", c.note}};
  j["separable"] = separable;
  j["overlap"] = overlap;
  j["seconds"] = {{"oracle", r.oracle_seconds}, {"sdp", r.sdp_seconds}, {"total", r.total_seconds}};
  j["notes"] = r.notes;
  return j;
}

/// Line-oriented key: value report followed by the JSON block.
inline std::string report_text(const PipelineResult& r, bool separable, double overlap) {
  std::ostringstream out;
  const double lam = r.eigen.lambda;
  out << "lambda_max: " << detail::g12(lam) << "\n";
  out << "G: " << detail::g12(lam) << "\n";
  out << "E_G: " << detail::g12(geometric_measure_from(lam)) << "\n";
  out << "route: " << to_string(r.route) << "\n";
  for (std::size_t k = 0; k < r.eigen.vectors.size(); ++k) {
    out << "z" << k + 1 << ":";
    const auto& v = r.eigen.vectors[k];
    for (Eigen::Index i = 0; i < v.size(); ++i) out << " " << detail::complex_text(v(i));
    out << "\n";
  }
  out << "residual: " << detail::g12(r.eigen.residual) << "\n";
  out << "upper_bound: " << (std::isfinite(r.upper_bound) ? detail::g12(r.upper_bound) : "none") << "\n";
  out << "oracle_value: " << (r.oracle_value ? detail::g12(*r.oracle_value) : "none") << "\n";
  for (const auto& o : r.orders)
    out << "rho_" << o.order << ": " << detail::g12(o.rho) << " (rank " << o.flatness.rank << "/"
        << o.flatness.rank_previous << ", " << to_string(o.status) << ")\n";
  out << "flatness_rank: " << r.eigen.certificate.rank << "\n";
  out << "certificate: " << (r.certified ? "certified-global" : "not-certified") << "\n";
  out << "separable: " << (separable ? "true" : "false") << "\n";
  out << "time_oracle: " << detail::g12(r.oracle_seconds) << "\n";
  out << "time_sdp: " << detail::g12(r.sdp_seconds) << "\n";
  out << "time_total: " << detail::g12(r.total_seconds) << "\n";
  out << "json: " << report_json(r, separable, overlap).dump() << "\n";
  return out.str();
}

}  // namespace ueig

#endif  // UEIG_IO_HPP
