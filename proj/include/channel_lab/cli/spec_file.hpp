#pragma once

// Channel specification documents (JSON).
//
//   { "named": { "family": "pauli", "params": { "p": [0.7, 0.1, 0.1, 0.1] } },
//     "subspace": [ [[1,0],[0,0]] ],
//     "seed": 7, "samples": 10000 }
//
//   { "raw": { "dim": 2, "kraus": [ [[[1,0],[0,0]], [[0,0],[1,0]]] ] } }
//
// Complex entries are [re, im] pairs; a bare number is read as a real entry.
// Matrices are lists of rows. Exactly one of "named" / "raw" must appear.

#include <nlohmann/json.hpp>

#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "channel_lab/channel.hpp"
#include "channel_lab/error.hpp"
#include "channel_lab/tensor.hpp"

namespace channel_lab::cli {

using nlohmann::json;

struct RawChannel {
  std::size_t dim = 0;
  std::vector<ComplexMatrix> kraus;
};

struct ChannelSpecFile {
  json document;  // the parsed input, echoed into reports
  std::string family;  // empty for raw channels
  std::optional<ChannelDescriptor> named;
  std::optional<RawChannel> raw;
  std::optional<std::vector<ComplexVector>> subspace;
  std::optional<std::vector<ComplexVector>> code;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> samples;
};

namespace detail {

[[noreturn]] inline void field_error(const std::string& path, const std::string& what) {
  throw ParseError("field '" + path + "': " + what);
}

inline const json& require(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object() || !obj.contains(key)) field_error(path + key, "missing");
  return obj.at(key);
}

inline double read_real(const json& j, const std::string& path) {
  if (!j.is_number()) field_error(path, "expected a number");
  return j.get<double>();
}

inline Complex read_complex(const json& j, const std::string& path) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  field_error(path, "expected [re, im] or a number");
}

inline ComplexVector read_vector(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) field_error(path, "expected a non-empty list of entries");
  ComplexVector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    v(static_cast<Eigen::Index>(i)) = read_complex(j[i], path + "[" + std::to_string(i) + "]");
  }
  return v;
}

inline ComplexMatrix read_matrix(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) field_error(path, "expected a non-empty list of rows");
  const std::size_t rows = j.size();
  std::size_t cols = 0;
  ComplexMatrix m;
  for (std::size_t r = 0; r < rows; ++r) {
    const std::string row_path = path + "[" + std::to_string(r) + "]";
    const ComplexVector row = read_vector(j[r], row_path);
    if (r == 0) {
      cols = static_cast<std::size_t>(row.size());
      m.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    } else if (static_cast<std::size_t>(row.size()) != cols) {
      field_error(row_path, "row has " + std::to_string(row.size()) + " entries, expected " +
                                std::to_string(cols));
    }
    m.row(static_cast<Eigen::Index>(r)) = row.transpose();
  }
  return m;
}

inline std::vector<ComplexMatrix> read_matrix_list(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) field_error(path, "expected a non-empty list of matrices");
  std::vector<ComplexMatrix> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(read_matrix(j[i], path + "[" + std::to_string(i) + "]"));
  }
  return out;
}

inline std::vector<ComplexVector> read_vector_list(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) field_error(path, "expected a non-empty list of vectors");
  std::vector<ComplexVector> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(read_vector(j[i], path + "[" + std::to_string(i) + "]"));
  }
  return out;
}

inline std::array<double, 4> read_four(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 4) field_error(path, "expected a list of 4 probabilities");
  std::array<double, 4> out{};
  for (std::size_t i = 0; i < 4; ++i) out[i] = read_real(j[i], path + "[" + std::to_string(i) + "]");
  return out;
}

inline std::vector<double> read_reals(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) field_error(path, "expected a non-empty list of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(read_real(j[i], path + "[" + std::to_string(i) + "]"));
  }
  return out;
}

inline std::uint64_t read_count(const json& j, const std::string& path) {
  if (!j.is_number_integer() || j.get<std::int64_t>() < 0) {
    field_error(path, "expected a non-negative integer");
  }
  return j.get<std::uint64_t>();
}

inline ChannelDescriptor read_named(const json& named, std::string& family) {
  const json& fam = require(named, "family", "named.");
  if (!fam.is_string()) field_error("named.family", "expected a string");
  family = fam.get<std::string>();
  const json& params = require(named, "params", "named.");
  const std::string p = "named.params.";
  if (family == "pauli") return PauliParams{read_four(require(params, "p", p), p + "p")};
  if (family == "depolarizing") {
    return DepolarizingParams{read_real(require(params, "p0", p), p + "p0")};
  }
  if (family == "correlated_pauli2") {
    return CorrelatedPauli2Params{read_four(require(params, "p", p), p + "p")};
  }
  if (family == "partial_replacement") {
    const auto d = read_count(require(params, "dim", p), p + "dim");
    return PartialReplacementParams{static_cast<std::size_t>(d),
                                    read_real(require(params, "p", p), p + "p")};
  }
  if (family == "projective") {
    return ProjectiveParams{read_matrix_list(require(params, "projectors", p), p + "projectors")};
  }
  if (family == "unitary_mixture") {
    UnitaryMixtureParams mix;
    mix.probabilities = read_reals(require(params, "probabilities", p), p + "probabilities");
    if (params.contains("pauli_strings")) {
      const json& words = params.at("pauli_strings");
      if (!words.is_array()) field_error(p + "pauli_strings", "expected a list of strings");
      for (std::size_t i = 0; i < words.size(); ++i) {
        if (!words[i].is_string()) {
          field_error(p + "pauli_strings[" + std::to_string(i) + "]", "expected a string");
        }
        mix.unitaries.push_back(pauli_string(words[i].get<std::string>()));
      }
    } else {
      mix.unitaries = read_matrix_list(require(params, "unitaries", p), p + "unitaries");
    }
    return mix;
  }
  field_error("named.family", "unknown family '" + family + "'");
}

inline RawChannel read_raw(const json& raw) {
  RawChannel out;
  out.dim = static_cast<std::size_t>(read_count(require(raw, "dim", "raw."), "raw.dim"));
  if (out.dim == 0) field_error("raw.dim", "must be positive");
  out.kraus = read_matrix_list(require(raw, "kraus", "raw."), "raw.kraus");
  for (std::size_t i = 0; i < out.kraus.size(); ++i) {
    const auto& a = out.kraus[i];
    if (static_cast<std::size_t>(a.rows()) != out.dim ||
        static_cast<std::size_t>(a.cols()) != out.dim) {
      field_error("raw.kraus[" + std::to_string(i) + "]",
                  "matrix is " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                      ", expected " + std::to_string(out.dim) + "x" + std::to_string(out.dim));
    }
  }
  return out;
}

// 1-based line and column of a byte offset.
inline std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

}  // namespace detail

inline ChannelSpecFile parse_channel_spec(std::string_view text) {
  ChannelSpecFile spec;
  try {
    spec.document = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, col] = detail::line_column(text, e.byte > 0 ? e.byte - 1 : 0);
    // Drop nlohmann's own "[json.exception...] parse error at ...: " prefix.
    std::string detail = e.what();
    if (const auto pos = detail.find(": ", detail.find("column")); pos != std::string::npos) {
      detail = detail.substr(pos + 2);
    }
    throw ParseError("syntax error at line " + std::to_string(line) + ", column " +
                     std::to_string(col) + ": " + detail);
  }
  const json& doc = spec.document;
  if (!doc.is_object()) throw ParseError("spec document must be an object");

  const bool has_named = doc.contains("named");
  const bool has_raw = doc.contains("raw");
  if (has_named == has_raw) {
    throw ParseError("spec must contain exactly one of 'named' or 'raw'");
  }
  if (has_named) {
    spec.named = detail::read_named(doc.at("named"), spec.family);
  } else {
    spec.raw = detail::read_raw(doc.at("raw"));
  }
  if (doc.contains("subspace")) spec.subspace = detail::read_vector_list(doc.at("subspace"), "subspace");
  if (doc.contains("code")) spec.code = detail::read_vector_list(doc.at("code"), "code");
  if (doc.contains("seed")) spec.seed = detail::read_count(doc.at("seed"), "seed");
  if (doc.contains("samples")) {
    spec.samples = static_cast<std::size_t>(detail::read_count(doc.at("samples"), "samples"));
  }
  return spec;
}

inline ChannelSpecFile load_channel_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open spec file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_channel_spec(buffer.str());
}

inline KrausChannel build_channel(const ChannelSpecFile& spec) {
  if (spec.named) return build_named_channel(*spec.named);
  return KrausChannel(spec.raw->kraus, "raw(" + std::to_string(spec.raw->dim) + ")");
}

namespace detail {

inline void check_vector_lengths(const std::vector<ComplexVector>& vs, std::size_t dim,
                                 const std::string& field) {
  for (std::size_t i = 0; i < vs.size(); ++i) {
    if (static_cast<std::size_t>(vs[i].size()) != dim) {
      field_error(field + "[" + std::to_string(i) + "]",
                  "vector has length " + std::to_string(vs[i].size()) + ", channel dimension is " +
                      std::to_string(dim));
    }
  }
}

}  // namespace detail

/// The spec's subspace (span of the listed vectors), or the whole space.
inline SubspaceBasis subspace_of(const ChannelSpecFile& spec, std::size_t dim) {
  if (!spec.subspace) return SubspaceBasis::full(dim);
  detail::check_vector_lengths(*spec.subspace, dim, "subspace");
  auto basis = SubspaceBasis::span_of(dim, *spec.subspace);
  if (basis.empty()) detail::field_error("subspace", "vectors span the zero subspace");
  return basis;
}

/// Codewords in the listed order; each is normalized, and the set must be
/// orthonormal up to rounding.
inline SubspaceBasis code_of(const ChannelSpecFile& spec, std::size_t dim) {
  if (!spec.code) throw ParseError("field 'code': required for this command");
  detail::check_vector_lengths(*spec.code, dim, "code");
  std::vector<ComplexVector> words;
  for (const auto& v : *spec.code) {
    const double norm = v.norm();
    if (!(norm > 0.0)) detail::field_error("code", "zero codeword");
    words.push_back(v / norm);
  }
  return SubspaceBasis::from_orthonormal(dim, words);
}

}  // namespace channel_lab::cli
