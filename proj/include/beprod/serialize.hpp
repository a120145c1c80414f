#pragma once

#include <map>
#include <optional>
#include <string>

#include "beprod/circuit.hpp"

namespace beprod {

/// Parse failure with 1-based line/column of the offending input.
struct ParseError : std::runtime_error {
    int line = 0;
    int column = 0;
    ParseError(const std::string& what, int line_, int col_);
};

using MatrixTable = std::map<std::string, ComplexMatrix>;

/// Circuit JSON. Oracle matrices are inlined unless their label appears in
/// `externalize`, in which case only the label is written and the matrix is
/// added to `sidecar`.
std::string serialize(const Circuit& c);
std::string serialize(const Circuit& c, const std::vector<std::string>& externalize,
                      MatrixTable& sidecar);

/// Inverse of serialize. Label-only oracles are resolved from `sidecar`.
Circuit deserialize(const std::string& text, const MatrixTable& sidecar = {});

Circuit load_circuit_file(const std::string& path, const MatrixTable& sidecar = {});
void save_circuit_file(const Circuit& c, const std::string& path);

/// Sidecar table JSON: an object mapping labels to matrix objects.
std::string sidecar_to_json(const MatrixTable& table);
MatrixTable sidecar_from_json(const std::string& text);
MatrixTable load_sidecar_file(const std::string& path);

/// Line-oriented gate listing. Oracle gates are emitted as opaque named
/// gates; `warnings` (if given) collects one note per opaque gate.
std::string export_text(const Circuit& c, std::vector<std::string>* warnings = nullptr);

/// Parses the text format back. Opaque oracle gates are resolved from
/// `sidecar` by label.
Circuit import_text(const std::string& text, const MatrixTable& sidecar = {});

}  // namespace beprod
