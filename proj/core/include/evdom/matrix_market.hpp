#pragma once

#include <string>

#include "evdom/operators.hpp"

namespace evdom {

/// Writes a dense matrix in Matrix Market array format
/// ("%%MatrixMarket matrix array real general", column-major values).
void write_matrix_market(const std::string& path, const Eigen::MatrixXd& m);
Eigen::MatrixXd read_matrix_market(const std::string& path);

/// Writes <path> in Matrix Market array format plus a sidecar JSON metadata
/// file <path>.json with {name, bc, interval, n, weights}.
void export_operator(const OperatorHandle& op, const std::string& path);

/// Reads a matrix and its sidecar back into a handle. The grid scheme is
/// inferred from the recorded boundary-condition tag.
OperatorHandle import_operator(const std::string& path);

}  // namespace evdom
