#pragma once

#include <string>

#include "minmix/fem_spaces.hpp"

#include <Eigen/Sparse>

namespace minmix {

/// Write via a temp file in the same directory, then rename.
void write_file_atomic(const std::string& path, const std::string& contents);

std::string to_matrix_market(const Eigen::SparseMatrix<double>& A);

/// Legacy-VTK structured grid with sigma components and u as cell data.
std::string to_vtk(const StressField& sigma, const DisplacementField& u);

}  // namespace minmix
