#include "minmix/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace minmix {

void write_file_atomic(const std::string& path, const std::string& contents) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  const fs::path tmp = target.parent_path() / (target.filename().string() + ".tmp");
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot open " + tmp.string());
    os << contents;
    if (!os.flush()) throw std::runtime_error("write failed: " + tmp.string());
  }
  fs::rename(tmp, target);
}

std::string to_matrix_market(const Eigen::SparseMatrix<double>& A) {
  std::ostringstream os;
  os << "%%MatrixMarket matrix coordinate real general\n";
  os << A.rows() << ' ' << A.cols() << ' ' << A.nonZeros() << '\n';
  os.precision(17);
  for (int k = 0; k < A.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(A, k); it; ++it)
      os << it.row() + 1 << ' ' << it.col() + 1 << ' ' << it.value() << '\n';
  return os.str();
}

std::string to_vtk(const StressField& sigma, const DisplacementField& u) {
  const TensorGrid& grid = sigma.layout->grid();
  const int n = grid.dim();
  if (n != 2 && n != 3) throw std::invalid_argument("to_vtk: dim must be 2 or 3");
  std::ostringstream os;
  os.precision(10);
  os << "# vtk DataFile Version 3.0\n";
  os << "stress and displacement cell data\n";
  os << "ASCII\n";
  os << "DATASET STRUCTURED_POINTS\n";
  os << "DIMENSIONS " << grid.cells(0) + 1 << ' ' << grid.cells(1) + 1 << ' '
     << (n == 3 ? grid.cells(2) + 1 : 1) << '\n';
  os << "ORIGIN 0 0 0\n";
  os << "SPACING " << grid.spacing(0) << ' ' << grid.spacing(1) << ' '
     << (n == 3 ? grid.spacing(2) : 1.0) << '\n';
  os << "CELL_DATA " << grid.cell_count() << '\n';

  // legacy structured points iterate x fastest; cell_index is last-axis fastest
  std::vector<long> order(static_cast<size_t>(grid.cell_count()));
  {
    long k = 0;
    std::vector<int> t(static_cast<size_t>(n), 0);
    const auto advance = [&]() {
      for (int a = 0; a < n; ++a) {
        if (++t[static_cast<size_t>(a)] < grid.cells(a)) return true;
        t[static_cast<size_t>(a)] = 0;
      }
      return false;
    };
    do {
      order[static_cast<size_t>(k++)] = grid.cell_index(t);
    } while (advance());
  }

  std::vector<double> ref(static_cast<size_t>(n), 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      os << "SCALARS sigma_" << i + 1 << j + 1 << " double 1\n";
      os << "LOOKUP_TABLE default\n";
      for (long c : order) os << evaluate_stress(sigma, c, ref)(i, j) << '\n';
    }
  os << "VECTORS u double\n";
  for (long c : order) {
    for (int d = 0; d < n; ++d) os << u.values(u.layout->displacement_dof(c, d)) << ' ';
    if (n == 2) os << 0.0;
    os << '\n';
  }
  return os.str();
}

}  // namespace minmix
