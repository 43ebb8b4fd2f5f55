#pragma once

#include <string>
#include <vector>

#include "minmix/solver.hpp"

namespace minmix {

/// L2 norms; stress uses the Frobenius pairing (off-diagonal weight 2) and
/// tensor Gauss quadrature of degree g.
double stress_l2_norm(const StressField& field, int g = 3);
double displacement_l2_norm(const DisplacementField& field);

double field_l2_error(const StressField& a, const StressField& b, int g = 3);
double field_l2_error(const DisplacementField& a, const DisplacementField& b);
double div_l2_error(const StressField& a, const StressField& b);

/// ||u - u_h||_0 against the exact displacement (cellwise quadrature).
double displacement_error_exact(const DisplacementField& uh, const VectorFn& u, int g = 3);

struct ErrorRecord {
  int level = 0;
  double err_u = 0.0, err_sigma = 0.0, err_div = 0.0;
  // log2 ratio of consecutive errors; NaN on the first level
  double ord_u = 0.0, ord_sigma = 0.0, ord_div = 0.0;
};

struct StudyOptions {
  LoadRule load = LoadRule::CellCenter;
  NormalInterpMode interp = NormalInterpMode::FaceCenter;
  SolveOptions solve;
  int quad = 3;
};

struct StudyResult {
  std::string tag;
  std::vector<ErrorRecord> records;
  bool completed = false;
  std::string message;
};

/// Level ell runs on the uniform grid with 2^(ell-1) cells per axis.
StudyResult run_study(const std::string& tag, const std::vector<int>& levels, double lambda,
                      double mu, const StudyOptions& options = {});

std::string format_markdown(const StudyResult& study);
std::string format_csv(const StudyResult& study);

}  // namespace minmix
