#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace surfstokes {

using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;
using Mat3 = Eigen::Matrix3d;
using VecX = Eigen::VectorXd;
using MatX = Eigen::MatrixXd;
using SpMat = Eigen::SparseMatrix<double>;
using Index = std::int64_t;

// Execution policy for the data-parallel kernels. Serial is the reference
// path kept for testing; both must produce bit-identical results.
enum class Exec { Serial, Parallel };

inline int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

inline void set_threads(int n) {
#ifdef _OPENMP
  if (n > 0) omp_set_num_threads(n);
#else
  (void)n;
#endif
}

// Parallel loop over [0, n). Results must be written to index-addressed
// slots; no cross-iteration reductions, so thread count never changes output.
template <class F>
inline void parallel_for(Index n, F&& f, Exec exec = Exec::Parallel) {
  if (exec == Exec::Serial) {
    for (Index i = 0; i < n; ++i) f(i);
    return;
  }
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
  for (Index i = 0; i < n; ++i) f(i);
#else
  for (Index i = 0; i < n; ++i) f(i);
#endif
}

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw std::runtime_error(msg);
}

}  // namespace surfstokes
