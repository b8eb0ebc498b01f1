// Pure states, entanglement eigenvalue and geometric measure.
//
// A state sum x_{i1...im} |i1-1 ... im-1> over the computational basis maps
// one-to-one to the amplitude tensor A_{i1...im} = x_{i1...im}.
#ifndef UEIG_QUANTUM_HPP
#define UEIG_QUANTUM_HPP

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "ueig/pipeline.hpp"
#include "ueig/tensor.hpp"

namespace ueig {

class StateError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Normalized pure state on n_1 x ... x n_m local dimensions. Kets are
/// zero-based; amplitudes are stored in row-major order.
class PureState {
 public:
  static constexpr double kNormTol = 1e-10;

  PureState(std::vector<std::size_t> dims, std::vector<cplx> amplitudes, bool normalize = false)
      : dims_(std::move(dims)), amps_(std::move(amplitudes)) {
    if (dims_.empty()) throw DimensionError("state needs at least one subsystem");
    for (std::size_t n : dims_)
      if (n == 0) throw DimensionError("subsystem dimension must be positive");
    if (amps_.size() != detail::product(dims_)) throw DimensionError("amplitude count does not match dims");
    double s = 0.0;
    for (const auto& x : amps_) s += std::norm(x);
    const double nrm = std::sqrt(s);
    if (normalize) {
      if (!(nrm > 0.0)) throw StateError("zero state cannot be normalized");
      for (auto& x : amps_) x /= nrm;
    } else if (std::abs(nrm - 1.0) > kNormTol) {
      throw StateError("state is not normalized");
    }
  }

  const std::vector<std::size_t>& dims() const { return dims_; }
  const std::vector<cplx>& amplitudes() const { return amps_; }

 private:
  std::vector<std::size_t> dims_;
  std::vector<cplx> amps_;
};

/// Amplitude tensor with the largest symmetry its entries admit.
inline ComplexTensor state_to_tensor(const PureState& s) {
  return ComplexTensor::with_detected_symmetry(s.dims(), s.amplitudes());
}

struct GeometricMeasure {
  double G = 0.0;     ///< entanglement eigenvalue
  double E_G = 0.0;   ///< sqrt(2 - 2 G)
  RankOneTuple nearest;  ///< factors of the nearest separable state
  double overlap = 0.0;  ///< |<psi|phi>|
  bool separable = false;
  PipelineResult pipeline;
};

/// True iff lambda_max >= 1 - 1e-6 and ||A - x z^(k)||_F <= 1e-5.
inline bool separability_check(const ComplexTensor& a, const EigenpairResult& r) {
  if (r.lambda < 1.0 - 1e-6) return false;
  const ComplexTensor p = outer_product(r.vectors);
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d += std::norm(a[i] - p[i]);
  return std::sqrt(d) <= 1e-5;
}

inline double geometric_measure_from(double g) { return std::sqrt(std::max(0.0, 2.0 - 2.0 * g)); }

inline GeometricMeasure geometric_measure(const PureState& s, const PipelineConfig& cfg = {}) {
  GeometricMeasure out;
  const ComplexTensor a = state_to_tensor(s);
  out.pipeline = largest_u_eigenvalue(a, cfg);
  out.G = out.pipeline.eigen.lambda;
  out.E_G = geometric_measure_from(out.G);
  out.nearest = out.pipeline.eigen.vectors;
  out.overlap = std::abs(inner_product(a, outer_product(out.nearest)));
  out.separable = separability_check(a, out.pipeline.eigen);
  return out;
}

/// ||<S, x^(m-1)> - lambda conj(x)|| for a symmetric tensor and one vector.
inline double us_residual(const ComplexTensor& s, double lambda, const CVector& x) {
  RankOneTuple t;
  t.vectors.assign(s.order(), x);
  return (contract_all_but(s, t, s.order() - 1) - lambda * x.conjugate()).norm();
}

/// ||S x^(m-1) - lambda x|| for a real symmetric tensor and a real vector.
inline double z_residual(const ComplexTensor& s, double lambda, const Eigen::VectorXd& x) {
  for (std::size_t i = 0; i < s.size(); ++i)
    if (s[i].imag() != 0.0) throw std::invalid_argument("z_residual: tensor has complex entries");
  RankOneTuple t;
  t.vectors.assign(s.order(), x.cast<cplx>());
  return (contract_all_but(s, t, s.order() - 1).real() - lambda * x).norm();
}

}  // namespace ueig

#endif  // UEIG_QUANTUM_HPP
