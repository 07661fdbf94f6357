// Dense matrix exponential by scaling and squaring with diagonal Pade
// approximants (orders 3, 5, 7, 9, 13; Higham's theta thresholds for
// double precision). Works for any Eigen dense square matrix, real or
// complex.
#ifndef CTQW_EXPM_HPP
#define CTQW_EXPM_HPP

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

namespace ctqw {

namespace detail {

template <typename Matrix>
double one_norm(const Matrix& a) {
  return a.cwiseAbs().colwise().sum().maxCoeff();
}

// U (odd part) and V (even part) of the degree-m Pade approximant,
// exp(A) ~ (V - U)^{-1} (V + U).
template <typename Matrix>
void pade_low(const Matrix& a, const double* b, int m, Matrix& u, Matrix& v) {
  const Eigen::Index n = a.rows();
  const Matrix ident = Matrix::Identity(n, n);
  const Matrix a2 = a * a;
  Matrix power = ident;
  Matrix odd = b[1] * ident;
  Matrix even = b[0] * ident;
  for (int k = 2; k <= m; k += 2) {
    power = power * a2;
    odd += b[k + 1] * power;
    even += b[k] * power;
  }
  u.noalias() = a * odd;
  v = even;
}

template <typename Matrix>
void pade13(const Matrix& a, Matrix& u, Matrix& v) {
  static constexpr double b[] = {64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
                                 1187353796428800.0,  129060195264000.0,   10559470521600.0,
                                 670442572800.0,      33522128640.0,       1323241920.0,
                                 40840800.0,          960960.0,            16380.0,
                                 182.0,               1.0};
  const Eigen::Index n = a.rows();
  const Matrix ident = Matrix::Identity(n, n);
  const Matrix a2 = a * a;
  const Matrix a4 = a2 * a2;
  const Matrix a6 = a4 * a2;
  Matrix tmp = b[13] * a6 + b[11] * a4 + b[9] * a2;
  Matrix inner = a6 * tmp;
  inner += b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * ident;
  u.noalias() = a * inner;
  tmp = b[12] * a6 + b[10] * a4 + b[8] * a2;
  v = a6 * tmp;
  v += b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * ident;
}

}  // namespace detail

template <typename Derived>
typename Derived::PlainObject expm(const Eigen::MatrixBase<Derived>& input) {
  using Matrix = typename Derived::PlainObject;
  if (input.rows() != input.cols()) throw std::invalid_argument("expm: matrix must be square");
  const Matrix a = input;
  const double norm = detail::one_norm(a);
  if (!std::isfinite(norm)) throw std::domain_error("expm: non-finite matrix entries");

  static constexpr double b3[] = {120.0, 60.0, 12.0, 1.0};
  static constexpr double b5[] = {30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0};
  static constexpr double b7[] = {17297280.0, 8648640.0, 1995840.0, 277200.0,
                                  25200.0,    1512.0,    56.0,      1.0};
  static constexpr double b9[] = {17643225600.0, 8821612800.0, 2075673600.0, 302702400.0,
                                  30270240.0,    2162160.0,    110880.0,     3960.0,
                                  90.0,          1.0};

  Matrix u, v;
  int squarings = 0;
  if (norm <= 1.495585217958292e-2) {
    detail::pade_low(a, b3, 3, u, v);
  } else if (norm <= 2.539398330063230e-1) {
    detail::pade_low(a, b5, 5, u, v);
  } else if (norm <= 9.504178996162932e-1) {
    detail::pade_low(a, b7, 7, u, v);
  } else if (norm <= 2.097847961257068) {
    detail::pade_low(a, b9, 9, u, v);
  } else {
    constexpr double theta13 = 5.371920351148152;
    squarings = std::max(0, static_cast<int>(std::ceil(std::log2(norm / theta13))));
    const Matrix scaled = a / std::ldexp(1.0, squarings);
    detail::pade13(scaled, u, v);
  }
  Matrix result = (v - u).partialPivLu().solve(v + u);
  for (int s = 0; s < squarings; ++s) result = result * result;
  return result;
}

}  // namespace ctqw

#endif  // CTQW_EXPM_HPP
