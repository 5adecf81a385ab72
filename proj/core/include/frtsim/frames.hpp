#pragma once

#include <cmath>
#include <complex>
#include <numbers>

namespace frtsim {

/// Two-axis quantity in the rotating dq frame.
struct Vec2 {
  double d{0.0};
  double q{0.0};

  constexpr Vec2& operator+=(const Vec2& o) { d += o.d; q += o.q; return *this; }
  constexpr Vec2& operator-=(const Vec2& o) { d -= o.d; q -= o.q; return *this; }
  constexpr Vec2& operator*=(double s) { d *= s; q *= s; return *this; }

  friend constexpr Vec2 operator+(Vec2 a, const Vec2& b) { return a += b; }
  friend constexpr Vec2 operator-(Vec2 a, const Vec2& b) { return a -= b; }
  friend constexpr Vec2 operator-(const Vec2& a) { return {-a.d, -a.q}; }
  friend constexpr Vec2 operator*(Vec2 a, double s) { return a *= s; }
  friend constexpr Vec2 operator*(double s, Vec2 a) { return a *= s; }
  friend constexpr Vec2 operator/(const Vec2& a, double s) { return {a.d / s, a.q / s}; }
  friend constexpr bool operator==(const Vec2&, const Vec2&) = default;

  double norm() const { return std::hypot(d, q); }
  bool finite() const { return std::isfinite(d) && std::isfinite(q); }
};

constexpr double dot(const Vec2& a, const Vec2& b) { return a.d * b.d + a.q * b.q; }

/// Complex view used by the phasor network: z = d + j q.
inline std::complex<double> to_complex(const Vec2& v) { return {v.d, v.q}; }
inline Vec2 from_complex(std::complex<double> z) { return {z.real(), z.imag()}; }

/// Electrical angle in radians. Construction rejects non-finite values;
/// wrapping to [0, 2pi) is explicit.
class Angle {
public:
  constexpr Angle() = default;
  explicit Angle(double radians);

  double radians() const { return rad_; }
  Angle wrapped() const;

private:
  double rad_{0.0};
};

/// Wraps to [0, 2pi). Idempotent.
double wrap_angle(double radians);

struct ThreePhase {
  double a{0.0};
  double b{0.0};
  double c{0.0};
};

struct DqZero {
  double d{0.0};
  double q{0.0};
  double zero{0.0};

  Vec2 dq() const { return {d, q}; }
};

/// The constant skew matrix J = [[0, 1], [-1, 0]].
struct SkewJ {
  static constexpr Vec2 apply(const Vec2& v) { return {v.q, -v.d}; }
  /// v^T J w
  static constexpr double bilinear(const Vec2& v, const Vec2& w) { return v.d * w.q - v.q * w.d; }
};

/// Power-invariant Park transform T(theta) x, with sine on the d row.
DqZero park(Angle theta, const ThreePhase& x);

/// T(theta)^T x. Exact inverse of park because T is orthogonal.
ThreePhase inverse_park(Angle theta, const DqZero& x);

/// omega * J * v
Vec2 rotate_dq(double omega, const Vec2& v);

/// Samples of the symmetric signal amplitude * (sin th, sin(th - 2pi/3), sin(th + 2pi/3)).
ThreePhase symmetric_three_phase(double amplitude, double theta);

}  // namespace frtsim
