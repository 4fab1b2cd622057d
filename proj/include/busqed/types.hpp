// Copyright 2026 The busqed Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <Eigen/Dense>

#include <complex>

namespace busqed {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

inline constexpr double kTwoPi = 6.283185307179586476925286766559;
inline constexpr Complex kI{0.0, 1.0};

// Lab-convention unit helpers. All internal frequencies are angular (rad/s),
// all internal times are seconds; conversion happens once, at call sites that
// face the user.
inline double ghz_to_rad(double f_ghz) { return f_ghz * (kTwoPi * 1e9); }
inline double mhz_to_rad(double f_mhz) { return f_mhz * (kTwoPi * 1e6); }
inline double rad_to_ghz(double w) { return w / (kTwoPi * 1e9); }
inline double rad_to_mhz(double w) { return w / (kTwoPi * 1e6); }
inline double ns_to_s(double t_ns) { return t_ns * 1e-9; }
inline double s_to_ns(double t_s) { return t_s * 1e9; }
// Decay is given as a lifetime 1/kappa in microseconds; 0 means lossless.
inline double inv_us_to_rate(double t_us) { return t_us == 0.0 ? 0.0 : 1.0 / (t_us * 1e-6); }
inline double rate_to_inv_us(double rate) { return rate == 0.0 ? 0.0 : 1e6 / rate; }

// max_ij |M - M^dagger|
inline double hermiticity_deviation(const CMatrix& m) {
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

}  // namespace busqed
