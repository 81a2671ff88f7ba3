// Copyright 2026 The clh-kit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <random>
#include <string>

#include "clh/tensor_core.hpp"

namespace clh {

inline Mat pauli(char c) {
    Mat m = Mat::Zero(2, 2);
    switch (c) {
        case 'I': m << 1, 0, 0, 1; break;
        case 'X': m << 0, 1, 1, 0; break;
        case 'Y': m << 0, cplx(0, -1), cplx(0, 1), 0; break;
        case 'Z': m << 1, 0, 0, -1; break;
        default: throw std::invalid_argument(std::string("pauli: unknown letter ") + c);
    }
    return m;
}

inline Mat pauli_string(const std::string& s) {
    Mat m = Mat::Identity(1, 1);
    for (char c : s) m = kron(m, pauli(c));
    return m;
}

inline Vec ket(int d, int i) {
    Vec v = Vec::Zero(d);
    v(i) = 1.0;
    return v;
}

inline Mat projector_of(const Vec& v) {
    Vec u = v / v.norm();
    return u * u.adjoint();
}

// (I - P) / 2 for a Pauli operator P: the projector onto its -1 eigenspace.
inline Mat minus_projector(const Mat& P) {
    return (Mat::Identity(P.rows(), P.cols()) - P) / 2.0;
}

// Haar-distributed unitary: QR of a complex Gaussian with the phase fix.
inline Mat random_unitary(int d, std::mt19937_64& rng) {
    std::normal_distribution<double> nd;
    Mat g(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) g(i, j) = cplx(nd(rng), nd(rng));
    Eigen::HouseholderQR<Mat> qr(g);
    Mat q = qr.householderQ();
    Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int i = 0; i < d; ++i) {
        cplx ph = r(i, i) / std::abs(r(i, i));
        q.col(i) *= ph;
    }
    return q;
}

}  // namespace clh
