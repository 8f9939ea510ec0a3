// Copyright 2026 The neelmqc Authors
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

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "errors.hpp"
#include "spinops.hpp"

namespace neelmqc {

// Row-major square matrix of doubles.
class DenseMatrix {
public:
    DenseMatrix() = default;
    explicit DenseMatrix(std::size_t n) : n_(n), data_(n * n, 0.0) {}

    static DenseMatrix identity(std::size_t n) {
        DenseMatrix m(n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    std::size_t size() const { return n_; }

    double& operator()(std::size_t r, std::size_t c) { return data_[r * n_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * n_ + c]; }

    std::span<double> row(std::size_t r) { return {data_.data() + r * n_, n_}; }
    std::span<const double> row(std::size_t r) const { return {data_.data() + r * n_, n_}; }

    double max_abs() const {
        double m = 0.0;
        for (double v : data_) m = std::max(m, std::abs(v));
        return m;
    }

    double frobenius_norm() const {
        double acc = 0.0;
        for (double v : data_) acc += v * v;
        return std::sqrt(acc);
    }

    // max |A - A^T|
    double asymmetry() const {
        double m = 0.0;
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = i + 1; j < n_; ++j)
                m = std::max(m, std::abs((*this)(i, j) - (*this)(j, i)));
        return m;
    }

    StateVector apply(std::span<const Amplitude> s) const {
        StateVector out(n_, Amplitude{0.0, 0.0});
        for (std::size_t i = 0; i < n_; ++i) {
            Amplitude acc{0.0, 0.0};
            const double* r = data_.data() + i * n_;
            for (std::size_t j = 0; j < n_; ++j) acc += r[j] * s[j];
            out[i] = acc;
        }
        return out;
    }

    friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

private:
    std::size_t n_ = 0;
    std::vector<double> data_;
};

// Compressed-row real matrix; used on the hot path of trajectory stepping.
class SparseMatrix {
public:
    SparseMatrix() = default;

    static SparseMatrix from_dense(const DenseMatrix& m) {
        SparseMatrix s;
        s.n_ = m.size();
        s.row_start_.reserve(s.n_ + 1);
        s.row_start_.push_back(0);
        for (std::size_t i = 0; i < s.n_; ++i) {
            for (std::size_t j = 0; j < s.n_; ++j) {
                if (m(i, j) != 0.0) {
                    s.cols_.push_back(j);
                    s.values_.push_back(m(i, j));
                }
            }
            s.row_start_.push_back(s.cols_.size());
        }
        return s;
    }

    std::size_t size() const { return n_; }
    std::size_t nonzeros() const { return values_.size(); }

    // out = A s
    void apply(std::span<const Amplitude> s, std::span<Amplitude> out) const {
        for (std::size_t i = 0; i < n_; ++i) {
            Amplitude acc{0.0, 0.0};
            for (std::size_t p = row_start_[i]; p < row_start_[i + 1]; ++p)
                acc += values_[p] * s[cols_[p]];
            out[i] = acc;
        }
    }

    StateVector apply(std::span<const Amplitude> s) const {
        StateVector out(n_);
        apply(s, std::span<Amplitude>(out));
        return out;
    }

private:
    std::size_t n_ = 0;
    std::vector<std::size_t> row_start_;
    std::vector<std::size_t> cols_;
    std::vector<double> values_;
};

}  // namespace neelmqc
