#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "rdcscreen/distance.hpp"
#include "rdcscreen/error.hpp"

namespace rdcscreen {

/// n x p predictors plus an n x q response block.
///
/// Predictors are stored column-major so each feature is a contiguous
/// scalar sample; the response is row-major so a multivariate response is
/// a contiguous SampleView of dimension q.
struct DataMatrix {
    std::size_t n = 0;
    std::size_t p = 0;
    std::size_t q = 0;
    std::vector<double> predictors;
    std::vector<double> response;
    std::vector<std::string> predictor_names;
    std::vector<std::string> response_names;

    DataMatrix() = default;
    DataMatrix(std::size_t samples, std::size_t features, std::size_t responses)
        : n(samples), p(features), q(responses), predictors(samples * features), response(samples * responses)
    {
        for (std::size_t j = 0; j < p; ++j) {
            predictor_names.push_back("X" + std::to_string(j + 1));
        }
        if (q == 1) {
            response_names.emplace_back("Y");
        } else {
            for (std::size_t k = 0; k < q; ++k) {
                response_names.push_back("Y" + std::to_string(k + 1));
            }
        }
    }

    [[nodiscard]] double& x(std::size_t i, std::size_t j) { return predictors[j * n + i]; }
    [[nodiscard]] double x(std::size_t i, std::size_t j) const { return predictors[j * n + i]; }
    [[nodiscard]] double& y(std::size_t i, std::size_t k) { return response[i * q + k]; }
    [[nodiscard]] double y(std::size_t i, std::size_t k) const { return response[i * q + k]; }

    [[nodiscard]] std::span<double> column(std::size_t j) { return {predictors.data() + j * n, n}; }
    [[nodiscard]] std::span<const double> column(std::size_t j) const { return {predictors.data() + j * n, n}; }

    [[nodiscard]] SampleView feature(std::size_t j) const { return {column(j), n, 1}; }
    [[nodiscard]] SampleView response_view() const { return {response, n, q}; }

    void validate() const
    {
        if (predictors.size() != n * p || response.size() != n * q) {
            throw SizeError("data matrix buffers do not match n = " + std::to_string(n) + ", p = "
                            + std::to_string(p) + ", q = " + std::to_string(q));
        }
        if (predictor_names.size() != p || response_names.size() != q) {
            throw SizeError("column names do not match the matrix shape");
        }
    }
};

} // namespace rdcscreen
