#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace beltrami {

using Complex = std::complex<double>;
using Point = std::vector<double>;

// Evaluating a function at a singular argument (log 0, tan at a pole,
// division by zero, ...) or stepping outside a chart domain.
class DomainError : public std::runtime_error {
public:
    explicit DomainError(const std::string& msg) : std::runtime_error(msg) {}
};

// Chart construction failures: bad schema, unsupported builtin, rank
// deficiency of the embedding.
class ChartError : public std::runtime_error {
public:
    explicit ChartError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace beltrami
