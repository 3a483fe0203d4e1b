#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace ncvx {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Every recoverable failure in the library surfaces as ncvx::Error.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

inline constexpr const char* kVersion = "0.3.0";

}  // namespace ncvx
