#include <cmath>
#include <stdexcept>

#include "cbeta/opuc.hpp"

namespace cbeta {
namespace {

// Places Theta_j = [[conj(a), rho], [rho, -a]] at (j, j), clipped to the matrix.
void place_theta(Eigen::MatrixXcd& m, std::size_t j, Complex a)
{
    auto const n = static_cast<std::size_t>(m.rows());
    double const r = std::abs(a);
    double const rho = std::sqrt(std::max(0.0, (1.0 - r) * (1.0 + r)));
    auto const i = static_cast<Eigen::Index>(j);
    m(i, i) = std::conj(a);
    if (j + 1 < n)
    {
        m(i, i + 1) = rho;
        m(i + 1, i) = rho;
        m(i + 1, i + 1) = -a;
    }
}

}  // namespace

double CmvMatrix::unitarity_error() const
{
    Eigen::MatrixXcd const g = entries.adjoint() * entries - Eigen::MatrixXcd::Identity(entries.rows(), entries.cols());
    return g.cwiseAbs().maxCoeff();
}

std::size_t CmvMatrix::bandwidth() const
{
    std::size_t width = 0;
    for (Eigen::Index i = 0; i < entries.rows(); ++i)
    {
        for (Eigen::Index j = 0; j < entries.cols(); ++j)
        {
            if (entries(i, j) != Complex{})
                width = std::max<std::size_t>(width, static_cast<std::size_t>(std::abs(i - j)));
        }
    }
    return width;
}

CmvMatrix build_cmv(std::span<Complex const> coeffs)
{
    if (coeffs.empty())
        throw std::invalid_argument("build_cmv: need at least the terminal coefficient");
    std::size_t const n = coeffs.size();
    for (std::size_t k = 0; k + 1 < n; ++k)
    {
        if (!(std::norm(coeffs[k]) < 1.0))
            throw std::invalid_argument("build_cmv: interior coefficients must lie in the open unit disk");
    }
    if (std::abs(std::abs(coeffs[n - 1]) - 1.0) > 1e-12)
        throw std::invalid_argument("build_cmv: terminal coefficient must have unit modulus");

    auto const size = static_cast<Eigen::Index>(n);
    Eigen::MatrixXcd l = Eigen::MatrixXcd::Zero(size, size);
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(size, size);
    m(0, 0) = 1.0;
    for (std::size_t j = 0; j < n; ++j)
        place_theta(j % 2 == 0 ? l : m, j, coeffs[j]);

    return {n, l * m};
}

}  // namespace cbeta
