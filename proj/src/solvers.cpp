#include "tvmdp/solvers.hpp"

#include <Eigen/Dense>

#include <cmath>

namespace tvmdp::detail {

std::vector<double> solve_linear(std::vector<std::vector<double>> a, std::vector<double> b) {
    const auto n = static_cast<Eigen::Index>(b.size());
    Eigen::MatrixXd m(n, n);
    Eigen::VectorXd rhs(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        rhs(i) = b[static_cast<std::size_t>(i)];
        for (Eigen::Index j = 0; j < n; ++j) m(i, j) = a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(m);
    const double scale = m.cwiseAbs().maxCoeff();
    const double pivot_min = lu.matrixLU().diagonal().cwiseAbs().minCoeff();
    if (!(pivot_min > scale * 1e-14))
        throw std::runtime_error("singular linear system; the instance's transition rows are malformed");
    Eigen::VectorXd x = lu.solve(rhs);
    std::vector<double> out(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = x(i);
    return out;
}

std::vector<Rational> solve_linear(std::vector<std::vector<Rational>> a, std::vector<Rational> b) {
    const int n = static_cast<int>(b.size());
    for (int col = 0; col < n; ++col) {
        int pivot = -1;
        for (int row = col; row < n; ++row)
            if (a[static_cast<std::size_t>(row)][static_cast<std::size_t>(col)] != 0) {
                pivot = row;
                break;
            }
        if (pivot < 0)
            throw std::runtime_error("singular linear system; the instance's transition rows are malformed");
        std::swap(a[static_cast<std::size_t>(col)], a[static_cast<std::size_t>(pivot)]);
        std::swap(b[static_cast<std::size_t>(col)], b[static_cast<std::size_t>(pivot)]);
        const Rational inv = 1 / a[static_cast<std::size_t>(col)][static_cast<std::size_t>(col)];
        for (int row = col + 1; row < n; ++row) {
            Rational factor = a[static_cast<std::size_t>(row)][static_cast<std::size_t>(col)] * inv;
            if (factor == 0) continue;
            for (int j = col; j < n; ++j)
                a[static_cast<std::size_t>(row)][static_cast<std::size_t>(j)] -=
                    factor * a[static_cast<std::size_t>(col)][static_cast<std::size_t>(j)];
            b[static_cast<std::size_t>(row)] -= factor * b[static_cast<std::size_t>(col)];
        }
    }
    std::vector<Rational> x(static_cast<std::size_t>(n), Rational(0));
    for (int row = n - 1; row >= 0; --row) {
        Rational acc = b[static_cast<std::size_t>(row)];
        for (int j = row + 1; j < n; ++j)
            acc -= a[static_cast<std::size_t>(row)][static_cast<std::size_t>(j)] * x[static_cast<std::size_t>(j)];
        x[static_cast<std::size_t>(row)] = acc / a[static_cast<std::size_t>(row)][static_cast<std::size_t>(row)];
    }
    return x;
}

}  // namespace tvmdp::detail
