#include "crmadapt/lintf/expm.hpp"

#include <cmath>
#include <stdexcept>

namespace crmadapt::lintf {

Matrix expm(const Matrix& A) {
    if (A.rows() != A.cols()) {
        throw std::invalid_argument("expm: matrix must be square");
    }
    const Eigen::Index n = A.rows();
    if (n == 0) {
        return A;
    }
    static constexpr double b[] = {64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
                                   1187353796428800.0,  129060195264000.0,   10559470521600.0,
                                   670442572800.0,      33522128640.0,       1323241920.0,
                                   40840800.0,          960960.0,            16380.0,
                                   182.0,               1.0};
    constexpr double kTheta13 = 5.371920351148152;

    const double norm1 = A.cwiseAbs().colwise().sum().maxCoeff();
    int squarings = 0;
    if (norm1 > kTheta13) {
        squarings = static_cast<int>(std::ceil(std::log2(norm1 / kTheta13)));
    }
    const Matrix X = A / std::ldexp(1.0, squarings);
    const Matrix I = Matrix::Identity(n, n);
    const Matrix X2 = X * X;
    const Matrix X4 = X2 * X2;
    const Matrix X6 = X4 * X2;

    const Matrix U = X * (X6 * (b[13] * X6 + b[11] * X4 + b[9] * X2) + b[7] * X6 + b[5] * X4 +
                          b[3] * X2 + b[1] * I);
    const Matrix V =
        X6 * (b[12] * X6 + b[10] * X4 + b[8] * X2) + b[6] * X6 + b[4] * X4 + b[2] * X2 + b[0] * I;
    Matrix R = (V - U).partialPivLu().solve(V + U);
    for (int k = 0; k < squarings; ++k) {
        R = R * R;
    }
    return R;
}

}  // namespace crmadapt::lintf
