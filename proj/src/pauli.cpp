#include "otm/pauli.hpp"

namespace otm {

namespace {

constexpr char pauli_chars[4] = {'I', 'X', 'Y', 'Z'};

Matrix single_pauli(int digit) {
    Matrix m(2, 2);
    switch (digit) {
        case 0: m << 1, 0, 0, 1; break;                                  // I
        case 1: m << 0, 1, 1, 0; break;                                  // X
        case 2: m << 0, Complex(0, -1), Complex(0, 1), 0; break;         // Y
        default: m << 1, 0, 0, -1; break;                                // Z
    }
    return m;
}

// n such that d == 2^n, or -1 when d is not a power of two (or < 2).
int qubit_count(Eigen::Index d) {
    if (d < 2 || (d & (d - 1)) != 0) return -1;
    int n = 0;
    while ((Eigen::Index{1} << n) < d) ++n;
    return n;
}

void check_index(int n_qubits, int index) {
    const long count = 1L << (2 * n_qubits);
    if (n_qubits < 1 || index < 0 || index >= count)
        throw std::invalid_argument("pauli_string: index out of range");
}

}  // namespace

Matrix pauli_string(int n_qubits, int index) {
    check_index(n_qubits, index);
    // Most significant base-4 digit acts on the first tensor factor.
    Matrix out = single_pauli((index >> (2 * (n_qubits - 1))) & 3);
    for (int q = n_qubits - 2; q >= 0; --q)
        out = kron(out, single_pauli((index >> (2 * q)) & 3));
    return out;
}

std::string pauli_label(int n_qubits, int index) {
    check_index(n_qubits, index);
    std::string label(n_qubits, 'I');
    for (int q = 0; q < n_qubits; ++q)
        label[n_qubits - 1 - q] = pauli_chars[(index >> (2 * q)) & 3];
    return label;
}

PauliDecomposition pauli_decompose(const Matrix& m) {
    const int n = qubit_count(m.rows());
    if (m.rows() != m.cols() || n < 0)
        throw NotPowerOfTwoDim("pauli_decompose: dimension is not 2^n");
    if (!is_finite(m))
        throw std::invalid_argument("pauli_decompose: non-finite entries");

    const double d = static_cast<double>(m.rows());
    PauliDecomposition dec;
    dec.n_qubits = n;
    dec.coeffs.resize(std::size_t{1} << (2 * n));
    for (std::size_t k = 0; k < dec.coeffs.size(); ++k) {
        const Matrix sigma = pauli_string(n, static_cast<int>(k));
        // tr(m sigma) = sum_ij m_ij sigma_ji
        dec.coeffs[k] = (m.transpose().cwiseProduct(sigma)).sum() / d;
    }
    return dec;
}

Matrix pauli_reconstruct(const PauliDecomposition& dec) {
    const Eigen::Index d = Eigen::Index{1} << dec.n_qubits;
    Matrix out = Matrix::Zero(d, d);
    for (std::size_t k = 0; k < dec.coeffs.size(); ++k)
        if (dec.coeffs[k] != Complex(0, 0))
            out += dec.coeffs[k] * pauli_string(dec.n_qubits, static_cast<int>(k));
    return out;
}

}  // namespace otm
