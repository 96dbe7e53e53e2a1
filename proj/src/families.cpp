#include <random>

#include "detail.hpp"
#include "jsr/cli.hpp"

namespace jsr::cli {

namespace {

// Integer-entry family member, kept exact so it can also be emitted over Q.
using IntMatrix = std::vector<std::vector<int>>;

IntMatrix unit(std::size_t d, std::size_t i, std::size_t j)
{
    IntMatrix m(d, std::vector<int>(d, 0));
    m[i][j] = 1;
    return m;
}

// Haar-distributed: Q from the QR factorization of a complex Ginibre
// matrix, with the phases of diag(R) moved into Q.
Matrix haar_unitary(std::size_t d, std::mt19937_64& rng)
{
    const Matrix z = detail::random_gaussian(d, rng);
    Eigen::HouseholderQR<Matrix> qr(z);
    Matrix q = qr.householderQ();
    const Matrix r = qr.matrixQR();
    for (std::size_t j = 0; j < d; ++j) {
        const Complex rjj = r(j, j);
        const double mod = std::abs(rjj);
        if (mod > 0.0)
            q.col(j) *= rjj / mod;
    }
    return q;
}

InputDocument integer_document(std::size_t d, const std::vector<IntMatrix>& members,
                               std::vector<std::string> labels, const FamilyParams& params)
{
    InputDocument doc;
    doc.dim = d;
    doc.labels = std::move(labels);
    if (params.prime) {
        if (!padic::is_prime(*params.prime))
            throw Error(ErrorCode::InvalidArgument, std::to_string(*params.prime) + " is not prime");
        doc.field = Field::RationalPadic;
        doc.prime = *params.prime;
        for (const auto& m : members) {
            padic::RationalMatrix r(d);
            for (std::size_t i = 0; i < d; ++i)
                for (std::size_t j = 0; j < d; ++j)
                    r(i, j) = m[i][j];
            doc.rational_members.push_back(std::move(r));
        }
    } else {
        for (const auto& m : members) {
            Matrix c(d, d);
            for (std::size_t i = 0; i < d; ++i)
                for (std::size_t j = 0; j < d; ++j)
                    c(i, j) = static_cast<double>(m[i][j]);
            doc.complex_members.push_back(std::move(c));
        }
    }
    return doc;
}

} // namespace

std::vector<std::string> family_names()
{
    return {"elementary", "shift", "unitary-mix", "eps-identity", "unipotent-pair"};
}

InputDocument make_family(std::string_view name, const FamilyParams& params, const Limits& limits)
{
    const std::size_t d = params.dim;
    if (d < 1 || d > limits.max_dim)
        throw Error(ErrorCode::InvalidArgument,
                    "dimension must lie in [1, " + std::to_string(limits.max_dim) + "]");
    InputDocument doc;
    if (name == "elementary") {
        std::vector<IntMatrix> ms;
        std::vector<std::string> labels;
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j) {
                ms.push_back(unit(d, i, j));
                labels.push_back("E" + std::to_string(i + 1) + "," + std::to_string(j + 1));
            }
        doc = integer_document(d, ms, std::move(labels), params);
    } else if (name == "shift") {
        std::vector<IntMatrix> ms;
        std::vector<std::string> labels;
        for (std::size_t i = 0; i + 1 < d; ++i) {
            ms.push_back(unit(d, i, i + 1));
            labels.push_back("E" + std::to_string(i + 1) + "," + std::to_string(i + 2));
        }
        ms.push_back(unit(d, d - 1, 0));
        labels.push_back("E" + std::to_string(d) + ",1");
        doc = integer_document(d, ms, std::move(labels), params);
    } else if (name == "unipotent-pair") {
        if (d != 2)
            throw Error(ErrorCode::InvalidArgument, "unipotent-pair is defined for dim 2 only");
        doc = integer_document(2, {{{1, 1}, {0, 1}}, {{1, 0}, {1, 1}}}, {"a", "b"}, params);
    } else if (name == "unitary-mix" || name == "eps-identity") {
        if (params.prime)
            throw Error(ErrorCode::InvalidArgument,
                        std::string(name) + " has no exact rational form");
        if (params.samples < 1)
            throw Error(ErrorCode::InvalidArgument, "samples must be >= 1");
        const bool mix = name == "unitary-mix";
        if (!mix && !(params.eps > 0.0 && params.eps < 1.0))
            throw Error(ErrorCode::InvalidArgument, "eps must lie in (0, 1)");
        std::mt19937_64 rng(params.seed);
        doc.dim = d;
        if (!mix) {
            doc.complex_members.push_back(Matrix::Identity(d, d));
            doc.labels.push_back("I");
        }
        for (int k = 0; k < params.samples; ++k) {
            const Matrix u = haar_unitary(d, rng);
            doc.complex_members.push_back(mix ? u : Matrix(params.eps * u));
            doc.labels.push_back((mix ? "U" : "eps*U") + std::to_string(k + 1));
        }
        if (mix) {
            Matrix t = Matrix::Zero(d, d);
            for (std::size_t i = 0; i < d; ++i)
                t(i, i) = 1.0 / static_cast<double>(i + 2);
            doc.complex_members.push_back(std::move(t));
            doc.labels.push_back("t");
        }
        doc.metadata["seed"] = params.seed;
        doc.metadata["samples"] = params.samples;
        doc.metadata["caveat"] = "finite sample of the unitary group";
        if (!mix)
            doc.metadata["eps"] = params.eps;
    } else {
        throw Error(ErrorCode::InvalidArgument, "unknown family \"" + std::string(name) + "\"");
    }
    doc.metadata["family"] = std::string(name);
    return doc;
}

} // namespace jsr::cli
