#include "mdof/hilbert.hpp"

#include <Eigen/Eigenvalues>

#include <numeric>
#include <string>

namespace mdof {

const char* dof_name(Dof d) {
    switch (d) {
        case Dof::polarization: return "polarization";
        case Dof::oam: return "oam";
        case Dof::frequency: return "frequency";
    }
    return "?";
}

HilbertLabel::HilbertLabel(std::vector<Factor> factors) : factors_(std::move(factors)) {
    dim_ = 1;
    for (const auto& f : factors_) {
        if (f.dim < 1) throw ParamOutOfRange("HilbertLabel: factor dimension must be >= 1");
        dim_ *= f.dim;
    }
}

HilbertLabel HilbertLabel::qubits(Dof dof, int count) {
    std::vector<Factor> fs(static_cast<size_t>(count), Factor{dof, 2});
    return HilbertLabel(std::move(fs));
}

HilbertLabel HilbertLabel::single(Dof dof, int dim) {
    return HilbertLabel({Factor{dof, dim}});
}

const Factor& HilbertLabel::factor(int i) const {
    if (i < 0 || i >= factor_count()) throw IndexOutOfRange("HilbertLabel: factor index");
    return factors_[static_cast<size_t>(i)];
}

bool HilbertLabel::all_qubits() const {
    for (const auto& f : factors_)
        if (f.dim != 2) return false;
    return !factors_.empty();
}

HilbertLabel HilbertLabel::concat(const HilbertLabel& rhs) const {
    std::vector<Factor> fs = factors_;
    fs.insert(fs.end(), rhs.factors_.begin(), rhs.factors_.end());
    return HilbertLabel(std::move(fs));
}

std::vector<int> HilbertLabel::factors_of(Dof dof) const {
    std::vector<int> out;
    for (int i = 0; i < factor_count(); ++i)
        if (factors_[static_cast<size_t>(i)].dof == dof) out.push_back(i);
    return out;
}

StateVector::StateVector(HilbertLabel l, Vec a) : label(std::move(l)), amplitudes(std::move(a)) {
    if (amplitudes.size() != label.dim())
        throw DimensionMismatch("StateVector: amplitude count " +
                                std::to_string(amplitudes.size()) + " != label dim " +
                                std::to_string(label.dim()));
}

bool StateVector::is_normalized(double tol) const {
    return std::abs(amplitudes.squaredNorm() - 1.0) <= tol;
}

DensityMatrix::DensityMatrix(HilbertLabel l, Mat m) : label(std::move(l)), entries(std::move(m)) {
    if (entries.rows() != label.dim() || entries.cols() != label.dim())
        throw DimensionMismatch("DensityMatrix: entries must be dim x dim");
}

double DensityMatrix::hermiticity_residual() const {
    return (entries - entries.adjoint()).cwiseAbs().maxCoeff();
}

double DensityMatrix::min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<Mat> es((entries + entries.adjoint()) / 2.0);
    return es.eigenvalues().minCoeff();
}

bool DensityMatrix::is_valid(double herm_tol, double trace_tol, double psd_tol) const {
    if (hermiticity_residual() > herm_tol) return false;
    double tr = trace_real();
    if (sub_normalized) {
        if (tr > 1.0 + trace_tol || tr < -trace_tol) return false;
    } else {
        if (std::abs(tr - 1.0) > trace_tol) return false;
    }
    return min_eigenvalue() >= -psd_tol;
}

Operator::Operator(HilbertLabel l, Mat m) : label(std::move(l)), entries(std::move(m)) {
    if (entries.rows() != entries.cols() || entries.rows() != label.dim())
        throw DimensionMismatch("Operator: entries must be square and match the label");
}

bool Operator::is_hermitian(double tol) const {
    return (entries - entries.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

Mat kron(const Mat& a, const Mat& b) {
    Mat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

StateVector tensor(const StateVector& a, const StateVector& b) {
    Vec out(a.amplitudes.size() * b.amplitudes.size());
    for (Eigen::Index i = 0; i < a.amplitudes.size(); ++i)
        out.segment(i * b.amplitudes.size(), b.amplitudes.size()) = a.amplitudes(i) * b.amplitudes;
    return StateVector(a.label.concat(b.label), std::move(out));
}

Operator tensor(const Operator& a, const Operator& b) {
    return Operator(a.label.concat(b.label), kron(a.entries, b.entries));
}

StateVector normalize(const StateVector& v) {
    double n = v.norm();
    if (n <= 1e-15) throw ZeroVector("normalize: zero vector");
    return StateVector(v.label, v.amplitudes / n);
}

DensityMatrix density_from_pure(const StateVector& psi) {
    return DensityMatrix(psi.label, psi.amplitudes * psi.amplitudes.adjoint());
}

namespace {

struct FactorSplit {
    // multi-index strides for (kept, traced) factor groups
    std::vector<int> keep_dims, trace_dims;
    std::vector<int> keep_strides, trace_strides;
    int keep_dim = 1, trace_dim = 1;
};

FactorSplit split_factors(const HilbertLabel& label, const std::vector<int>& keep) {
    const int nf = label.factor_count();
    std::vector<bool> kept(static_cast<size_t>(nf), false);
    for (int k : keep) {
        if (k < 0 || k >= nf) throw IndexOutOfRange("partial_trace: factor index");
        if (kept[static_cast<size_t>(k)]) throw DuplicateTarget("partial_trace: duplicate factor");
        kept[static_cast<size_t>(k)] = true;
    }
    std::vector<int> strides(static_cast<size_t>(nf), 1);
    for (int i = nf - 2; i >= 0; --i)
        strides[static_cast<size_t>(i)] =
            strides[static_cast<size_t>(i + 1)] * label.factor(i + 1).dim;

    FactorSplit s;
    for (int k : keep) {  // preserve the caller's order for kept factors
        s.keep_dims.push_back(label.factor(k).dim);
        s.keep_strides.push_back(strides[static_cast<size_t>(k)]);
        s.keep_dim *= label.factor(k).dim;
    }
    for (int i = 0; i < nf; ++i) {
        if (kept[static_cast<size_t>(i)]) continue;
        s.trace_dims.push_back(label.factor(i).dim);
        s.trace_strides.push_back(strides[static_cast<size_t>(i)]);
        s.trace_dim *= label.factor(i).dim;
    }
    return s;
}

int compose_index(int packed, const std::vector<int>& dims, const std::vector<int>& strides) {
    int idx = 0;
    for (int i = static_cast<int>(dims.size()) - 1; i >= 0; --i) {
        idx += (packed % dims[static_cast<size_t>(i)]) * strides[static_cast<size_t>(i)];
        packed /= dims[static_cast<size_t>(i)];
    }
    return idx;
}

} // namespace

DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& keep) {
    FactorSplit s = split_factors(rho.label, keep);

    std::vector<Factor> kept_factors;
    for (int k : keep) kept_factors.push_back(rho.label.factor(k));
    HilbertLabel out_label{kept_factors};

    Mat out = Mat::Zero(s.keep_dim, s.keep_dim);
    for (int a = 0; a < s.keep_dim; ++a) {
        int ia = compose_index(a, s.keep_dims, s.keep_strides);
        for (int b = 0; b < s.keep_dim; ++b) {
            int ib = compose_index(b, s.keep_dims, s.keep_strides);
            Cx sum = 0.0;
            for (int t = 0; t < s.trace_dim; ++t) {
                int it = compose_index(t, s.trace_dims, s.trace_strides);
                sum += rho.entries(ia + it, ib + it);
            }
            out(a, b) = sum;
        }
    }
    DensityMatrix dm(out_label, std::move(out));
    dm.sub_normalized = rho.sub_normalized;
    return dm;
}

DensityMatrix partial_trace_state(const StateVector& psi, const std::vector<int>& keep) {
    return partial_trace(density_from_pure(psi), keep);
}

Operator embed(const Operator& op, const HilbertLabel& space, int factor_index) {
    if (factor_index < 0 || factor_index >= space.factor_count())
        throw IndexOutOfRange("embed: factor index");
    if (op.label.dim() != space.factor(factor_index).dim)
        throw DimensionMismatch("embed: operator does not match the target factor");

    int left = 1, right = 1;
    for (int i = 0; i < factor_index; ++i) left *= space.factor(i).dim;
    for (int i = factor_index + 1; i < space.factor_count(); ++i) right *= space.factor(i).dim;

    Mat m = kron(Mat::Identity(left, left), kron(op.entries, Mat::Identity(right, right)));
    return Operator(space, std::move(m));
}

Mat apply_factor_left(const Mat& op, const Mat& m, const HilbertLabel& space, int factor_index) {
    if (factor_index < 0 || factor_index >= space.factor_count())
        throw IndexOutOfRange("apply_factor_left: factor index");
    const int k = space.factor(factor_index).dim;
    if (op.rows() != k || op.cols() != k)
        throw DimensionMismatch("apply_factor_left: operator does not match the factor");

    int left = 1, right = 1;
    for (int i = 0; i < factor_index; ++i) left *= space.factor(i).dim;
    for (int i = factor_index + 1; i < space.factor_count(); ++i) right *= space.factor(i).dim;

    Mat out = Mat::Zero(m.rows(), m.cols());
    // index = (l*k + a)*right + r
    for (int l = 0; l < left; ++l)
        for (int r = 0; r < right; ++r)
            for (int a = 0; a < k; ++a) {
                const int row = (l * k + a) * right + r;
                for (int b = 0; b < k; ++b) {
                    const Cx c = op(a, b);
                    if (c == Cx(0.0)) continue;
                    out.row(row) += c * m.row((l * k + b) * right + r);
                }
            }
    return out;
}

Vec apply_factor(const Mat& op, const Vec& v, const HilbertLabel& space, int factor_index) {
    if (factor_index < 0 || factor_index >= space.factor_count())
        throw IndexOutOfRange("apply_factor: factor index");
    const int k = space.factor(factor_index).dim;
    if (op.rows() != k || op.cols() != k)
        throw DimensionMismatch("apply_factor: operator does not match the factor");

    int left = 1, right = 1;
    for (int i = 0; i < factor_index; ++i) left *= space.factor(i).dim;
    for (int i = factor_index + 1; i < space.factor_count(); ++i) right *= space.factor(i).dim;

    Vec out = Vec::Zero(v.size());
    for (int l = 0; l < left; ++l)
        for (int r = 0; r < right; ++r)
            for (int a = 0; a < k; ++a) {
                Cx sum = 0.0;
                for (int b = 0; b < k; ++b) sum += op(a, b) * v((l * k + b) * right + r);
                out((l * k + a) * right + r) = sum;
            }
    return out;
}

} // namespace mdof
